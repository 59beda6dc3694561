//! # emptystar
//!
//! Empty-simplex statistics of finite point sets in ℝ^d, and seeded
//! Monte-Carlo experiments over uniform samples from convex bodies.
//!
//! A `(d+1)`-subset of a point set is an *empty simplex* when its open convex
//! hull contains no other point of the set. The library computes
//!
//! - total empty-simplex counts and per-vertex / per-tuple degrees,
//! - maximal stars (`deg_k`) with deterministic witnesses,
//! - the close-base functionals `N_{γn}` / `F_{γn}`,
//! - closed-form constants and hyperplane-measure Monte-Carlo integrals,
//! - reproducible experiment sweeps with CSV/JSON output.
//!
//! All emptiness decisions route through exact-sign orientation predicates,
//! so counts are integers with no tolerances. Sampling is driven by a
//! counter-based generator: identical `(seed, stream)` pairs reproduce
//! identical point sets regardless of parallelism.

pub mod bodies;
pub mod enumerate;
pub mod experiments;
pub mod geom;
pub mod integrals;
pub mod rng;
pub mod svg;

use thiserror::Error;

/// Crate-wide error type.
///
/// `is_validation` distinguishes bad inputs (CLI exit code 2) from internal
/// failures (exit code 1).
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("coordinates must be finite")]
    NonFinite,

    #[error("degenerate simplex (zero orientation) on points {indices:?}")]
    DegenerateSimplex { indices: Vec<usize> },

    #[error("point set not in general position: points {indices:?} are affinely degenerate")]
    NotGeneralPosition { indices: Vec<usize> },

    #[error("duplicate points at indices {a} and {b}")]
    DuplicatePoint { a: usize, b: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("sampler exceeded retry cap ({0} attempts)")]
    RetryCapExceeded(usize),

    #[error("refusing to overwrite {0} (pass --force)")]
    WouldOverwrite(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by caller input rather than internal failure.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Io(_))
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
