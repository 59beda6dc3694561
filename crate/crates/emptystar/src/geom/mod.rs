//! Points, point sets, simplex keys, and exact-sign predicates.

pub mod exact;
pub mod hull;
pub mod io;
pub mod predicates;

use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// A single point in ℝ^d with finite coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::invalid("points must have dimension >= 2"));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Point { coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }
}

/// An immutable list of n points in ℝ^d, stored flat.
///
/// Distinctness and general position are *not* enforced at construction;
/// producers that need them (samplers, enumerators) check exactly and fail
/// fast. `general_position_checked` records whether the full exact check has
/// been run on this set.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PointSet {
    dim: usize,
    coords: Vec<f64>,
    general_position_checked: bool,
}

impl PointSet {
    /// Build from flat coordinates (`n * dim` values, point-major).
    pub fn from_flat(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::invalid("dimension must be >= 2"));
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(Error::invalid("coordinate count not divisible by dim"));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(PointSet {
            dim,
            coords,
            general_position_checked: false,
        })
    }

    pub fn from_points(points: &[Vec<f64>]) -> Result<Self> {
        let dim = points.first().map(|p| p.len()).unwrap_or(2);
        for p in points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: p.len(),
                });
            }
        }
        Self::from_flat(dim, points.concat())
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn general_position_checked(&self) -> bool {
        self.general_position_checked
    }

    /// Exact duplicate scan; cheap (sort by coordinates).
    pub fn check_distinct(&self) -> Result<()> {
        let n = self.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_unstable_by(|&a, &b| {
            self.point(a)
                .partial_cmp(self.point(b))
                .expect("finite coords")
        });
        for w in order.windows(2) {
            if self.point(w[0]) == self.point(w[1]) {
                return Err(Error::DuplicatePoint {
                    a: w[0].min(w[1]),
                    b: w[0].max(w[1]),
                });
            }
        }
        Ok(())
    }

    /// Run the full exact general-position check and record the result.
    pub fn verify_general_position(&mut self) -> Result<()> {
        predicates::check_general_position(self)?;
        self.general_position_checked = true;
        Ok(())
    }

    /// True iff no k+2 points lie in a common k-dimensional affine subspace
    /// for any k <= d-1 (for d=2: no 3 collinear, no duplicates).
    pub fn is_general_position(&self) -> bool {
        predicates::check_general_position(self).is_ok()
    }
}

/// Identifies a (k-1)-dimensional simplex by the sorted indices of its
/// vertices in a `PointSet`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SimplexKey {
    indices: Vec<u32>,
}

impl SimplexKey {
    /// Indices must be strictly increasing and all below `n`.
    pub fn new(indices: Vec<u32>, n: usize) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::invalid("simplex key must be nonempty"));
        }
        if !indices.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::invalid("simplex key indices must be strictly increasing"));
        }
        if indices.last().copied().unwrap() as usize >= n {
            return Err(Error::invalid("simplex key index out of range"));
        }
        Ok(SimplexKey { indices })
    }

    /// Sorts and validates distinctness before constructing.
    pub fn from_unsorted(mut indices: Vec<u32>, n: usize) -> Result<Self> {
        indices.sort_unstable();
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("simplex key indices must be distinct"));
        }
        Self::new(indices, n)
    }

    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, idx: u32) -> bool {
        self.indices.binary_search(&idx).is_ok()
    }

    /// Compact "i,j,k" form used as a JSON map key.
    pub fn label(&self) -> String {
        self.indices
            .iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Exact binomial coefficient; saturates far above anything enumerable here.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}
