//! Point-set file format.
//!
//! Plain text: first line `d n`, then n lines of d decimal coordinates
//! separated by spaces. Values are printed with the shortest decimal
//! representation that round-trips, so write-then-read is bit-exact.

use super::PointSet;
use crate::{Error, Result};
use std::fmt::Write as _;
use std::path::Path;

pub fn format_point_set(ps: &PointSet) -> String {
    let mut out = String::new();
    writeln!(out, "{} {}", ps.dim(), ps.len()).unwrap();
    for p in ps.iter() {
        let row: Vec<String> = p.iter().map(|c| format!("{c}")).collect();
        writeln!(out, "{}", row.join(" ")).unwrap();
    }
    out
}

pub fn parse_point_set(text: &str) -> Result<PointSet> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty point-set file".into()))?;
    let mut parts = header.split_whitespace();
    let dim: usize = parts
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::Parse("header must be 'd n'".into()))?;
    let n: usize = parts
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::Parse("header must be 'd n'".into()))?;
    if parts.next().is_some() {
        return Err(Error::Parse("header must be exactly 'd n'".into()));
    }
    let mut coords = Vec::with_capacity(n * dim);
    for (row, line) in lines.enumerate() {
        if row >= n {
            return Err(Error::Parse(format!("more than {n} coordinate rows")));
        }
        let vals: Vec<f64> = line
            .split_whitespace()
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| Error::Parse(format!("bad coordinate '{t}' on row {row}")))
            })
            .collect::<Result<_>>()?;
        if vals.len() != dim {
            return Err(Error::Parse(format!(
                "row {row} has {} coordinates, expected {dim}",
                vals.len()
            )));
        }
        coords.extend_from_slice(&vals);
    }
    if coords.len() != n * dim {
        return Err(Error::Parse(format!(
            "expected {n} rows, found {}",
            coords.len() / dim.max(1)
        )));
    }
    PointSet::from_flat(dim, coords)
}

pub fn load_point_set(path: &Path) -> Result<PointSet> {
    parse_point_set(&std::fs::read_to_string(path)?)
}

pub fn save_point_set(ps: &PointSet, path: &Path) -> Result<()> {
    std::fs::write(path, format_point_set(ps))?;
    Ok(())
}
