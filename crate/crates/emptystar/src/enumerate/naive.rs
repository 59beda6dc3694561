//! Brute-force empty-simplex enumeration straight from the definition.
//!
//! Every (d+1)-subset is tested for emptiness against every other point with
//! exact predicates: O(C(n, d+1) * n) predicate calls. This is the oracle the
//! fast planar path is checked against, and the production path for d >= 3.

use super::accum::DegreeAccum;
use crate::geom::predicates::{next_combination, orient2d_sign, orient3d_sign, orientation};
use crate::geom::PointSet;
use crate::{Error, Result};
use rayon::prelude::*;

/// Emptiness of the open simplex on `subset` against all other points.
///
/// A zero orientation anywhere means the input violates general position and
/// aborts the enumeration with the offending indices.
pub(crate) fn subset_is_empty(ps: &PointSet, subset: &[usize]) -> Result<bool> {
    let d = ps.dim();
    let n = ps.len();
    match d {
        2 => {
            let (a, b, c) = (ps.point(subset[0]), ps.point(subset[1]), ps.point(subset[2]));
            let sigma = orient2d_sign(a, b, c);
            if sigma == 0 {
                return Err(Error::NotGeneralPosition {
                    indices: subset.to_vec(),
                });
            }
            for q in 0..n {
                if subset.contains(&q) {
                    continue;
                }
                let p = ps.point(q);
                let s0 = orient2d_sign(p, b, c);
                let s1 = orient2d_sign(a, p, c);
                let s2 = orient2d_sign(a, b, p);
                if s0 == 0 || s1 == 0 || s2 == 0 {
                    let mut idx = subset.to_vec();
                    idx.push(q);
                    idx.sort_unstable();
                    return Err(Error::NotGeneralPosition { indices: idx });
                }
                if s0 == sigma && s1 == sigma && s2 == sigma {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        3 => {
            let tet = Tet3::build(ps, subset)?;
            for q in 0..n {
                if subset.contains(&q) {
                    continue;
                }
                if tet.strictly_contains(ps, subset, q)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        _ => {
            let mut verts: Vec<&[f64]> = subset.iter().map(|&i| ps.point(i)).collect();
            let sigma = orientation(&verts)?;
            if sigma == 0 {
                return Err(Error::NotGeneralPosition {
                    indices: subset.to_vec(),
                });
            }
            'cand: for q in 0..n {
                if subset.contains(&q) {
                    continue;
                }
                let p = ps.point(q);
                for i in 0..verts.len() {
                    let saved = verts[i];
                    verts[i] = p;
                    let s = orientation(&verts)?;
                    verts[i] = saved;
                    if s == 0 {
                        return Err(degeneracy(subset, q));
                    }
                    if s != sigma {
                        continue 'cand;
                    }
                }
                return Ok(false);
            }
            Ok(true)
        }
    }
}

fn degeneracy(subset: &[usize], q: usize) -> Error {
    let mut idx = subset.to_vec();
    idx.push(q);
    idx.sort_unstable();
    Error::NotGeneralPosition { indices: idx }
}

/// Tetrahedron membership with cached facet planes.
///
/// Each facet i stores (normal, offset) oriented so the opposite vertex is
/// on the positive side. A candidate is strictly inside iff every plane value
/// is strictly positive. Plane values are f64 with a conservative static
/// error bound; values inside the bound fall back to the exact predicate, so
/// results are identical to the pure exact path.
struct Tet3 {
    planes: [[f64; 4]; 4],
    bbox: [[f64; 2]; 3],
    errbound: f64,
}

impl Tet3 {
    fn build(ps: &PointSet, subset: &[usize]) -> Result<Tet3> {
        let v: [&[f64]; 4] = [
            ps.point(subset[0]),
            ps.point(subset[1]),
            ps.point(subset[2]),
            ps.point(subset[3]),
        ];
        if orient3d_sign(v[0], v[1], v[2], v[3]) == 0 {
            return Err(Error::NotGeneralPosition {
                indices: subset.to_vec(),
            });
        }
        let mut bbox = [[f64::MAX, f64::MIN]; 3];
        let mut max_mag = 0.0f64;
        for p in v {
            for c in 0..3 {
                bbox[c][0] = bbox[c][0].min(p[c]);
                bbox[c][1] = bbox[c][1].max(p[c]);
                max_mag = max_mag.max(p[c].abs());
            }
        }
        // Conservative forward bound on the plane-value rounding error; the
        // derivation gives ~400 eps M^3, padded to 1024 eps max(1, M)^3.
        let m = max_mag.max(1.0);
        let errbound = 1024.0 * f64::EPSILON * m * m * m;

        let mut planes = [[0.0; 4]; 4];
        for i in 0..4 {
            let idx: Vec<usize> = (0..4).filter(|&j| j != i).collect();
            let (a, b, c) = (v[idx[0]], v[idx[1]], v[idx[2]]);
            let u = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
            let w = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
            let mut normal = [
                u[1] * w[2] - u[2] * w[1],
                u[2] * w[0] - u[0] * w[2],
                u[0] * w[1] - u[1] * w[0],
            ];
            let mut offset = normal[0] * a[0] + normal[1] * a[1] + normal[2] * a[2];
            // Orient the positive side toward the opposite vertex.
            let opp = v[i];
            let s_opp = orient3d_sign(a, b, c, opp);
            debug_assert_ne!(s_opp, 0);
            if s_opp < 0 {
                normal.iter_mut().for_each(|x| *x = -*x);
                offset = -offset;
            }
            planes[i] = [normal[0], normal[1], normal[2], offset];
        }
        Ok(Tet3 {
            planes,
            bbox,
            errbound,
        })
    }

    fn strictly_contains(&self, ps: &PointSet, subset: &[usize], q: usize) -> Result<bool> {
        let p = ps.point(q);
        for (coord, range) in p.iter().zip(&self.bbox) {
            if *coord < range[0] || *coord > range[1] {
                return Ok(false);
            }
        }
        for i in 0..4 {
            let pl = &self.planes[i];
            let s = pl[0] * p[0] + pl[1] * p[1] + pl[2] * p[2] - pl[3];
            if s > self.errbound {
                continue;
            }
            if s < -self.errbound {
                return Ok(false);
            }
            // Filter failed: decide this facet exactly.
            let idx: Vec<usize> = (0..4).filter(|&j| j != i).collect();
            let (a, b, c) = (
                ps.point(subset[idx[0]]),
                ps.point(subset[idx[1]]),
                ps.point(subset[idx[2]]),
            );
            let s_exact = orient3d_sign(a, b, c, p);
            if s_exact == 0 {
                return Err(degeneracy(subset, q));
            }
            let s_opp = orient3d_sign(a, b, c, ps.point(subset[i]));
            if s_exact != s_opp {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Visit all empty simplices in lexicographic subset order (sequential).
pub(crate) fn scan(ps: &PointSet, mut visit: impl FnMut(&[usize])) -> Result<()> {
    let d = ps.dim();
    let n = ps.len();
    if n < d + 1 {
        return Err(Error::TooFewPoints { needed: d + 1, got: n });
    }
    ps.check_distinct()?;
    let mut subset: Vec<usize> = (0..=d).collect();
    loop {
        if subset_is_empty(ps, &subset)? {
            visit(&subset);
        }
        if !next_combination(&mut subset, n) {
            return Ok(());
        }
    }
}

/// Parallel counting pass over the leading index; merged counters are
/// order-independent, so the result is identical at any thread count.
pub(crate) fn count(ps: &PointSet, k: Option<usize>) -> Result<DegreeAccum> {
    let d = ps.dim();
    let n = ps.len();
    if n < d + 1 {
        return Err(Error::TooFewPoints { needed: d + 1, got: n });
    }
    ps.check_distinct()?;
    (0..n - d)
        .into_par_iter()
        .map(|lead| {
            let mut acc = DegreeAccum::new(n, d, k);
            let mut rest: Vec<usize> = (lead + 1..lead + 1 + d).collect();
            let mut subset = vec![0usize; d + 1];
            subset[0] = lead;
            loop {
                subset[1..].copy_from_slice(&rest);
                if subset_is_empty(ps, &subset)? {
                    acc.visit(&subset);
                }
                if !advance_tail(&mut rest, n) {
                    break;
                }
            }
            Ok(acc)
        })
        .try_reduce_with(|a, b| Ok(a.merge(b)))
        .unwrap_or_else(|| Err(Error::TooFewPoints { needed: d + 1, got: n }))
}

/// next_combination over the trailing d indices (leading index stays fixed).
fn advance_tail(tail: &mut [usize], n: usize) -> bool {
    let k = tail.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if tail[i] < n - (k - i) {
            tail[i] += 1;
            for j in i + 1..k {
                tail[j] = tail[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
