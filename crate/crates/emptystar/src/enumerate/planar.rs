//! Fast planar empty-triangle enumeration.
//!
//! Every empty triangle is charged to its lexicographically smallest vertex
//! (the anchor). For an anchor p, the remaining lex-greater points are sorted
//! by angle around p; their pairwise angular wedges at p span less than a
//! half turn, so for angularly ordered q_i, q_j the open triangle
//! (p, q_i, q_j) contains exactly the points q_k with i < k < j that lie
//! strictly left of the directed line q_i -> q_j.
//!
//! For fixed i the scan over j keeps a stack of candidate blockers. A point
//! is popped when it falls right of the current line; if a popped point were
//! to block a later triangle (p, q_i, q_j), the point that popped it blocks
//! that triangle as well (if q_l were outside the triangle, the triangle's
//! wedge slice below q_l would sit inside (p, q_i, q_l), putting the popped
//! point inside it — contradicting the pop). So "(p, q_i, q_j) is empty" is
//! exactly "stack empty after popping", giving amortized O(1) predicate work
//! per pair: O(n^2 log n + n^3-ish pair scans) total with a tiny constant,
//! and output size T adds only counter updates.
//!
//! Degeneracies are impossible to miss: a collinear triple ties in the
//! angular sort at its lex-min member, and any zero orientation in the stack
//! test aborts with the offending indices.

use super::accum::DegreeAccum;
use crate::geom::predicates::orient2d_sign;
use crate::geom::PointSet;
use crate::{Error, Result};
use rayon::prelude::*;

/// Lexicographic (x, then y) order of all point indices.
fn lex_order(ps: &PointSet) -> Vec<u32> {
    let mut order: Vec<u32> = (0..ps.len() as u32).collect();
    order.sort_unstable_by(|&a, &b| {
        ps.point(a as usize)
            .partial_cmp(ps.point(b as usize))
            .unwrap()
    });
    order
}

/// Scan one anchor; `emit` receives original indices (anchor, q_i, q_j).
fn scan_anchor(
    ps: &PointSet,
    lex: &[u32],
    rank: usize,
    stack: &mut Vec<usize>,
    mut emit: impl FnMut(u32, u32, u32),
) -> Result<()> {
    let anchor = lex[rank];
    let pa = ps.point(anchor as usize);
    let m = lex.len() - rank - 1;
    if m < 2 {
        return Ok(());
    }
    let mut ord: Vec<u32> = lex[rank + 1..].to_vec();
    ord.sort_unstable_by(|&x, &y| {
        orient2d_sign(pa, ps.point(x as usize), ps.point(y as usize))
            .cmp(&0)
            .reverse()
    });
    // Angular ties mean a collinear triple through the anchor.
    for w in ord.windows(2) {
        if orient2d_sign(pa, ps.point(w[0] as usize), ps.point(w[1] as usize)) == 0 {
            let mut idx = vec![anchor as usize, w[0] as usize, w[1] as usize];
            idx.sort_unstable();
            return Err(Error::NotGeneralPosition { indices: idx });
        }
    }
    // Local coordinate cache in angular order.
    let pts: Vec<(f64, f64)> = ord
        .iter()
        .map(|&i| {
            let p = ps.point(i as usize);
            (p[0], p[1])
        })
        .collect();

    for i in 0..m - 1 {
        stack.clear();
        let (ix, iy) = pts[i];
        for j in i + 1..m {
            let (ux, uy) = (pts[j].0 - ix, pts[j].1 - iy);
            while let Some(&top) = stack.last() {
                let (kx, ky) = (pts[top].0 - ix, pts[top].1 - iy);
                // Filtered cross sign with cached q_j - q_i; falls back to
                // the adaptive exact predicate near zero.
                let t1 = ux * ky;
                let t2 = uy * kx;
                let det = t1 - t2;
                let bound = 8.0 * f64::EPSILON * (t1.abs() + t2.abs());
                let s = if det > bound {
                    1
                } else if det < -bound {
                    -1
                } else {
                    orient2d_sign(
                        &[ix, iy],
                        &[pts[j].0, pts[j].1],
                        &[pts[top].0, pts[top].1],
                    )
                };
                match s {
                    -1 => {
                        stack.pop();
                    }
                    1 => break,
                    _ => {
                        let mut idx =
                            vec![ord[i] as usize, ord[j] as usize, ord[top] as usize];
                        idx.sort_unstable();
                        return Err(Error::NotGeneralPosition { indices: idx });
                    }
                }
            }
            if stack.is_empty() {
                emit(anchor, ord[i], ord[j]);
            }
            stack.push(j);
        }
    }
    Ok(())
}

/// Parallel counting pass over anchors.
pub(crate) fn count(ps: &PointSet, k: Option<usize>) -> Result<DegreeAccum> {
    let n = ps.len();
    if ps.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: ps.dim(),
        });
    }
    if n < 3 {
        return Err(Error::TooFewPoints { needed: 3, got: n });
    }
    ps.check_distinct()?;
    let lex = lex_order(ps);
    (0..n)
        .into_par_iter()
        .try_fold(
            || (DegreeAccum::new(n, 2, k), Vec::new()),
            |(mut acc, mut stack), rank| {
                scan_anchor(ps, &lex, rank, &mut stack, |a, b, c| {
                    let mut s = [a as usize, b as usize, c as usize];
                    s.sort_unstable();
                    acc.visit(&s);
                })?;
                Ok((acc, stack))
            },
        )
        .map(|r: Result<_>| r.map(|(acc, _)| acc))
        .try_reduce_with(|a, b| Ok(a.merge(b)))
        .unwrap_or(Err(Error::TooFewPoints { needed: 3, got: n }))
}

/// Full list of empty triangles, canonically sorted.
pub(crate) fn list(ps: &PointSet) -> Result<Vec<[u32; 3]>> {
    let n = ps.len();
    if ps.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: ps.dim(),
        });
    }
    if n < 3 {
        return Err(Error::TooFewPoints { needed: 3, got: n });
    }
    ps.check_distinct()?;
    let lex = lex_order(ps);
    let per_anchor: Vec<Vec<[u32; 3]>> = (0..n)
        .into_par_iter()
        .map(|rank| {
            let mut stack = Vec::new();
            let mut out = Vec::new();
            scan_anchor(ps, &lex, rank, &mut stack, |a, b, c| {
                let mut s = [a, b, c];
                s.sort_unstable();
                out.push(s);
            })?;
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut all: Vec<[u32; 3]> = per_anchor.into_iter().flatten().collect();
    all.sort_unstable();
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::naive;

    fn random_set(n: usize, seed: u64) -> PointSet {
        let mut rng = crate::rng::RngStream::new(seed, 0);
        let pts: Vec<Vec<f64>> = (0..n)
            .map(|_| vec![rng.uniform(), rng.uniform()])
            .collect();
        PointSet::from_points(&pts).unwrap()
    }

    #[test]
    fn matches_naive_on_square() {
        let ps = PointSet::from_points(&[
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
            vec![0.0, 1.0],
        ])
        .unwrap();
        let fast = list(&ps).unwrap();
        assert_eq!(fast.len(), 4);
    }

    #[test]
    fn matches_naive_on_random_instances() {
        for seed in 0..40u64 {
            let n = 4 + (seed as usize % 9);
            let ps = random_set(n, 1000 + seed);
            let mut slow = Vec::new();
            naive::scan(&ps, |s| slow.push([s[0] as u32, s[1] as u32, s[2] as u32])).unwrap();
            let fast = list(&ps).unwrap();
            assert_eq!(fast, slow, "mismatch for n={n} seed={seed}");
        }
    }

    #[test]
    fn counters_match_list() {
        let ps = random_set(30, 9);
        let acc = count(&ps, Some(2)).unwrap();
        let fast = list(&ps).unwrap();
        assert_eq!(acc.total as usize, fast.len());
        let mut deg1 = vec![0u64; 30];
        for t in &fast {
            for &v in t {
                deg1[v as usize] += 1;
            }
        }
        assert_eq!(acc.per_vertex, deg1);
    }

    #[test]
    fn detects_collinear_triples() {
        let ps = PointSet::from_points(&[
            vec![0.0, 0.0],
            vec![0.5, 0.5],
            vec![1.0, 1.0],
            vec![0.3, 0.9],
        ])
        .unwrap();
        match count(&ps, None) {
            Err(Error::NotGeneralPosition { indices }) => {
                assert_eq!(indices, vec![0, 1, 2]);
            }
            other => panic!("expected degeneracy, got {other:?}"),
        }
    }
}
