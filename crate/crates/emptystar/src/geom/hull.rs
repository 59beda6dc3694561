//! 2D convex hull (monotone chain with exact orientation signs).
//!
//! Only the planar hull is provided; it backs the facet-extension lower
//! bound `3 N >= 2 C(n,2) - h` and the SVG renderer.

use super::predicates::orient2d_sign;
use super::PointSet;
use crate::{Error, Result};

/// Indices of the convex hull vertices in counterclockwise order.
///
/// Assumes general position (no 3 collinear); collinear triples on the hull
/// would be dropped silently, which is fine for the callers here.
pub fn convex_hull_2d(ps: &PointSet) -> Result<Vec<usize>> {
    if ps.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: ps.dim(),
        });
    }
    let n = ps.len();
    if n < 3 {
        return Err(Error::TooFewPoints { needed: 3, got: n });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by(|&a, &b| ps.point(a).partial_cmp(ps.point(b)).unwrap());

    let build = |iter: &mut dyn Iterator<Item = usize>| {
        let mut chain: Vec<usize> = Vec::new();
        for i in iter {
            while chain.len() >= 2 {
                let a = ps.point(chain[chain.len() - 2]);
                let b = ps.point(chain[chain.len() - 1]);
                if orient2d_sign(a, b, ps.point(i)) <= 0 {
                    chain.pop();
                } else {
                    break;
                }
            }
            chain.push(i);
        }
        chain
    };

    let lower = build(&mut order.iter().copied());
    let upper = build(&mut order.iter().rev().copied());
    let mut hull = lower;
    hull.pop();
    hull.extend_from_slice(&upper[..upper.len() - 1]);
    Ok(hull)
}

/// Number of edges of the planar convex hull (= number of hull vertices).
pub fn hull_edge_count(ps: &PointSet) -> Result<usize> {
    Ok(convex_hull_2d(ps)?.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_hull() {
        let ps = PointSet::from_points(&[
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
            vec![0.0, 1.0],
            vec![0.5, 0.4],
        ])
        .unwrap();
        let hull = convex_hull_2d(&ps).unwrap();
        assert_eq!(hull.len(), 4);
        assert!(!hull.contains(&4));
        // CCW order check.
        for w in 0..hull.len() {
            let a = ps.point(hull[w]);
            let b = ps.point(hull[(w + 1) % hull.len()]);
            let c = ps.point(hull[(w + 2) % hull.len()]);
            assert_eq!(orient2d_sign(a, b, c), 1);
        }
    }

    #[test]
    fn triangle_hull_edge_count() {
        let ps = PointSet::from_points(&[
            vec![0.0, 0.0],
            vec![2.0, 0.1],
            vec![1.0, 3.0],
            vec![1.0, 1.0],
        ])
        .unwrap();
        assert_eq!(hull_edge_count(&ps).unwrap(), 3);
    }
}
