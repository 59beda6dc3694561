//! Exact-sign geometric predicates and simplex measures.
//!
//! Orientation signs are exact for the given f64 coordinates: d=2 and d=3 use
//! the adaptive-precision predicates from the `robust` crate (Shewchuk's
//! expansions), higher dimensions fall back to exact dyadic-integer
//! determinants. Everything discrete downstream (emptiness, degrees) relies
//! on these signs, so there are no tolerances anywhere in the counting paths.

use super::{exact, PointSet};
use crate::{Error, Result};
use robust::{Coord, Coord3D};

#[inline]
fn sign_of(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

/// Exact sign of the 2D orientation determinant: +1 if `a, b, c` are
/// counterclockwise, -1 if clockwise, 0 if collinear.
#[inline]
pub fn orient2d_sign(a: &[f64], b: &[f64], c: &[f64]) -> i8 {
    sign_of(robust::orient2d(
        Coord { x: a[0], y: a[1] },
        Coord { x: b[0], y: b[1] },
        Coord { x: c[0], y: c[1] },
    ))
}

/// Exact sign of det(b-a, c-a, d-a): +1 when the tetrahedron `a, b, c, d`
/// is positively oriented.
#[inline]
pub fn orient3d_sign(a: &[f64], b: &[f64], c: &[f64], d: &[f64]) -> i8 {
    // robust::orient3d computes det with rows subtracted from the LAST point,
    // which is the opposite sign of the edge-vector convention used here.
    -sign_of(robust::orient3d(
        Coord3D {
            x: a[0],
            y: a[1],
            z: a[2],
        },
        Coord3D {
            x: b[0],
            y: b[1],
            z: b[2],
        },
        Coord3D {
            x: c[0],
            y: c[1],
            z: c[2],
        },
        Coord3D {
            x: d[0],
            y: d[1],
            z: d[2],
        },
    ))
}

/// Exact orientation sign of d+1 points in ℝ^d.
///
/// Returns the sign of the determinant of the d×d matrix of edge vectors
/// from the first point; 0 means the points are affinely degenerate.
pub fn orientation(points: &[&[f64]]) -> Result<i8> {
    let d = points
        .len()
        .checked_sub(1)
        .ok_or_else(|| Error::invalid("orientation needs d+1 points"))?;
    if d < 2 {
        return Err(Error::invalid("orientation requires dimension >= 2"));
    }
    for p in points {
        if p.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: p.len(),
            });
        }
    }
    Ok(match d {
        2 => orient2d_sign(points[0], points[1], points[2]),
        3 => orient3d_sign(points[0], points[1], points[2], points[3]),
        _ => {
            // Homogeneous matrix keeps entries exactly representable; its
            // determinant is (-1)^d times the edge-vector determinant.
            let rows: Vec<Vec<f64>> = points
                .iter()
                .map(|p| {
                    let mut r = p.to_vec();
                    r.push(1.0);
                    r
                })
                .collect();
            let s = exact::det_sign(&rows);
            if d % 2 == 0 {
                s
            } else {
                -s
            }
        }
    })
}

/// d-dimensional volume |det|/d! of the simplex on d+1 points.
pub fn simplex_volume(points: &[&[f64]]) -> Result<f64> {
    let d = points
        .len()
        .checked_sub(1)
        .ok_or_else(|| Error::invalid("simplex_volume needs d+1 points"))?;
    if d < 2 {
        return Err(Error::invalid("simplex_volume requires dimension >= 2"));
    }
    for p in points {
        if p.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: p.len(),
            });
        }
    }
    let det = match d {
        2 => {
            let (a, b, c) = (points[0], points[1], points[2]);
            (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
        }
        3 => {
            let a = points[0];
            let u: Vec<f64> = (0..3).map(|i| points[1][i] - a[i]).collect();
            let v: Vec<f64> = (0..3).map(|i| points[2][i] - a[i]).collect();
            let w: Vec<f64> = (0..3).map(|i| points[3][i] - a[i]).collect();
            u[0] * (v[1] * w[2] - v[2] * w[1]) - u[1] * (v[0] * w[2] - v[2] * w[0])
                + u[2] * (v[0] * w[1] - v[1] * w[0])
        }
        _ => det_lu(points),
    };
    let mut fact = 1.0;
    for i in 2..=d {
        fact *= i as f64;
    }
    Ok(det.abs() / fact)
}

/// Plain f64 LU determinant of the edge-vector matrix (volume is a measure,
/// not a decision, so floating evaluation is fine here).
fn det_lu(points: &[&[f64]]) -> f64 {
    let d = points.len() - 1;
    let mut m: Vec<Vec<f64>> = (1..=d)
        .map(|i| (0..d).map(|j| points[i][j] - points[0][j]).collect())
        .collect();
    let mut det = 1.0;
    for col in 0..d {
        let pivot = (col..d)
            .max_by(|&a, &b| m[a][col].abs().partial_cmp(&m[b][col].abs()).unwrap())
            .unwrap();
        if m[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        det *= m[col][col];
        for r in col + 1..d {
            let f = m[r][col] / m[col][col];
            let (head, tail) = m.split_at_mut(r);
            for (t, pv) in tail[0][col..].iter_mut().zip(&head[col][col..]) {
                *t -= f * pv;
            }
        }
    }
    det
}

/// True iff `p` lies strictly inside the open simplex: all d+1 barycentric
/// coordinates strictly positive, decided by exact orientation signs. Points
/// on a facet or at a vertex yield `false`.
pub fn point_in_open_simplex(p: &[f64], simplex: &[&[f64]]) -> Result<bool> {
    let sigma = orientation(simplex)?;
    if sigma == 0 {
        return Err(Error::DegenerateSimplex { indices: vec![] });
    }
    let mut verts: Vec<&[f64]> = simplex.to_vec();
    for i in 0..simplex.len() {
        let saved = verts[i];
        verts[i] = p;
        let s = orientation(&verts)?;
        verts[i] = saved;
        if s != sigma {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Maximum pairwise Euclidean distance among `k >= 2` points.
pub fn max_edge_length(points: &[&[f64]]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::TooFewPoints {
            needed: 2,
            got: points.len(),
        });
    }
    let mut best = 0.0f64;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let d2: f64 = points[i]
                .iter()
                .zip(points[j])
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            best = best.max(d2);
        }
    }
    Ok(best.sqrt())
}

/// Full exact general-position check.
///
/// Equivalent formulation used here: duplicates are scanned directly; with
/// n >= d+1 points, every lower-order degeneracy (k+2 points in a k-flat)
/// extends to some zero-orientation (d+1)-subset, so scanning those suffices.
/// For d=2 the scan is organized around each anchor point (angular ties name
/// the collinear triple), which is O(n^2 log n) instead of O(n^3).
pub fn check_general_position(ps: &PointSet) -> Result<()> {
    ps.check_distinct().map_err(|e| match e {
        Error::DuplicatePoint { a, b } => Error::NotGeneralPosition { indices: vec![a, b] },
        other => other,
    })?;
    let n = ps.len();
    let d = ps.dim();
    if n <= d {
        // With so few points, general position just means affine independence.
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                let mut r = ps.point(i).to_vec();
                r.push(1.0);
                r
            })
            .collect();
        if exact::rank(&rows) < n {
            let indices = smallest_dependent_subset(ps);
            return Err(Error::NotGeneralPosition { indices });
        }
        return Ok(());
    }
    if d == 2 {
        return check_planar(ps);
    }
    let mut subset: Vec<usize> = (0..=d).collect();
    loop {
        let pts: Vec<&[f64]> = subset.iter().map(|&i| ps.point(i)).collect();
        if orientation(&pts)? == 0 {
            return Err(Error::NotGeneralPosition {
                indices: subset.clone(),
            });
        }
        if !next_combination(&mut subset, n) {
            return Ok(());
        }
    }
}

/// Find a minimal affinely dependent subset (n <= d path only; n is tiny).
fn smallest_dependent_subset(ps: &PointSet) -> Vec<usize> {
    let n = ps.len();
    for size in 2..=n {
        let mut subset: Vec<usize> = (0..size).collect();
        loop {
            let rows: Vec<Vec<f64>> = subset
                .iter()
                .map(|&i| {
                    let mut r = ps.point(i).to_vec();
                    r.push(1.0);
                    r
                })
                .collect();
            if exact::rank(&rows) < size {
                return subset;
            }
            if !next_combination(&mut subset, n) {
                break;
            }
        }
    }
    (0..n).collect()
}

/// d=2: for every anchor, sort the lexicographically greater points by angle
/// with the exact comparator; a collinear triple shows up as an angular tie
/// at the lex-min member of the triple.
fn check_planar(ps: &PointSet) -> Result<()> {
    let n = ps.len();
    let mut lex: Vec<usize> = (0..n).collect();
    lex.sort_unstable_by(|&a, &b| ps.point(a).partial_cmp(ps.point(b)).unwrap());
    let mut around: Vec<usize> = Vec::with_capacity(n);
    for (rank, &a) in lex.iter().enumerate() {
        around.clear();
        around.extend_from_slice(&lex[rank + 1..]);
        let pa = ps.point(a);
        around.sort_unstable_by(|&x, &y| {
            orient2d_sign(pa, ps.point(x), ps.point(y)).cmp(&0).reverse()
        });
        for w in around.windows(2) {
            if orient2d_sign(pa, ps.point(w[0]), ps.point(w[1])) == 0 {
                let mut idx = vec![a, w[0], w[1]];
                idx.sort_unstable();
                return Err(Error::NotGeneralPosition { indices: idx });
            }
        }
    }
    Ok(())
}

/// Advance `subset` (strictly increasing indices below `n`) to the next
/// combination in lexicographic order; returns false after the last one.
pub(crate) fn next_combination(subset: &mut [usize], n: usize) -> bool {
    let k = subset.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if subset[i] < n - (k - i) {
            subset[i] += 1;
            for j in i + 1..k {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn refs(pts: &[Vec<f64>]) -> Vec<&[f64]> {
        pts.iter().map(|p| p.as_slice()).collect()
    }

    #[test]
    fn orientation_2d_examples() {
        let pts = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]];
        assert_eq!(orientation(&refs(&pts)).unwrap(), 1);
        let coll = vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 2.0]];
        assert_eq!(orientation(&refs(&coll)).unwrap(), 0);
    }

    #[test]
    fn orientation_3d_standard_simplex() {
        let pts = vec![
            vec![0.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ];
        assert_eq!(orientation(&refs(&pts)).unwrap(), 1);
    }

    #[test]
    fn orientation_4d_matches_edge_det() {
        // Standard 4-simplex has positive edge-vector determinant.
        let mut pts = vec![vec![0.0; 4]];
        for i in 0..4 {
            let mut p = vec![0.0; 4];
            p[i] = 1.0;
            pts.push(p);
        }
        assert_eq!(orientation(&refs(&pts)).unwrap(), 1);
        pts.swap(1, 2);
        assert_eq!(orientation(&refs(&pts)).unwrap(), -1);
    }

    #[test]
    fn orientation_transposition_flips_sign() {
        let mut rng = crate::rng::RngStream::new(11, 0);
        for d in 2..=4usize {
            for _ in 0..20 {
                let pts: Vec<Vec<f64>> = (0..=d)
                    .map(|_| (0..d).map(|_| rng.uniform_in(-1.0, 1.0)).collect())
                    .collect();
                let s = orientation(&refs(&pts)).unwrap();
                let mut swapped = pts.clone();
                let i = (rng.next_u64() as usize) % (d + 1);
                let mut j = (rng.next_u64() as usize) % (d + 1);
                while j == i {
                    j = (rng.next_u64() as usize) % (d + 1);
                }
                swapped.swap(i, j);
                assert_eq!(orientation(&refs(&swapped)).unwrap(), -s);
            }
        }
    }

    #[test]
    fn orientation_dimension_mismatch() {
        let pts = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0, 5.0]];
        assert!(orientation(&refs(&pts)).is_err());
    }

    #[test]
    fn volume_examples() {
        let tri = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]];
        assert_eq!(simplex_volume(&refs(&tri)).unwrap(), 0.5);
        let coll = vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 2.0]];
        assert_eq!(simplex_volume(&refs(&coll)).unwrap(), 0.0);
        let tet = vec![
            vec![0.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ];
        assert!((simplex_volume(&refs(&tet)).unwrap() - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn volume_rigid_motion_invariant() {
        let mut rng = crate::rng::RngStream::new(5, 1);
        for _ in 0..50 {
            let pts: Vec<Vec<f64>> = (0..3)
                .map(|_| (0..2).map(|_| rng.uniform_in(-2.0, 2.0)).collect())
                .collect();
            let v = simplex_volume(&refs(&pts)).unwrap();
            let theta = rng.uniform_in(0.0, std::f64::consts::TAU);
            let (s, c) = theta.sin_cos();
            let (tx, ty) = (rng.uniform_in(-5.0, 5.0), rng.uniform_in(-5.0, 5.0));
            let moved: Vec<Vec<f64>> = pts
                .iter()
                .map(|p| vec![c * p[0] - s * p[1] + tx, s * p[0] + c * p[1] + ty])
                .collect();
            let w = simplex_volume(&refs(&moved)).unwrap();
            assert!((v - w).abs() <= 1e-12 * v.max(1.0));
        }
    }

    #[test]
    fn open_simplex_membership() {
        let tri = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]];
        let t = refs(&tri);
        let centroid = [1.0 / 3.0, 1.0 / 3.0];
        assert!(point_in_open_simplex(&centroid, &t).unwrap());
        // Open interior excludes vertices and facet points.
        assert!(!point_in_open_simplex(&[0.0, 0.0], &t).unwrap());
        assert!(!point_in_open_simplex(&[0.5, 0.0], &t).unwrap());
        assert!(!point_in_open_simplex(&[1.0, 1.0], &t).unwrap());
    }

    #[test]
    fn open_simplex_rejects_degenerate() {
        let coll = vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 2.0]];
        assert!(point_in_open_simplex(&[0.3, 0.1], &refs(&coll)).is_err());
    }

    #[test]
    fn membership_implies_positive_facet_volumes() {
        let mut rng = crate::rng::RngStream::new(3, 3);
        for _ in 0..100 {
            let pts: Vec<Vec<f64>> = (0..3)
                .map(|_| (0..2).map(|_| rng.uniform()).collect())
                .collect();
            let p: Vec<f64> = (0..2).map(|_| rng.uniform()).collect();
            let t = refs(&pts);
            if orientation(&t).unwrap() == 0 {
                continue;
            }
            if point_in_open_simplex(&p, &t).unwrap() {
                for i in 0..3 {
                    let mut repl = pts.clone();
                    repl[i] = p.clone();
                    assert!(simplex_volume(&refs(&repl)).unwrap() > 0.0);
                }
            }
        }
    }

    #[test]
    fn max_edge_examples() {
        let pts = vec![vec![0.0, 0.0], vec![3.0, 4.0]];
        assert_eq!(max_edge_length(&refs(&pts)).unwrap(), 5.0);
        let eq = vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![0.5, 3.0f64.sqrt() / 2.0],
        ];
        assert!((max_edge_length(&refs(&eq)).unwrap() - 1.0).abs() < 1e-15);
        let tri3 = vec![vec![0.0, 0.0, 0.0], vec![1.0, 0.0, 0.0], vec![0.0, 2.0, 0.0]];
        assert!((max_edge_length(&refs(&tri3)).unwrap() - 5.0f64.sqrt()).abs() < 1e-15);
        assert!(max_edge_length(&refs(&pts[..1])).is_err());
    }

    #[test]
    fn general_position_planar_cases() {
        let coll = PointSet::from_points(&[
            vec![0.0, 0.0],
            vec![1.0, 1.0],
            vec![2.0, 2.0],
        ])
        .unwrap();
        assert!(!coll.is_general_position());

        let tri = PointSet::from_points(&[
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![0.0, 1.0],
        ])
        .unwrap();
        assert!(tri.is_general_position());

        // Square corners plus midpoint of one edge: 3 collinear.
        let sq = PointSet::from_points(&[
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
            vec![0.0, 1.0],
            vec![0.5, 0.0],
        ])
        .unwrap();
        match check_general_position(&sq) {
            Err(Error::NotGeneralPosition { indices }) => {
                assert_eq!(indices, vec![0, 1, 4]);
            }
            other => panic!("expected degenerate triple, got {other:?}"),
        }
    }

    #[test]
    fn general_position_duplicates_and_permutation() {
        let dup = PointSet::from_points(&[
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![0.0, 0.0],
        ])
        .unwrap();
        assert!(!dup.is_general_position());

        let a = PointSet::from_points(&[
            vec![0.2, 0.1],
            vec![0.9, 0.4],
            vec![0.5, 0.8],
            vec![0.1, 0.6],
        ])
        .unwrap();
        let b = PointSet::from_points(&[
            vec![0.5, 0.8],
            vec![0.2, 0.1],
            vec![0.1, 0.6],
            vec![0.9, 0.4],
        ])
        .unwrap();
        assert_eq!(a.is_general_position(), b.is_general_position());
    }

    #[test]
    fn general_position_3d_coplanar() {
        let flat = PointSet::from_points(&[
            vec![0.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![1.0, 1.0, 0.0],
        ])
        .unwrap();
        assert!(!flat.is_general_position());

        let tet = PointSet::from_points(&[
            vec![0.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ])
        .unwrap();
        assert!(tet.is_general_position());
    }

    #[test]
    fn combination_iterator_covers_all() {
        let mut c = vec![0usize, 1, 2];
        let mut seen = vec![c.clone()];
        while next_combination(&mut c, 5) {
            seen.push(c.clone());
        }
        assert_eq!(seen.len(), 10);
        assert_eq!(seen.last().unwrap(), &vec![2, 3, 4]);
    }
}
