//! Close-subset search on a uniform grid.
//!
//! Finds all d-subsets whose pairwise distances are at most a threshold t.
//! Points are bucketed into cells of side t, so candidate pairs only come
//! from neighboring cells; with the thresholds used here (t ~ 1/(γn)) the
//! expected candidate count is O(n). All comparisons are on squared
//! distances.

use crate::geom::PointSet;
use std::collections::HashMap;

#[inline]
fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// All index pairs (i < j) with |p_i - p_j|^2 <= t^2.
pub(crate) fn close_pairs(ps: &PointSet, threshold: f64) -> Vec<(u32, u32)> {
    let d = ps.dim();
    let n = ps.len();
    let t2 = threshold * threshold;
    let mut cells: HashMap<Vec<i64>, Vec<u32>> = HashMap::new();
    let key = |p: &[f64]| -> Vec<i64> {
        p.iter()
            .map(|&c| (c / threshold).floor() as i64)
            .collect()
    };
    for i in 0..n {
        cells.entry(key(ps.point(i))).or_default().push(i as u32);
    }
    let mut out = Vec::new();
    let mut neighbor = vec![0i64; d];
    for i in 0..n {
        let p = ps.point(i);
        let base = key(p);
        // Walk the 3^d neighborhood.
        let mut offsets = vec![-1i64; d];
        loop {
            for (nb, (b, o)) in neighbor.iter_mut().zip(base.iter().zip(&offsets)) {
                *nb = b + o;
            }
            if let Some(bucket) = cells.get(&neighbor) {
                for &j in bucket {
                    if j as usize > i && dist2(p, ps.point(j as usize)) <= t2 {
                        out.push((i as u32, j));
                    }
                }
            }
            let mut c = 0;
            loop {
                if c == d {
                    break;
                }
                offsets[c] += 1;
                if offsets[c] <= 1 {
                    break;
                }
                offsets[c] = -1;
                c += 1;
            }
            if c == d {
                break;
            }
        }
    }
    out.sort_unstable();
    out
}

/// All d-subsets (as sorted index vectors) with all pairwise distances <= t.
///
/// Built by extending cliques of the close-pair graph in increasing index
/// order; subset sizes beyond the expected O(1) regime will be slow, which
/// matches how the functional is used.
pub(crate) fn close_subsets(ps: &PointSet, size: usize, threshold: f64) -> Vec<Vec<u32>> {
    if size == 1 {
        return (0..ps.len() as u32).map(|i| vec![i]).collect();
    }
    let pairs = close_pairs(ps, threshold);
    if size == 2 {
        return pairs.into_iter().map(|(a, b)| vec![a, b]).collect();
    }
    // Adjacency restricted to higher indices keeps enumeration canonical.
    let mut adj: HashMap<u32, Vec<u32>> = HashMap::new();
    for &(a, b) in &pairs {
        adj.entry(a).or_default().push(b);
    }
    let mut out = Vec::new();
    let mut clique = Vec::with_capacity(size);
    let t2 = threshold * threshold;
    for &(a, b) in &pairs {
        clique.clear();
        clique.push(a);
        clique.push(b);
        extend_clique(ps, &adj, t2, &mut clique, size, &mut out);
    }
    out.sort_unstable();
    out
}

fn extend_clique(
    ps: &PointSet,
    adj: &HashMap<u32, Vec<u32>>,
    t2: f64,
    clique: &mut Vec<u32>,
    size: usize,
    out: &mut Vec<Vec<u32>>,
) {
    if clique.len() == size {
        out.push(clique.clone());
        return;
    }
    let last = *clique.last().unwrap();
    let Some(cands) = adj.get(&last) else { return };
    for &c in cands {
        if clique[..clique.len() - 1]
            .iter()
            .all(|&m| dist2(ps.point(m as usize), ps.point(c as usize)) <= t2)
        {
            clique.push(c);
            extend_clique(ps, adj, t2, clique, size, out);
            clique.pop();
        }
    }
}
