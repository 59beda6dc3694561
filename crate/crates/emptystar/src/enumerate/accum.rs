//! Shared degree accumulator for enumeration passes.
//!
//! One enumeration pass feeds all requested counters: the total, the
//! per-vertex degrees, and per-tuple counters for one requested k. Counters
//! merge by plain addition, so parallel partial accumulators combine into
//! bit-identical results regardless of scheduling.

use crate::geom::SimplexKey;
use std::collections::BTreeMap;

/// Per-tuple counter storage for the requested k.
///
/// Pairs and (d=3) triples get flat arrays indexed by lexicographic rank;
/// anything else falls back to an ordered map.
#[derive(Clone, Debug)]
pub(crate) enum TupleCounters {
    None,
    Pairs(Vec<u32>),
    Triples(Vec<u32>),
    Map(BTreeMap<Vec<u32>, u64>),
}

#[derive(Clone, Debug)]
pub(crate) struct DegreeAccum {
    pub n: usize,
    pub k: Option<usize>,
    pub total: u64,
    pub per_vertex: Vec<u64>,
    pub tuples: TupleCounters,
}

#[inline]
pub(crate) fn pair_rank(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

#[inline]
pub(crate) fn triple_rank(n: usize, i: usize, j: usize, k: usize) -> usize {
    debug_assert!(i < j && j < k && k < n);
    let c3 = |m: usize| m * m.saturating_sub(1) * m.saturating_sub(2) / 6;
    let c2 = |m: usize| m * m.saturating_sub(1) / 2;
    (c3(n) - c3(n - i)) + (c2(n - i - 1) - c2(n - j)) + (k - j - 1)
}

impl DegreeAccum {
    pub fn new(n: usize, dim: usize, k: Option<usize>) -> Self {
        let tuples = match k {
            None | Some(1) => TupleCounters::None,
            Some(2) => TupleCounters::Pairs(vec![0; n * (n - 1) / 2]),
            Some(3) if dim == 3 => TupleCounters::Triples(vec![0; n * (n - 1) * (n - 2) / 6]),
            Some(_) => TupleCounters::Map(BTreeMap::new()),
        };
        DegreeAccum {
            n,
            k,
            total: 0,
            per_vertex: vec![0; n],
            tuples,
        }
    }

    /// Record one empty simplex given by strictly increasing vertex indices.
    #[inline]
    pub fn visit(&mut self, simplex: &[usize]) {
        self.total += 1;
        for &v in simplex {
            self.per_vertex[v] += 1;
        }
        match (&mut self.tuples, self.k) {
            (TupleCounters::None, _) => {}
            (TupleCounters::Pairs(v), _) => {
                for a in 0..simplex.len() {
                    for b in a + 1..simplex.len() {
                        v[pair_rank(self.n, simplex[a], simplex[b])] += 1;
                    }
                }
            }
            (TupleCounters::Triples(v), _) => {
                for a in 0..simplex.len() {
                    for b in a + 1..simplex.len() {
                        for c in b + 1..simplex.len() {
                            v[triple_rank(self.n, simplex[a], simplex[b], simplex[c])] += 1;
                        }
                    }
                }
            }
            (TupleCounters::Map(map), Some(k)) => {
                let mut pos: Vec<usize> = (0..k).collect();
                loop {
                    let key: Vec<u32> = pos.iter().map(|&p| simplex[p] as u32).collect();
                    *map.entry(key).or_insert(0) += 1;
                    if !crate::geom::predicates::next_combination(&mut pos, simplex.len()) {
                        break;
                    }
                }
            }
            (TupleCounters::Map(_), None) => unreachable!(),
        }
    }

    pub fn merge(mut self, other: DegreeAccum) -> DegreeAccum {
        self.total += other.total;
        for (a, b) in self.per_vertex.iter_mut().zip(other.per_vertex) {
            *a += b;
        }
        match (&mut self.tuples, other.tuples) {
            (TupleCounters::None, TupleCounters::None) => {}
            (TupleCounters::Pairs(a), TupleCounters::Pairs(b)) => {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
            }
            (TupleCounters::Triples(a), TupleCounters::Triples(b)) => {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
            }
            (TupleCounters::Map(a), TupleCounters::Map(b)) => {
                for (key, v) in b {
                    *a.entry(key).or_insert(0) += v;
                }
            }
            _ => unreachable!("mismatched accumulator shapes"),
        }
        self
    }

    /// Degree of one specific k-tuple (k = the accumulator's requested k).
    pub fn tuple_degree(&self, indices: &[u32]) -> u64 {
        match (&self.tuples, self.k) {
            (_, Some(1)) => self.per_vertex[indices[0] as usize],
            (TupleCounters::Pairs(v), _) => {
                v[pair_rank(self.n, indices[0] as usize, indices[1] as usize)] as u64
            }
            (TupleCounters::Triples(v), _) => v[triple_rank(
                self.n,
                indices[0] as usize,
                indices[1] as usize,
                indices[2] as usize,
            )] as u64,
            (TupleCounters::Map(map), _) => map.get(indices).copied().unwrap_or(0),
            (TupleCounters::None, _) => unreachable!("no tuple counters materialized"),
        }
    }

    /// Maximum per-tuple degree with the lexicographically smallest witness.
    pub fn max_tuple(&self) -> (SimplexKey, u64) {
        let n = self.n;
        match (&self.tuples, self.k) {
            (_, Some(1)) => {
                let mut best = (0usize, 0u64);
                for (i, &v) in self.per_vertex.iter().enumerate() {
                    if v > best.1 {
                        best = (i, v);
                    }
                }
                (
                    SimplexKey::new(vec![best.0 as u32], n).unwrap(),
                    best.1,
                )
            }
            (TupleCounters::Pairs(v), _) => {
                // Flat layout is lexicographic, so the first maximum wins ties.
                let mut best = (0usize, 0u32);
                for (r, &c) in v.iter().enumerate() {
                    if c > best.1 {
                        best = (r, c);
                    }
                }
                let (i, j) = unrank_pair(n, best.0);
                (
                    SimplexKey::new(vec![i as u32, j as u32], n).unwrap(),
                    best.1 as u64,
                )
            }
            (TupleCounters::Triples(v), _) => {
                let mut best = (0usize, 0u32);
                for (r, &c) in v.iter().enumerate() {
                    if c > best.1 {
                        best = (r, c);
                    }
                }
                let (i, j, k) = unrank_triple(n, best.0);
                (
                    SimplexKey::new(vec![i as u32, j as u32, k as u32], n).unwrap(),
                    best.1 as u64,
                )
            }
            (TupleCounters::Map(map), Some(k)) => {
                let mut best: Option<(&Vec<u32>, u64)> = None;
                for (key, &v) in map {
                    if best.map(|(_, bv)| v > bv).unwrap_or(true) {
                        best = Some((key, v));
                    }
                }
                match best {
                    Some((key, v)) => (SimplexKey::new(key.clone(), n).unwrap(), v),
                    // No empty simplex at all: degree 0, witness is the first tuple.
                    None => (
                        SimplexKey::new((0..k as u32).collect(), n).unwrap(),
                        0,
                    ),
                }
            }
            (TupleCounters::Map(_), None) | (TupleCounters::None, _) => {
                unreachable!("no tuple counters materialized")
            }
        }
    }

    /// Ordered (lexicographic) per-tuple map for report serialization.
    pub fn tuple_map(&self) -> BTreeMap<String, u64> {
        let n = self.n;
        let mut out = BTreeMap::new();
        match (&self.tuples, self.k) {
            (_, Some(1)) => {
                for (i, &v) in self.per_vertex.iter().enumerate() {
                    out.insert(i.to_string(), v);
                }
            }
            (TupleCounters::Pairs(v), _) => {
                for (r, &c) in v.iter().enumerate() {
                    let (i, j) = unrank_pair(n, r);
                    out.insert(format!("{i},{j}"), c as u64);
                }
            }
            (TupleCounters::Triples(v), _) => {
                for (r, &c) in v.iter().enumerate() {
                    let (i, j, k) = unrank_triple(n, r);
                    out.insert(format!("{i},{j},{k}"), c as u64);
                }
            }
            (TupleCounters::Map(map), _) => {
                for (key, &v) in map {
                    let label = key
                        .iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(",");
                    out.insert(label, v);
                }
            }
            (TupleCounters::None, _) => {}
        }
        out
    }
}

fn unrank_pair(n: usize, mut r: usize) -> (usize, usize) {
    for i in 0..n {
        let row = n - i - 1;
        if r < row {
            return (i, i + 1 + r);
        }
        r -= row;
    }
    unreachable!("pair rank out of range")
}

fn unrank_triple(n: usize, mut r: usize) -> (usize, usize, usize) {
    for i in 0..n {
        let block = (n - i - 1) * (n - i - 2) / 2;
        if r < block {
            let (j, k) = unrank_pair(n - i - 1, r);
            return (i, i + 1 + j, i + 1 + k);
        }
        r -= block;
    }
    unreachable!("triple rank out of range")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_rank_round_trip() {
        let n = 9;
        let mut expected = 0;
        for i in 0..n {
            for j in i + 1..n {
                assert_eq!(pair_rank(n, i, j), expected);
                assert_eq!(unrank_pair(n, expected), (i, j));
                expected += 1;
            }
        }
        assert_eq!(expected, n * (n - 1) / 2);
    }

    #[test]
    fn triple_rank_round_trip() {
        let n = 8;
        let mut expected = 0;
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    assert_eq!(triple_rank(n, i, j, k), expected);
                    assert_eq!(unrank_triple(n, expected), (i, j, k));
                    expected += 1;
                }
            }
        }
        assert_eq!(expected, n * (n - 1) * (n - 2) / 6);
    }

    #[test]
    fn visit_updates_all_counters() {
        let mut acc = DegreeAccum::new(5, 2, Some(2));
        acc.visit(&[0, 2, 4]);
        acc.visit(&[0, 1, 2]);
        assert_eq!(acc.total, 2);
        assert_eq!(acc.per_vertex, vec![2, 1, 2, 0, 1]);
        assert_eq!(acc.tuple_degree(&[0, 2]), 2);
        assert_eq!(acc.tuple_degree(&[2, 4]), 1);
        assert_eq!(acc.tuple_degree(&[3, 4]), 0);
        let (key, v) = acc.max_tuple();
        assert_eq!(key.indices(), &[0, 2]);
        assert_eq!(v, 2);
    }
}
