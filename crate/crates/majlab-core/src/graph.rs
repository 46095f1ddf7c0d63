//! G(n,p) sampling and neighborhood queries.
//!
//! Every unordered pair {u, v} with u < v has a canonical index
//! idx = v(v-1)/2 + u, and the pair is an edge iff a keyed hash of idx falls
//! below a fixed threshold. The predicate is a pure function of
//! (seed, idx, p), so dense and sparse representations of the same
//! (n, p, seed) hold bit-identical edge sets, and regeneration is exact.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::rng::{derive, mix64, probability_threshold, GOLDEN, TAG_GRAPH};
use crate::{Error, Result};

/// Dense bit-matrix adjacency refuses graphs beyond this order (~450 MB).
pub const DENSE_MAX_N: usize = 60_000;
/// Dense representation is selected when the expected degree p*n reaches this.
pub const DENSE_MIN_EXPECTED_DEGREE: f64 = 64.0;

/// Set of vertex ids within a fixed universe {0..universe_n-1}, stored as a
/// bitset with a cached cardinality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexSubset {
    universe_n: usize,
    words: Vec<u64>,
    count: usize,
}

impl VertexSubset {
    pub fn empty(universe_n: usize) -> Self {
        VertexSubset {
            universe_n,
            words: vec![0u64; universe_n.div_ceil(64)],
            count: 0,
        }
    }

    pub fn full(universe_n: usize) -> Self {
        let mut s = Self::empty(universe_n);
        for w in s.words.iter_mut() {
            *w = u64::MAX;
        }
        // Bits at positions >= universe_n stay zero so popcounts are exact.
        let tail = universe_n % 64;
        if tail != 0 {
            if let Some(last) = s.words.last_mut() {
                *last = (1u64 << tail) - 1;
            }
        }
        s.count = universe_n;
        s
    }

    pub fn from_members(universe_n: usize, members: &[usize]) -> Result<Self> {
        let mut s = Self::empty(universe_n);
        for &v in members {
            if v >= universe_n {
                return Err(Error::InvalidArgument(format!(
                    "member {v} outside universe of size {universe_n}"
                )));
            }
            s.insert(v);
        }
        Ok(s)
    }

    /// Inserts v; no-op if already present. Panics if v is out of range.
    pub fn insert(&mut self, v: usize) {
        assert!(v < self.universe_n, "vertex {v} outside universe");
        let w = v / 64;
        let bit = 1u64 << (v % 64);
        if self.words[w] & bit == 0 {
            self.words[w] |= bit;
            self.count += 1;
        }
    }

    #[inline(always)]
    pub fn contains(&self, v: usize) -> bool {
        v < self.universe_n && self.words[v / 64] >> (v % 64) & 1 == 1
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.count
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    #[inline]
    pub fn universe_n(&self) -> usize {
        self.universe_n
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let base = wi * 64;
            BitIter { word: w }.map(move |b| base + b)
        })
    }
}

struct BitIter {
    word: u64,
}

impl Iterator for BitIter {
    type Item = usize;
    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.word == 0 {
            return None;
        }
        let b = self.word.trailing_zeros() as usize;
        self.word &= self.word - 1;
        Some(b)
    }
}

#[derive(Debug)]
pub(crate) enum Adjacency {
    Dense { words_per_row: usize, bits: Vec<u64> },
    Sparse { neighbors: Vec<Vec<u32>> },
}

/// Immutable undirected simple graph on {0..n-1}. `gen_seed` and `p_nominal`
/// record how it was sampled; graphs loaded from edge lists carry
/// gen_seed = 0 and p_nominal = -1.0.
#[derive(Debug)]
pub struct Graph {
    n: usize,
    gen_seed: u64,
    p_nominal: f64,
    adj: Adjacency,
}

/// Samples G(n,p) from a seed. Representation is dense (bit matrix) when
/// p*n >= 64, sparse adjacency lists otherwise; both answer every query
/// identically for equal (n, p, seed).
pub fn sample_gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidArgument("graph order n must be >= 1".into()));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!(
            "edge probability must lie in [0,1], got {p}"
        )));
    }
    let dense = p * n as f64 >= DENSE_MIN_EXPECTED_DEGREE;
    sample_gnp_impl(n, p, seed, dense)
}

/// Samples with an explicit representation choice. Exposed so tests can pit
/// the two representations against each other; prefer `sample_gnp`.
#[doc(hidden)]
pub fn sample_gnp_forced(n: usize, p: f64, seed: u64, dense: bool) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidArgument("graph order n must be >= 1".into()));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!(
            "edge probability must lie in [0,1], got {p}"
        )));
    }
    sample_gnp_impl(n, p, seed, dense)
}

fn sample_gnp_impl(n: usize, p: f64, seed: u64, dense: bool) -> Result<Graph> {
    if dense {
        let words_per_row = n.div_ceil(64);
        let required = n as u64 * words_per_row as u64 * 8;
        if n > DENSE_MAX_N {
            return Err(Error::MemoryGuard {
                required_bytes: required,
            });
        }
        let mut bits = vec![0u64; n * words_per_row];
        visit_edges(n, p, seed, |u, v| {
            bits[v * words_per_row + u / 64] |= 1u64 << (u % 64);
            bits[u * words_per_row + v / 64] |= 1u64 << (v % 64);
        });
        Ok(Graph {
            n,
            gen_seed: seed,
            p_nominal: p,
            adj: Adjacency::Dense {
                words_per_row,
                bits,
            },
        })
    } else {
        let mut neighbors: Vec<Vec<u32>> = vec![Vec::new(); n];
        visit_edges(n, p, seed, |u, v| {
            // Pairs arrive ordered by (v, u); both pushes keep lists sorted.
            neighbors[v].push(u as u32);
            neighbors[u].push(v as u32);
        });
        Ok(Graph {
            n,
            gen_seed: seed,
            p_nominal: p,
            adj: Adjacency::Sparse { neighbors },
        })
    }
}

/// Calls f(u, v) for every sampled edge, iterating pairs in canonical index
/// order. The hash input advances by one Weyl step per pair, so the whole
/// scan costs one mix per pair.
fn visit_edges<F: FnMut(usize, usize)>(n: usize, p: f64, seed: u64, mut f: F) {
    if p <= 0.0 {
        return;
    }
    if p >= 1.0 {
        for v in 1..n {
            for u in 0..v {
                f(u, v);
            }
        }
        return;
    }
    let t = probability_threshold(p);
    let key = derive(seed, TAG_GRAPH);
    // split(key, idx) = mix64(key + (idx+1)*GOLDEN), computed incrementally.
    let mut acc = key;
    for v in 1..n {
        for u in 0..v {
            acc = acc.wrapping_add(GOLDEN);
            if mix64(acc) < t {
                f(u, v);
            }
        }
    }
}

impl Graph {
    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn gen_seed(&self) -> u64 {
        self.gen_seed
    }

    #[inline]
    pub fn p_nominal(&self) -> f64 {
        self.p_nominal
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        assert!(u < self.n && v < self.n, "vertex out of range");
        if u == v {
            return false;
        }
        match &self.adj {
            Adjacency::Dense { words_per_row, bits } => {
                bits[u * words_per_row + v / 64] >> (v % 64) & 1 == 1
            }
            Adjacency::Sparse { neighbors } => neighbors[u].binary_search(&(v as u32)).is_ok(),
        }
    }

    pub fn degree(&self, v: usize) -> usize {
        assert!(v < self.n, "vertex out of range");
        match &self.adj {
            Adjacency::Dense { words_per_row, bits } => bits
                [v * words_per_row..(v + 1) * words_per_row]
                .iter()
                .map(|w| w.count_ones() as usize)
                .sum(),
            Adjacency::Sparse { neighbors } => neighbors[v].len(),
        }
    }

    pub fn edge_count(&self) -> u64 {
        (0..self.n).map(|v| self.degree(v) as u64).sum::<u64>() / 2
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    /// Iterates N(v) in ascending order.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        assert!(v < self.n, "vertex out of range");
        let (row, list) = match &self.adj {
            Adjacency::Dense { words_per_row, bits } => {
                (Some(&bits[v * words_per_row..(v + 1) * words_per_row]), None)
            }
            Adjacency::Sparse { neighbors } => (None, Some(&neighbors[v])),
        };
        let dense_iter = row.into_iter().flat_map(|words| {
            words.iter().enumerate().flat_map(|(wi, &w)| {
                let base = wi * 64;
                BitIter { word: w }.map(move |b| base + b)
            })
        });
        let sparse_iter = list
            .into_iter()
            .flat_map(|l| l.iter().map(|&u| u as usize));
        dense_iter.chain(sparse_iter)
    }

    pub(crate) fn dense_row(&self, v: usize) -> Option<&[u64]> {
        match &self.adj {
            Adjacency::Dense { words_per_row, bits } => {
                Some(&bits[v * words_per_row..(v + 1) * words_per_row])
            }
            Adjacency::Sparse { .. } => None,
        }
    }

    pub(crate) fn sparse_row(&self, v: usize) -> Option<&[u32]> {
        match &self.adj {
            Adjacency::Sparse { neighbors } => Some(&neighbors[v]),
            Adjacency::Dense { .. } => None,
        }
    }

    /// Serializes as `n m` followed by one `u v` line per edge (u < v),
    /// ascending lexicographic. Debug fixture format.
    pub fn to_edge_list_string(&self) -> String {
        let m = self.edge_count();
        let mut out = format!("{} {}\n", self.n, m);
        for u in 0..self.n {
            for v in self.neighbors(u) {
                if v > u {
                    out.push_str(&format!("{u} {v}\n"));
                }
            }
        }
        out
    }
}

/// Number of neighbors of v inside s (v itself never counts, graphs have no
/// self-loops).
pub fn degree_in(g: &Graph, v: usize, s: &VertexSubset) -> Result<usize> {
    if v >= g.n {
        return Err(Error::InvalidArgument(format!(
            "vertex {v} outside graph of order {}",
            g.n
        )));
    }
    if s.universe_n != g.n {
        return Err(Error::InvalidArgument(format!(
            "subset universe {} does not match graph order {}",
            s.universe_n, g.n
        )));
    }
    Ok(match &g.adj {
        Adjacency::Dense { words_per_row, bits } => bits
            [v * words_per_row..(v + 1) * words_per_row]
            .iter()
            .zip(s.words.iter())
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum(),
        Adjacency::Sparse { neighbors } => neighbors[v]
            .iter()
            .filter(|&&u| s.contains(u as usize))
            .count(),
    })
}

/// Component i is degree_in(g, v, parts[i]). Parts must be pairwise disjoint.
pub fn degree_profile(g: &Graph, v: usize, parts: &[VertexSubset]) -> Result<Vec<usize>> {
    if v >= g.n {
        return Err(Error::InvalidArgument(format!(
            "vertex {v} outside graph of order {}",
            g.n
        )));
    }
    let words = g.n.div_ceil(64);
    let mut seen = vec![0u64; words];
    for part in parts {
        if part.universe_n != g.n {
            return Err(Error::InvalidArgument(
                "part universe does not match graph order".into(),
            ));
        }
        for (s, w) in seen.iter_mut().zip(part.words.iter()) {
            if *s & w != 0 {
                return Err(Error::InvalidArgument("parts overlap".into()));
            }
            *s |= w;
        }
    }
    let mut counts = vec![0usize; parts.len()];
    match &g.adj {
        Adjacency::Dense { .. } => {
            for (i, part) in parts.iter().enumerate() {
                counts[i] = degree_in(g, v, part)?;
            }
        }
        Adjacency::Sparse { neighbors } => {
            // Single pass over N(v); each neighbor lands in at most one part.
            for &u in &neighbors[v] {
                for (i, part) in parts.iter().enumerate() {
                    if part.contains(u as usize) {
                        counts[i] += 1;
                        break;
                    }
                }
            }
        }
    }
    Ok(counts)
}

/// Parses the edge-list fixture format written by `to_edge_list_string`.
pub fn from_edge_list_str(text: &str) -> Result<Graph> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::InvalidArgument("empty edge list".into()))?;
    let mut it = header.split_whitespace();
    let n: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::InvalidArgument("bad edge-list header".into()))?;
    let m: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::InvalidArgument("bad edge-list header".into()))?;
    if n == 0 {
        return Err(Error::InvalidArgument("graph order n must be >= 1".into()));
    }
    let mut neighbors: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut prev: Option<(usize, usize)> = None;
    let mut count = 0usize;
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let mut it = line.split_whitespace();
        let u: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::InvalidArgument(format!("bad edge line: {line}")))?;
        let v: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::InvalidArgument(format!("bad edge line: {line}")))?;
        if u >= v {
            return Err(Error::InvalidArgument(format!(
                "edges must satisfy u < v, got {u} {v}"
            )));
        }
        if v >= n {
            return Err(Error::InvalidArgument(format!(
                "vertex {v} outside declared order {n}"
            )));
        }
        if let Some(p) = prev {
            if (u, v) <= p {
                return Err(Error::InvalidArgument(
                    "edges must be ascending lexicographic without duplicates".into(),
                ));
            }
        }
        prev = Some((u, v));
        neighbors[u].push(v as u32);
        neighbors[v].push(u as u32);
        count += 1;
    }
    if count != m {
        return Err(Error::InvalidArgument(format!(
            "header declares {m} edges but {count} listed"
        )));
    }
    for l in neighbors.iter_mut() {
        l.sort_unstable();
    }
    Ok(Graph {
        n,
        gen_seed: 0,
        p_nominal: -1.0,
        adj: Adjacency::Sparse { neighbors },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p_zero_gives_empty_graph() {
        let g = sample_gnp(5, 0.0, 1).unwrap();
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn p_one_gives_complete_graph() {
        let g = sample_gnp(5, 1.0, 1).unwrap();
        assert_eq!(g.edge_count(), 10);
        let g = sample_gnp(100, 1.0, 1).unwrap();
        assert_eq!(g.edge_count(), 4950);
        assert!(g.dense_row(0).is_some());
        assert!(!g.has_edge(3, 3));
    }

    #[test]
    fn n_zero_is_rejected() {
        assert!(matches!(
            sample_gnp(0, 0.5, 1),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn edge_count_near_binomial_mean_at_n2000() {
        let g = sample_gnp(2000, 0.3, 7).unwrap();
        let pairs: f64 = 2000.0 * 1999.0 / 2.0;
        let mean = pairs * 0.3;
        let sd = libm::sqrt(pairs * 0.3 * 0.7);
        let m = g.edge_count() as f64;
        assert!(
            (m - mean).abs() <= 4.0 * sd,
            "edge count {m} deviates more than 4 sd from {mean}"
        );
    }

    #[test]
    fn sampling_is_deterministic() {
        let a = sample_gnp(300, 0.2, 99).unwrap();
        let b = sample_gnp(300, 0.2, 99).unwrap();
        assert_eq!(a.to_edge_list_string(), b.to_edge_list_string());
        let c = sample_gnp(300, 0.2, 100).unwrap();
        assert_ne!(a.to_edge_list_string(), c.to_edge_list_string());
    }

    #[test]
    fn dense_and_sparse_agree_exactly() {
        for seed in [1u64, 2, 3] {
            let d = sample_gnp_forced(150, 0.4, seed, true).unwrap();
            let s = sample_gnp_forced(150, 0.4, seed, false).unwrap();
            assert_eq!(d.to_edge_list_string(), s.to_edge_list_string());
            for v in 0..150 {
                assert_eq!(d.degree(v), s.degree(v));
            }
            let sub = VertexSubset::from_members(150, &[0, 3, 77, 149, 12]).unwrap();
            for v in 0..150 {
                assert_eq!(
                    degree_in(&d, v, &sub).unwrap(),
                    degree_in(&s, v, &sub).unwrap()
                );
            }
        }
    }

    #[test]
    fn adjacency_is_symmetric_and_loop_free() {
        let g = sample_gnp(200, 0.3, 5).unwrap();
        for u in 0..200 {
            assert!(!g.has_edge(u, u));
            for v in 0..200 {
                assert_eq!(g.has_edge(u, v), g.has_edge(v, u));
            }
        }
    }

    #[test]
    fn memory_guard_refuses_oversized_dense() {
        let err = sample_gnp(60_001, 0.5, 1).unwrap_err();
        assert!(matches!(err, Error::MemoryGuard { .. }));
    }

    #[test]
    fn degree_in_on_complete_and_empty_graphs() {
        let k4 = sample_gnp(4, 1.0, 1).unwrap();
        let s = VertexSubset::from_members(4, &[0, 1, 2]).unwrap();
        assert_eq!(degree_in(&k4, 3, &s).unwrap(), 3);
        // v in s does not count itself.
        assert_eq!(degree_in(&k4, 2, &s).unwrap(), 2);
        let empty = sample_gnp(4, 0.0, 1).unwrap();
        assert_eq!(degree_in(&empty, 3, &s).unwrap(), 0);
    }

    #[test]
    fn degree_in_matches_edge_list_scan() {
        let g = sample_gnp(12, 0.5, 3).unwrap();
        let s = VertexSubset::from_members(12, &[1, 4, 6, 7, 11]).unwrap();
        let listing = g.to_edge_list_string();
        for v in 0..12 {
            let mut expect = 0;
            for line in listing.lines().skip(1) {
                let mut it = line.split_whitespace();
                let a: usize = it.next().unwrap().parse().unwrap();
                let b: usize = it.next().unwrap().parse().unwrap();
                if a == v && s.contains(b) || b == v && s.contains(a) {
                    expect += 1;
                }
            }
            assert_eq!(degree_in(&g, v, &s).unwrap(), expect);
        }
    }

    #[test]
    fn star_center_profile_counts_leaf_parts() {
        let g = from_edge_list_str("4 3\n0 1\n0 2\n0 3\n").unwrap();
        let a = VertexSubset::from_members(4, &[1, 2]).unwrap();
        let b = VertexSubset::from_members(4, &[3]).unwrap();
        assert_eq!(degree_profile(&g, 0, &[a, b]).unwrap(), vec![2, 1]);
    }

    #[test]
    fn profile_of_empty_parts_is_zero() {
        let g = sample_gnp(10, 0.5, 2).unwrap();
        let parts = vec![VertexSubset::empty(10), VertexSubset::empty(10)];
        assert_eq!(degree_profile(&g, 4, &parts).unwrap(), vec![0, 0]);
    }

    #[test]
    fn overlapping_parts_are_rejected() {
        let g = sample_gnp(10, 0.5, 2).unwrap();
        let a = VertexSubset::from_members(10, &[1, 2]).unwrap();
        let b = VertexSubset::from_members(10, &[2, 3]).unwrap();
        assert!(matches!(
            degree_profile(&g, 0, &[a, b]),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn profile_components_match_degree_in_and_sum_to_degree() {
        let g = sample_gnp(60, 0.4, 11).unwrap();
        let p1 = VertexSubset::from_members(60, &(0..20).collect::<Vec<_>>()).unwrap();
        let p2 = VertexSubset::from_members(60, &(20..45).collect::<Vec<_>>()).unwrap();
        let p3 = VertexSubset::from_members(60, &(45..60).collect::<Vec<_>>()).unwrap();
        for v in 0..60 {
            let prof = degree_profile(&g, v, &[p1.clone(), p2.clone(), p3.clone()]).unwrap();
            assert_eq!(prof[0], degree_in(&g, v, &p1).unwrap());
            assert_eq!(prof[1], degree_in(&g, v, &p2).unwrap());
            assert_eq!(prof[2], degree_in(&g, v, &p3).unwrap());
            assert_eq!(prof.iter().sum::<usize>(), g.degree(v));
        }
    }

    #[test]
    fn edge_list_round_trip() {
        let g = sample_gnp(40, 0.3, 17).unwrap();
        let text = g.to_edge_list_string();
        let h = from_edge_list_str(&text).unwrap();
        assert_eq!(h.to_edge_list_string(), text);
        assert_eq!(h.p_nominal(), -1.0);
    }

    #[test]
    fn edge_list_rejects_malformed_input() {
        assert!(from_edge_list_str("").is_err());
        assert!(from_edge_list_str("3 1\n2 1\n").is_err()); // u >= v
        assert!(from_edge_list_str("3 1\n0 5\n").is_err()); // out of range
        assert!(from_edge_list_str("3 2\n0 1\n0 1\n").is_err()); // duplicate
        assert!(from_edge_list_str("3 2\n0 1\n").is_err()); // count mismatch
    }

    #[test]
    fn subset_iter_and_full_are_consistent() {
        let mut s = VertexSubset::empty(130);
        for v in [0usize, 63, 64, 65, 129] {
            s.insert(v);
        }
        s.insert(63); // idempotent
        assert_eq!(s.len(), 5);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 63, 64, 65, 129]);
        let f = VertexSubset::full(130);
        assert_eq!(f.len(), 130);
        assert!(f.contains(129));
        assert!(!f.contains(130));
    }
}
