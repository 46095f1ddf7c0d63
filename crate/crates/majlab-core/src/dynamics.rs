//! Synchronous k-state majority updates.
//!
//! Each round, every vertex adopts the state most frequent among its
//! neighbors (the vertex itself does not count); ties are resolved uniformly
//! at random by a counter-based draw keyed by (trial seed, round, vertex), so
//! a step is a pure per-vertex function and outcomes never depend on
//! evaluation order. A vertex with no neighbors sees all-zero counts, whose
//! argmax is every state, and therefore resamples uniformly.

use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{degree_profile, Graph, VertexSubset};
use crate::rng::{bounded_index, derive, keyed3, TAG_TIE};
use crate::{Error, Result};

/// Per-vertex states in {1..k} after `round` synchronous updates
/// (round 0 is the initial configuration).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateVector {
    states: Vec<u8>,
    k: u8,
    round: u32,
}

impl StateVector {
    pub fn new(states: Vec<u8>, k: u8, round: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("k must be >= 1".into()));
        }
        if states.is_empty() {
            return Err(Error::InvalidArgument("state vector must be non-empty".into()));
        }
        if states.iter().any(|&s| s == 0 || s > k) {
            return Err(Error::InvalidArgument(
                "states must lie in {1..k}".into(),
            ));
        }
        Ok(StateVector { states, k, round })
    }

    #[inline]
    pub fn states(&self) -> &[u8] {
        &self.states
    }

    #[inline]
    pub fn k(&self) -> u8 {
        self.k
    }

    #[inline]
    pub fn round(&self) -> u32 {
        self.round
    }

    /// The common state if all vertices agree.
    pub fn unanimous_state(&self) -> Option<u8> {
        let first = self.states[0];
        self.states.iter().all(|&s| s == first).then_some(first)
    }

    /// Part sizes indexed by state-1.
    pub fn part_sizes(&self) -> Vec<u64> {
        let mut counts = vec![0u64; self.k as usize];
        for &s in &self.states {
            counts[(s - 1) as usize] += 1;
        }
        counts
    }
}

/// The state classes of a configuration as disjoint vertex subsets,
/// indexed by state-1.
pub fn parts_of(s: &StateVector) -> Vec<VertexSubset> {
    let n = s.states.len();
    let mut parts: Vec<VertexSubset> = (0..s.k as usize).map(|_| VertexSubset::empty(n)).collect();
    for (v, &st) in s.states.iter().enumerate() {
        parts[(st - 1) as usize].insert(v);
    }
    parts
}

/// Result of one synchronous round: the next configuration, the set of
/// vertices whose neighbor-count argmax had two or more states, and per-state
/// counts of strong adoptions (strict unique maximum).
#[derive(Clone, Debug)]
pub struct StepOutcome {
    pub next: StateVector,
    pub tie_set: VertexSubset,
    pub strong_counts: Vec<u64>,
}

/// Applies one majority round taking S_{round-1} to S_round. `round` must be
/// s.round + 1: tie draws are keyed by round, so skipping or repeating a
/// round index would silently break reproducibility.
pub fn majority_step(
    g: &Graph,
    s: &StateVector,
    trial_seed: u64,
    round: u32,
) -> Result<StepOutcome> {
    if s.states.len() != g.n() {
        return Err(Error::InvalidArgument(
            "state vector length differs from graph order".into(),
        ));
    }
    if s.k < 2 {
        return Err(Error::InvalidArgument("dynamics need k >= 2".into()));
    }
    if round != s.round + 1 {
        return Err(Error::InvalidArgument(
            "round must advance the configuration by exactly one".into(),
        ));
    }
    let n = g.n();
    let k = s.k as usize;
    let words = n.div_ceil(64);
    // Per-state membership masks of the previous configuration.
    let mut masks = vec![0u64; k * words];
    for (v, &st) in s.states.iter().enumerate() {
        masks[(st - 1) as usize * words + v / 64] |= 1u64 << (v % 64);
    }
    let tie_key = derive(trial_seed, TAG_TIE);
    let mut next = vec![0u8; n];
    let mut strong_counts = vec![0u64; k];
    let mut tie_set = VertexSubset::empty(n);
    let mut counts = vec![0u32; k];
    let mut argmax = vec![0u8; k];
    for v in 0..n {
        for c in counts.iter_mut() {
            *c = 0;
        }
        if let Some(row) = g.dense_row(v) {
            for (i, c) in counts.iter_mut().enumerate() {
                let m = &masks[i * words..(i + 1) * words];
                *c = row
                    .iter()
                    .zip(m.iter())
                    .map(|(a, b)| (a & b).count_ones())
                    .sum();
            }
        } else {
            for &u in g.sparse_row(v).expect("sparse adjacency") {
                counts[(s.states[u as usize] - 1) as usize] += 1;
            }
        }
        let max = *counts.iter().max().expect("k >= 2");
        let mut m = 0usize;
        for (i, &c) in counts.iter().enumerate() {
            if c == max {
                argmax[m] = (i + 1) as u8;
                m += 1;
            }
        }
        if m == 1 {
            next[v] = argmax[0];
            strong_counts[(argmax[0] - 1) as usize] += 1;
        } else {
            let r = keyed3(tie_key, round as u64, v as u64);
            next[v] = argmax[bounded_index(r, m)];
            tie_set.insert(v);
        }
    }
    Ok(StepOutcome {
        next: StateVector {
            states: next,
            k: s.k,
            round,
        },
        tie_set,
        strong_counts,
    })
}

/// Recomputes a single vertex's update independently of `majority_step`'s
/// internal loop (profile via subset queries, same keyed tie draw). Used to
/// certify that the step is a pure per-vertex function.
pub fn step_single_vertex(
    g: &Graph,
    s: &StateVector,
    trial_seed: u64,
    round: u32,
    v: usize,
) -> Result<u8> {
    if round != s.round + 1 {
        return Err(Error::InvalidArgument(
            "round must advance the configuration by exactly one".into(),
        ));
    }
    let parts = parts_of(s);
    let prof = degree_profile(g, v, &parts)?;
    let max = *prof.iter().max().expect("k >= 1");
    let argmax: Vec<u8> = prof
        .iter()
        .enumerate()
        .filter(|(_, &c)| c == max)
        .map(|(i, _)| (i + 1) as u8)
        .collect();
    if argmax.len() == 1 {
        return Ok(argmax[0]);
    }
    let r = keyed3(derive(trial_seed, TAG_TIE), round as u64, v as u64);
    Ok(argmax[bounded_index(r, argmax.len())])
}

/// Everything recorded about one simulated trial.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialRecord {
    pub seed: u64,
    /// counts[i] of state i+1 in S_0.
    pub initial_counts: Vec<u64>,
    /// Part sizes after rounds 1, 2, ... (index 0 = round 1).
    pub part_sizes_by_round: Vec<Vec<u64>>,
    pub tie_count_by_round: Vec<u64>,
    pub strong_counts_round1: Vec<u64>,
    /// First round at which all states agree (0 = initially unanimous), or
    /// -1 if never within the cap.
    pub rounds_to_unanimity: i32,
    /// The common state at that round, or 0 when unanimity was not reached.
    pub winner: u8,
}

/// Runs the process from S_0. Rounds are simulated until unanimity has been
/// observed and at least three rounds are recorded (so round-3 part sizes
/// are always available to downstream checks), or until `max_rounds`.
pub fn run_trial(
    g: &Graph,
    s0: &StateVector,
    trial_seed: u64,
    max_rounds: u32,
) -> Result<TrialRecord> {
    if max_rounds < 1 {
        return Err(Error::InvalidArgument("max_rounds must be >= 1".into()));
    }
    if s0.round != 0 {
        return Err(Error::InvalidArgument(
            "trials start from a round-0 configuration".into(),
        ));
    }
    let initial_counts = s0.part_sizes();
    let mut rounds_to_unanimity: i32 = -1;
    let mut winner: u8 = 0;
    if let Some(w) = s0.unanimous_state() {
        rounds_to_unanimity = 0;
        winner = w;
    }
    let mut part_sizes_by_round = Vec::new();
    let mut tie_count_by_round = Vec::new();
    let mut strong_counts_round1 = Vec::new();
    let mut cur = s0.clone();
    for t in 1..=max_rounds {
        let out = majority_step(g, &cur, trial_seed, t)?;
        part_sizes_by_round.push(out.next.part_sizes());
        tie_count_by_round.push(out.tie_set.len() as u64);
        if t == 1 {
            strong_counts_round1 = out.strong_counts;
        }
        if rounds_to_unanimity < 0 {
            if let Some(w) = out.next.unanimous_state() {
                rounds_to_unanimity = t as i32;
                winner = w;
            }
        }
        cur = out.next;
        if rounds_to_unanimity >= 0 && t >= 3 {
            break;
        }
    }
    Ok(TrialRecord {
        seed: trial_seed,
        initial_counts,
        part_sizes_by_round,
        tie_count_by_round,
        strong_counts_round1,
        rounds_to_unanimity,
        winner,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{from_edge_list_str, sample_gnp};

    fn sv(states: &[u8], k: u8) -> StateVector {
        StateVector::new(states.to_vec(), k, 0).unwrap()
    }

    fn complete(n: usize) -> Graph {
        sample_gnp(n, 1.0, 1).unwrap()
    }

    #[test]
    fn state_vector_validates_entries() {
        assert!(StateVector::new(vec![1, 2, 3], 2, 0).is_err());
        assert!(StateVector::new(vec![0], 2, 0).is_err());
        assert!(StateVector::new(vec![], 2, 0).is_err());
        assert!(StateVector::new(vec![1, 2], 2, 0).is_ok());
    }

    #[test]
    fn star_center_follows_leaf_majority() {
        let g = from_edge_list_str("5 4\n0 1\n0 2\n0 3\n0 4\n").unwrap();
        // Center (vertex 0) in state 2; leaves 1,2,3 state 1 and leaf 4 state 2.
        let s = sv(&[2, 1, 1, 1, 2], 2);
        let out = majority_step(&g, &s, 7, 1).unwrap();
        assert_eq!(out.next.states()[0], 1); // center sees (3,1)
        for leaf in 1..5 {
            assert_eq!(out.next.states()[leaf], 2); // each leaf sees only the center
        }
        assert!(out.tie_set.is_empty());
        assert_eq!(out.strong_counts, vec![1, 4]);
    }

    #[test]
    fn unanimity_is_a_fixed_point_with_min_degree_one() {
        let g = complete(4);
        let s = sv(&[2, 2, 2, 2], 2);
        let out = majority_step(&g, &s, 3, 1).unwrap();
        assert_eq!(out.next.states(), s.states());
        assert!(out.tie_set.is_empty());
        assert_eq!(out.strong_counts, vec![0, 4]);
    }

    #[test]
    fn triangle_tie_resolution_is_uniform() {
        let g = complete(3);
        let s = sv(&[1, 1, 2], 2);
        // Vertex 2 sees (2,0): strong adoption of 1. Vertices 0 and 1 each
        // see (1,1): a tie resolved uniformly per seed.
        let mut picks_one = [0u32; 2];
        let trials = 10_000u64;
        for seed in 0..trials {
            let out = majority_step(&g, &s, seed, 1).unwrap();
            assert_eq!(out.next.states()[2], 1);
            assert_eq!(out.strong_counts, vec![1, 0]);
            assert_eq!(out.tie_set.iter().collect::<Vec<_>>(), vec![0, 1]);
            for v in 0..2 {
                if out.next.states()[v] == 1 {
                    picks_one[v] += 1;
                }
            }
        }
        // Each tied vertex picks state 1 with frequency 1/2 within 3 sd.
        let sd = (trials as f64 * 0.25).sqrt();
        for v in 0..2 {
            let dev = (picks_one[v] as f64 - trials as f64 / 2.0).abs();
            assert!(dev <= 3.0 * sd, "vertex {v}: {} of {trials}", picks_one[v]);
        }
    }

    #[test]
    fn near_balanced_complete_graph_ties_the_majority_side() {
        // K_9 with counts (5,4): each state-1 vertex sees (4,4) and ties;
        // each state-2 vertex sees (5,3) and strongly adopts state 1.
        let g = complete(9);
        let s = sv(&[1, 1, 1, 1, 1, 2, 2, 2, 2], 2);
        let out = majority_step(&g, &s, 11, 1).unwrap();
        assert_eq!(out.strong_counts, vec![4, 0]);
        assert_eq!(out.tie_set.len(), 5);
        assert_eq!(out.tie_set.iter().collect::<Vec<_>>(), vec![0, 1, 2, 3, 4]);
        for v in 5..9 {
            assert_eq!(out.next.states()[v], 1);
        }
    }

    #[test]
    fn clear_majority_on_complete_graph_unanimizes_in_one_round() {
        // K_10 with counts (6,4): both sides see a strict state-1 majority.
        let g = complete(10);
        let s = sv(&[1, 1, 1, 1, 1, 1, 2, 2, 2, 2], 2);
        let rec = run_trial(&g, &s, 5, 10).unwrap();
        assert_eq!(rec.rounds_to_unanimity, 1);
        assert_eq!(rec.winner, 1);
        assert_eq!(rec.part_sizes_by_round[0], vec![10, 0]);
        assert_eq!(rec.strong_counts_round1, vec![10, 0]);
        assert_eq!(rec.tie_count_by_round[0], 0);
    }

    #[test]
    fn initial_unanimity_reports_round_zero() {
        let g = from_edge_list_str("1 0\n").unwrap();
        let s = sv(&[1], 2);
        let rec = run_trial(&g, &s, 9, 3).unwrap();
        assert_eq!(rec.rounds_to_unanimity, 0);
        assert_eq!(rec.winner, 1);
        assert_eq!(rec.part_sizes_by_round.len(), 3);
    }

    #[test]
    fn zero_degree_vertices_resample_uniformly() {
        let g = sample_gnp(3, 0.0, 1).unwrap();
        let s = sv(&[1, 1, 2], 2);
        let out = majority_step(&g, &s, 2, 1).unwrap();
        assert_eq!(out.tie_set.len(), 3);
        assert_eq!(out.strong_counts, vec![0, 0]);
        let mut ones = 0u32;
        for seed in 0..2000u64 {
            let out = majority_step(&g, &s, seed, 1).unwrap();
            ones += out.next.states().iter().filter(|&&x| x == 1).count() as u32;
        }
        let mean = 3000.0; // 3 vertices * 2000 seeds * 1/2
        let sd = (6000.0f64 * 0.25).sqrt();
        assert!((ones as f64 - mean).abs() < 4.0 * sd);
    }

    #[test]
    fn part_sizes_are_conserved_each_round() {
        let g = sample_gnp(200, 0.2, 8).unwrap();
        let law = crate::init::InitialLaw::parse_all(&["1/3", "1/3", "1/3"]).unwrap();
        let s0 = crate::init::sample_initial(200, &law, 4).unwrap();
        let rec = run_trial(&g, &s0, 4, 6).unwrap();
        assert_eq!(rec.initial_counts.iter().sum::<u64>(), 200);
        for parts in &rec.part_sizes_by_round {
            assert_eq!(parts.iter().sum::<u64>(), 200);
        }
    }

    #[test]
    fn tie_set_and_strong_counts_partition_the_vertices() {
        let g = sample_gnp(150, 0.1, 3).unwrap();
        let law = crate::init::InitialLaw::parse_all(&["1/2", "1/2"]).unwrap();
        let s0 = crate::init::sample_initial(150, &law, 5).unwrap();
        let out = majority_step(&g, &s0, 6, 1).unwrap();
        let strong_total: u64 = out.strong_counts.iter().sum();
        assert_eq!(strong_total + out.tie_set.len() as u64, 150);
        // Recount strong adoptions and ties independently.
        let parts = parts_of(&s0);
        let mut strong = vec![0u64; 2];
        let mut ties = 0u64;
        for v in 0..150 {
            let prof = degree_profile(&g, v, &parts).unwrap();
            let max = *prof.iter().max().unwrap();
            let m = prof.iter().filter(|&&c| c == max).count();
            if m == 1 {
                let i = prof.iter().position(|&c| c == max).unwrap();
                strong[i] += 1;
                assert!(!out.tie_set.contains(v));
                assert_eq!(out.next.states()[v], (i + 1) as u8);
            } else {
                ties += 1;
                assert!(out.tie_set.contains(v));
            }
        }
        assert_eq!(strong, out.strong_counts);
        assert_eq!(ties, out.tie_set.len() as u64);
    }

    #[test]
    fn single_vertex_recomputation_matches_the_step() {
        let g = sample_gnp(120, 0.15, 9).unwrap();
        let law = crate::init::InitialLaw::parse_all(&["1/3", "1/3", "1/3"]).unwrap();
        let s0 = crate::init::sample_initial(120, &law, 2).unwrap();
        let out = majority_step(&g, &s0, 13, 1).unwrap();
        for v in 0..120 {
            assert_eq!(
                step_single_vertex(&g, &s0, 13, 1, v).unwrap(),
                out.next.states()[v]
            );
        }
    }

    #[test]
    fn mismatched_lengths_and_rounds_are_rejected() {
        let g = complete(4);
        let s = sv(&[1, 2], 2);
        assert!(majority_step(&g, &s, 1, 1).is_err());
        let s = sv(&[1, 2, 1, 2], 2);
        assert!(majority_step(&g, &s, 1, 2).is_err()); // round must be s.round+1
        assert!(majority_step(&g, &s, 1, 0).is_err());
        let k1 = StateVector::new(vec![1, 1, 1, 1], 1, 0).unwrap();
        assert!(majority_step(&g, &k1, 1, 1).is_err());
    }

    #[test]
    fn dense_and_sparse_dynamics_agree() {
        use crate::graph::sample_gnp_forced;
        let law = crate::init::InitialLaw::parse_all(&["1/2", "1/2"]).unwrap();
        let s0 = crate::init::sample_initial(180, &law, 21).unwrap();
        let d = sample_gnp_forced(180, 0.25, 77, true).unwrap();
        let s = sample_gnp_forced(180, 0.25, 77, false).unwrap();
        let a = run_trial(&d, &s0, 31, 8).unwrap();
        let b = run_trial(&s, &s0, 31, 8).unwrap();
        assert_eq!(a, b);
    }
}
