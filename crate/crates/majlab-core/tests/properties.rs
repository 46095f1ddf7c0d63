//! Randomized structural invariants, driven by the crate's own keyed RNG
//! under pinned seeds so every run checks the same cases.

use majlab_core::dynamics::{majority_step, parts_of, run_trial, step_single_vertex};
use majlab_core::graph::{degree_in, degree_profile, sample_gnp, sample_gnp_forced, VertexSubset};
use majlab_core::init::{compute_stats, sample_initial, InitialLaw, Ratio};
use majlab_core::oracle::{
    admissible_profiles, profile_prob_exact, profile_prob_rational, NeighborProfile,
};
use majlab_core::rng::{mix64, split};

fn uniform_law(k: usize) -> InitialLaw {
    InitialLaw::new(vec![Ratio::new(1, k as u64).unwrap(); k]).unwrap()
}

/// Uniform in [0, m) from a keyed counter, test-local.
fn draw(seed: u64, i: u64, m: u64) -> u64 {
    (mix64(split(seed, i)) as u128 * m as u128 >> 64) as u64
}

#[test]
fn dense_and_sparse_representations_agree_exactly() {
    // Straddle the representation threshold (expected degree 64) from both
    // sides; force each representation and compare against the automatic one.
    for (case, n, p) in [(0u64, 400usize, 0.25), (1, 400, 0.05), (2, 900, 0.4)] {
        let seed = split(0xD15EA5E, case);
        let auto = sample_gnp(n, p, seed).unwrap();
        let dense = sample_gnp_forced(n, p, seed, true).unwrap();
        let sparse = sample_gnp_forced(n, p, seed, false).unwrap();
        assert_eq!(auto.edge_count(), dense.edge_count());
        assert_eq!(auto.edge_count(), sparse.edge_count());
        for v in 0..n {
            assert_eq!(dense.degree(v), sparse.degree(v), "degree of {v}");
            for u in 0..n {
                let e = dense.has_edge(u, v);
                assert_eq!(e, sparse.has_edge(u, v), "edge ({u},{v}) at n={n} p={p}");
                assert_eq!(e, auto.has_edge(u, v), "edge ({u},{v}) at n={n} p={p}");
            }
        }
    }
}

#[test]
fn sampled_graphs_are_simple_and_symmetric() {
    for case in 0..6u64 {
        let n = 50 + 37 * case as usize;
        let p = 0.02 + 0.13 * case as f64;
        let g = sample_gnp(n, p, split(0xA11CE, case)).unwrap();
        let mut edges = 0u64;
        for v in 0..n {
            assert!(!g.has_edge(v, v), "self loop at {v}");
            for u in 0..v {
                assert_eq!(g.has_edge(u, v), g.has_edge(v, u));
                edges += g.has_edge(u, v) as u64;
            }
        }
        assert_eq!(edges, g.edge_count());
        let degree_sum: u64 = (0..n).map(|v| g.degree(v) as u64).sum();
        assert_eq!(degree_sum, 2 * edges);
    }
}

#[test]
fn step_preserves_vertex_count_and_parts_partition_the_graph() {
    for case in 0..4u64 {
        let n = 120 + 61 * case as usize;
        let k = 2 + (case as usize % 3);
        let seed = split(0xBEEF, case);
        let g = sample_gnp(n, 0.3, seed).unwrap();
        let s0 = sample_initial(n, &uniform_law(k), seed).unwrap();
        let out = majority_step(&g, &s0, seed, 1).unwrap();
        let sizes = out.next.part_sizes();
        assert_eq!(sizes.iter().sum::<u64>(), n as u64);
        let parts = parts_of(&out.next);
        assert_eq!(parts.len(), k);
        let mut seen = VertexSubset::empty(n);
        for (i, part) in parts.iter().enumerate() {
            assert_eq!(part.len() as u64, sizes[i]);
            for v in part.iter() {
                assert!(!seen.contains(v), "vertex {v} in two parts");
                seen.insert(v);
            }
        }
        assert_eq!(seen.len(), n);
    }
}

#[test]
fn per_vertex_oracle_reproduces_the_full_step() {
    for case in 0..4u64 {
        let n = 90 + 45 * case as usize;
        let k = 2 + (case as usize % 4);
        let seed = split(0xFACADE, case);
        let g = sample_gnp(n, 0.25, seed).unwrap();
        let s0 = sample_initial(n, &uniform_law(k), seed).unwrap();
        let out = majority_step(&g, &s0, seed, 1).unwrap();
        let parts0 = parts_of(&s0);
        let mut strong = vec![0u64; k];
        let mut ties = 0u64;
        for v in 0..n {
            let state = step_single_vertex(&g, &s0, seed, 1, v).unwrap();
            assert_eq!(state, out.next.states()[v], "vertex {v}");
            // Recount the neighbor profile to classify the move.
            let prof = degree_profile(&g, v, &parts0).unwrap();
            let max = *prof.iter().max().unwrap();
            let argmax = prof.iter().filter(|&&c| c == max).count();
            let was_tie = argmax >= 2;
            assert_eq!(was_tie, out.tie_set.contains(v), "tie flag of {v}");
            if was_tie {
                ties += 1;
            } else {
                assert_eq!(prof[state as usize - 1], max, "strong move of {v}");
                strong[state as usize - 1] += 1;
            }
        }
        assert_eq!(ties, out.tie_set.len() as u64);
        assert_eq!(strong, out.strong_counts);
    }
}

#[test]
fn trials_are_deterministic_and_round_partitions_conserve_mass() {
    for case in 0..3u64 {
        let n = 200 + 100 * case as usize;
        let seed = split(0xC0FFEE, case);
        let g = sample_gnp(n, 0.3, seed).unwrap();
        let s0 = sample_initial(n, &uniform_law(3), seed).unwrap();
        let a = run_trial(&g, &s0, seed, 8).unwrap();
        let b = run_trial(&g, &s0, seed, 8).unwrap();
        assert_eq!(a, b);
        for sizes in &a.part_sizes_by_round {
            assert_eq!(sizes.iter().sum::<u64>(), n as u64);
        }
        assert_eq!(a.initial_counts.iter().sum::<u64>(), n as u64);
        if a.rounds_to_unanimity >= 1 {
            let last = &a.part_sizes_by_round[a.rounds_to_unanimity as usize - 1];
            assert_eq!(last[a.winner as usize - 1], n as u64);
        }
    }
}

#[test]
fn centered_counts_sum_to_zero_for_uniform_laws() {
    for case in 0..5u64 {
        let n = 1000 + 500 * case as usize;
        let k = 2 + (case as usize % 3);
        let law = uniform_law(k);
        let s0 = sample_initial(n, &law, split(0x5EED, case)).unwrap();
        let stats = compute_stats(&s0, &law).unwrap();
        assert_eq!(stats.k0, k);
        let c_sum: f64 = stats.c.iter().sum();
        assert!(c_sum.abs() < 1e-9, "c sums to {c_sum}");
    }
}

#[test]
fn profile_probabilities_sum_to_one_on_random_grids() {
    for case in 0..8u64 {
        let seed = split(0x9999, case);
        let k0 = 2 + (draw(seed, 0, 3) as usize);
        let parts: Vec<u64> = (0..k0).map(|i| 2 + draw(seed, 1 + i as u64, 9)).collect();
        let n_star: u64 = parts.iter().sum();
        let n_of_v = 1 + draw(seed, 64, n_star.min(10));
        let mut num_sum = 0u128;
        let mut den: Option<u128> = None;
        let mut float_sum = 0.0;
        for s in admissible_profiles(&parts, n_of_v) {
            let profile = NeighborProfile::new(s, parts.clone()).unwrap();
            let (num, d) = profile_prob_rational(&profile).unwrap();
            match den {
                None => den = Some(d),
                Some(d0) => assert_eq!(d0, d, "common denominator"),
            }
            num_sum += num;
            float_sum += profile_prob_exact(&profile).unwrap();
        }
        assert_eq!(num_sum, den.unwrap(), "exact mass at case {case}");
        assert!((float_sum - 1.0).abs() < 1e-12);
    }
}

#[test]
fn degree_in_matches_brute_force_on_random_subsets() {
    let n = 300usize;
    let seed = 0xDE6EE;
    let g = sample_gnp(n, 0.2, seed).unwrap();
    for case in 0..5u64 {
        let mut sub = VertexSubset::empty(n);
        for v in 0..n {
            if draw(split(seed, case), v as u64, 3) == 0 {
                sub.insert(v);
            }
        }
        for v in (0..n).step_by(17) {
            let brute = sub.iter().filter(|&u| g.has_edge(u, v)).count();
            assert_eq!(degree_in(&g, v, &sub).unwrap(), brute);
        }
    }
}
