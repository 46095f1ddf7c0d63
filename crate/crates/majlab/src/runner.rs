//! Parallel trial execution. Trial i draws its seed as split(master_seed, i);
//! depending on the run mode the graph or the initial configuration is
//! sampled once from the master seed and shared. Records are collected in
//! trial order, so output is identical at any thread count.

use std::sync::Arc;

use anyhow::{Context, Result};
use majlab_core::dynamics::{run_trial, TrialRecord};
use majlab_core::graph::{sample_gnp, Graph};
use majlab_core::init::sample_initial;
use majlab_core::rng::split;
use rayon::prelude::*;

use crate::config::{ExperimentConfig, RunMode, SweepConfig};

/// Thread count resolution: MAJLAB_THREADS env wins, then the config; 0
/// leaves the choice to the pool.
pub fn resolve_threads(cfg: &ExperimentConfig) -> usize {
    std::env::var("MAJLAB_THREADS")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(cfg.threads)
}

#[derive(Clone, Debug)]
pub struct Summary {
    pub n_trials: u64,
    pub frac_unanimous_3: f64,
    /// Mean/sd of rounds to unanimity over trials that reached it.
    pub mean_rounds: f64,
    pub sd_rounds: f64,
    pub n_unanimous: u64,
    pub mean_tie: [f64; 3],
    pub mean_strong: Vec<f64>,
    /// Index 0 counts trials with no winner; index s counts state s wins.
    pub winner_hist: Vec<u64>,
}

impl std::fmt::Display for Summary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "trials: {}", self.n_trials)?;
        writeln!(f, "unanimous_by_round_3: {:.4}", self.frac_unanimous_3)?;
        writeln!(
            f,
            "rounds_to_unanimity: mean {:.3}, sd {:.3} over {} unanimous trials",
            self.mean_rounds, self.sd_rounds, self.n_unanimous
        )?;
        writeln!(
            f,
            "mean_tie_sizes: r1 {:.2}, r2 {:.2}, r3 {:.2}",
            self.mean_tie[0], self.mean_tie[1], self.mean_tie[2]
        )?;
        write!(f, "mean_strong_counts:")?;
        for v in &self.mean_strong {
            write!(f, " {v:.1}")?;
        }
        writeln!(f)?;
        write!(f, "winner_histogram: none {}", self.winner_hist[0])?;
        for (s, c) in self.winner_hist.iter().enumerate().skip(1) {
            write!(f, ", s{s} {c}")?;
        }
        writeln!(f)
    }
}

pub fn summarize(records: &[TrialRecord], k: usize) -> Summary {
    let n_trials = records.len() as u64;
    let reached: Vec<f64> = records
        .iter()
        .filter(|r| r.rounds_to_unanimity >= 0)
        .map(|r| r.rounds_to_unanimity as f64)
        .collect();
    let n_unanimous = reached.len() as u64;
    let mean_rounds = if reached.is_empty() {
        f64::NAN
    } else {
        reached.iter().sum::<f64>() / reached.len() as f64
    };
    let sd_rounds = if reached.len() < 2 {
        0.0
    } else {
        let m = mean_rounds;
        (reached.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (reached.len() - 1) as f64)
            .sqrt()
    };
    let within3 = records
        .iter()
        .filter(|r| (0..=3).contains(&r.rounds_to_unanimity))
        .count();
    let mut mean_tie = [0.0f64; 3];
    for r in records {
        for (i, m) in mean_tie.iter_mut().enumerate() {
            *m += *r.tie_count_by_round.get(i).unwrap_or(&0) as f64;
        }
    }
    for m in mean_tie.iter_mut() {
        *m /= n_trials as f64;
    }
    let mut mean_strong = vec![0.0f64; k];
    let mut winner_hist = vec![0u64; k + 1];
    for r in records {
        for (i, m) in mean_strong.iter_mut().enumerate() {
            *m += r.strong_counts_round1[i] as f64;
        }
        winner_hist[r.winner as usize] += 1;
    }
    for m in mean_strong.iter_mut() {
        *m /= n_trials as f64;
    }
    Summary {
        n_trials,
        frac_unanimous_3: within3 as f64 / n_trials as f64,
        mean_rounds,
        sd_rounds,
        n_unanimous,
        mean_tie,
        mean_strong,
        winner_hist,
    }
}

/// Runs all trials of one experiment. Deterministic in (cfg, mode): trial
/// order, seeds, and every record are independent of the thread count.
pub fn run_experiment(
    cfg: &ExperimentConfig,
    mode: RunMode,
) -> Result<(Vec<TrialRecord>, Summary)> {
    cfg.validate()?;
    let law = cfg.law()?;
    let shared_graph: Option<Arc<Graph>> = match mode {
        RunMode::FixGraph => Some(Arc::new(
            sample_gnp(cfg.n, cfg.p, cfg.master_seed).context("sampling the shared graph")?,
        )),
        _ => None,
    };
    let shared_init = match mode {
        RunMode::FixConfig => Some(Arc::new(
            sample_initial(cfg.n, &law, cfg.master_seed)
                .context("sampling the shared configuration")?,
        )),
        _ => None,
    };
    let threads = resolve_threads(cfg);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .context("building thread pool")?;
    let records: Vec<TrialRecord> = pool.install(|| {
        (0..cfg.n_trials)
            .into_par_iter()
            .map(|i| -> majlab_core::Result<TrialRecord> {
                let trial_seed = split(cfg.master_seed, i);
                let g = match &shared_graph {
                    Some(g) => Arc::clone(g),
                    None => Arc::new(sample_gnp(cfg.n, cfg.p, trial_seed)?),
                };
                let s0 = match &shared_init {
                    Some(s) => (**s).clone(),
                    None => sample_initial(cfg.n, &law, trial_seed)?,
                };
                run_trial(&g, &s0, trial_seed, cfg.max_rounds)
            })
            .collect::<majlab_core::Result<Vec<_>>>()
    })?;
    let summary = summarize(&records, cfg.k as usize);
    Ok((records, summary))
}

/// One completed sweep value: axis value, resolved config, trial records,
/// and their summary.
pub type SweepValueResult = (f64, ExperimentConfig, Vec<TrialRecord>, Summary);

/// Runs each sweep value in sequence (each value is internally parallel).
pub fn run_sweep(sweep: &SweepConfig, mode: RunMode) -> Result<Vec<SweepValueResult>> {
    sweep.validate()?;
    let mut out = Vec::with_capacity(sweep.values.len());
    for idx in 0..sweep.values.len() {
        let cfg = sweep.value_config(idx);
        let (records, summary) = run_experiment(&cfg, mode)
            .with_context(|| format!("sweep value {}", sweep.values[idx]))?;
        out.push((sweep.values[idx], cfg, records, summary));
    }
    Ok(out)
}
