//! Experiment and sweep configuration: TOML on disk, validated into the
//! core library's types. Initial-law entries are exact rationals written as
//! strings ("1/3") so configs round-trip without float drift.

use anyhow::{bail, Context, Result};
use majlab_core::init::{InitialLaw, Ratio};
use serde::{Deserialize, Serialize};
use std::path::Path;

fn default_max_rounds() -> u32 {
    10
}
fn default_true() -> bool {
    true
}

/// TOML integers are i64, but seeds use the full u64 range (sweeps derive
/// per-value seeds by mixing). Accept either an integer or a decimal string
/// on input; write seeds above i64::MAX as strings.
mod seed_serde {
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &u64, s: S) -> Result<S::Ok, S::Error> {
        if *v <= i64::MAX as u64 {
            s.serialize_i64(*v as i64)
        } else {
            s.serialize_str(&v.to_string())
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u64, D::Error> {
        struct SeedVisitor;
        impl serde::de::Visitor<'_> for SeedVisitor {
            type Value = u64;
            fn expecting(&self, f: &mut core::fmt::Formatter) -> core::fmt::Result {
                f.write_str("an unsigned 64-bit seed (integer or decimal string)")
            }
            fn visit_i64<E: serde::de::Error>(self, v: i64) -> Result<u64, E> {
                u64::try_from(v).map_err(|_| E::custom("seed must be non-negative"))
            }
            fn visit_u64<E: serde::de::Error>(self, v: u64) -> Result<u64, E> {
                Ok(v)
            }
            fn visit_str<E: serde::de::Error>(self, v: &str) -> Result<u64, E> {
                v.parse::<u64>()
                    .map_err(|_| E::custom(format!("bad seed string {v:?}")))
            }
        }
        d.deserialize_any(SeedVisitor)
    }
}

/// How randomness is shared across trials: fresh graph and configuration
/// per trial, one graph with fresh configurations, or one configuration
/// with fresh graphs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunMode {
    Annealed,
    FixGraph,
    FixConfig,
}

impl RunMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            RunMode::Annealed => "annealed",
            RunMode::FixGraph => "fix-graph",
            RunMode::FixConfig => "fix-config",
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub n: usize,
    pub p: f64,
    pub k: u8,
    /// Exact rationals as strings, e.g. ["1/3", "1/3", "1/3"].
    pub lambda: Vec<String>,
    pub n_trials: u64,
    #[serde(default = "default_max_rounds")]
    pub max_rounds: u32,
    #[serde(with = "seed_serde")]
    pub master_seed: u64,
    #[serde(default = "default_true")]
    pub resample_graph_per_trial: bool,
    /// 0 = let the thread pool pick.
    #[serde(default)]
    pub threads: usize,
    /// Recorded by `simulate` in the output directory so downstream
    /// verification knows how seeds were shared; absent in input configs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<RunMode>,
}

impl ExperimentConfig {
    /// Parses and validates the initial law.
    pub fn law(&self) -> Result<InitialLaw> {
        let ratios: Vec<Ratio> = self
            .lambda
            .iter()
            .map(|s| Ratio::parse(s).map_err(|e| anyhow::anyhow!("lambda entry {s:?}: {e}")))
            .collect::<Result<_>>()?;
        Ok(InitialLaw::new(ratios)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            bail!("n must be >= 1");
        }
        if !(0.0..=1.0).contains(&self.p) {
            bail!("p must lie in [0, 1], got {}", self.p);
        }
        if self.k < 2 {
            bail!("k must be >= 2 (majority needs a choice)");
        }
        if self.lambda.len() != self.k as usize {
            bail!(
                "lambda has {} entries but k = {}",
                self.lambda.len(),
                self.k
            );
        }
        if self.n_trials == 0 {
            bail!("n_trials must be >= 1");
        }
        // Trial rows carry rounds 1..3; shorter runs cannot fill them.
        if self.max_rounds < 3 {
            bail!("max_rounds must be >= 3, got {}", self.max_rounds);
        }
        self.law()?;
        Ok(())
    }

    /// The sharing mode, resolving the config-file field against an
    /// explicit CLI request (the CLI wins).
    pub fn resolve_mode(&self, fix_graph: bool, fix_config: bool) -> Result<RunMode> {
        if fix_graph && fix_config {
            bail!("--fix-graph and --fix-config are mutually exclusive");
        }
        Ok(if fix_graph {
            RunMode::FixGraph
        } else if fix_config {
            RunMode::FixConfig
        } else if let Some(m) = self.mode {
            m
        } else if !self.resample_graph_per_trial {
            RunMode::FixGraph
        } else {
            RunMode::Annealed
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let cfg: ExperimentConfig =
            toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Serialization used for the copy saved next to results: the resolved
    /// mode is always present.
    pub fn save(&self, path: &Path, mode: RunMode) -> Result<()> {
        let mut copy = self.clone();
        copy.mode = Some(mode);
        copy.resample_graph_per_trial = mode != RunMode::FixGraph;
        let text = toml::to_string(&copy).context("serializing config")?;
        std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
        Ok(())
    }
}

/// The axis a sweep varies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepAxis {
    N,
    P,
}

impl SweepAxis {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepAxis::N => "n",
            SweepAxis::P => "p",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "n" => Ok(SweepAxis::N),
            "p" => Ok(SweepAxis::P),
            other => bail!("axis must be n or p, got {other:?}"),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepConfig {
    pub base: ExperimentConfig,
    pub axis: SweepAxis,
    /// Ascending axis values; n values are integral, p values in [0, 1].
    pub values: Vec<f64>,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        if self.values.len() < 3 {
            bail!("sweep needs at least 3 values for a scaling fit");
        }
        if self.values.windows(2).any(|w| w[0] >= w[1]) {
            bail!("sweep values must be strictly ascending");
        }
        for &v in &self.values {
            match self.axis {
                SweepAxis::N => {
                    if v < 1.0 || v.fract() != 0.0 {
                        bail!("axis n values must be positive integers, got {v}");
                    }
                }
                SweepAxis::P => {
                    if !(0.0..=1.0).contains(&v) {
                        bail!("axis p values must lie in [0, 1], got {v}");
                    }
                }
            }
        }
        Ok(())
    }

    /// The per-value experiment config. Each value gets its own seed stream
    /// (split off the base seed by value index) so sweep points are
    /// statistically independent; reusing the base seed verbatim would give
    /// different n the same pair-index edge coins.
    pub fn value_config(&self, idx: usize) -> ExperimentConfig {
        let mut cfg = self.base.clone();
        let v = self.values[idx];
        match self.axis {
            SweepAxis::N => cfg.n = v as usize,
            SweepAxis::P => cfg.p = v,
        }
        cfg.master_seed = majlab_core::rng::split(self.base.master_seed, idx as u64);
        cfg
    }

    /// Directory name for one sweep value, e.g. "n_2000" or "p_0.3".
    pub fn value_dir_name(&self, idx: usize) -> String {
        let v = self.values[idx];
        match self.axis {
            SweepAxis::N => format!("n_{}", v as u64),
            SweepAxis::P => format!("p_{v}"),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading sweep config {}", path.display()))?;
        let cfg: SweepConfig =
            toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = toml::to_string(self).context("serializing sweep config")?;
        std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
        Ok(())
    }
}
