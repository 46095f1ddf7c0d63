//! Initial configurations S_0 ~ lambda and their statistics.
//!
//! Lambda entries are exact rationals so leader-set membership (argmax of
//! lambda) never depends on float rounding, and categorical sampling uses
//! exact 2^64-scaled thresholds whenever the common denominator fits.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::dynamics::StateVector;
use crate::graph::{degree_profile, Graph, VertexSubset};
use crate::rng::{derive, split, TAG_INIT};
use crate::{Error, Result};

/// Exact nonnegative rational, kept reduced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ratio {
    num: u64,
    den: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidArgument("rational with zero denominator".into()));
        }
        let g = gcd(num.max(1), den);
        let g = if num == 0 { den } else { g };
        Ok(Ratio {
            num: num / g,
            den: den / g,
        })
    }

    /// Parses "a/b" or a bare integer "a".
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        let (n, d) = match t.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (t, "1"),
        };
        let num: u64 = n
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad rational: {text}")))?;
        let den: u64 = d
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad rational: {text}")))?;
        Ratio::new(num, den)
    }

    #[inline]
    pub fn num(&self) -> u64 {
        self.num
    }

    #[inline]
    pub fn den(&self) -> u64 {
        self.den
    }

    #[inline]
    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn to_string_exact(&self) -> String {
        if self.den == 1 {
            format!("{}", self.num)
        } else {
            format!("{}/{}", self.num, self.den)
        }
    }
}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        let left = self.num as u128 * other.den as u128;
        let right = other.num as u128 * self.den as u128;
        left.cmp(&right)
    }
}

/// Distribution of the initial state: lambda_i > 0 summing to one.
#[derive(Clone, Debug, PartialEq)]
pub struct InitialLaw {
    lambda: Vec<Ratio>,
}

impl InitialLaw {
    pub fn new(lambda: Vec<Ratio>) -> Result<Self> {
        if lambda.is_empty() {
            return Err(Error::InvalidArgument("lambda must be non-empty".into()));
        }
        if lambda.len() > 200 {
            return Err(Error::InvalidArgument("at most 200 states supported".into()));
        }
        if lambda.iter().any(|r| r.num == 0) {
            return Err(Error::InvalidArgument(
                "every lambda_i must be strictly positive".into(),
            ));
        }
        // Exact sum check over the common denominator when it fits; the
        // float fallback honors the documented 1e-12 tolerance.
        match common_denominator(&lambda) {
            Some(l) => {
                let total: u128 = lambda
                    .iter()
                    .map(|r| r.num as u128 * (l / r.den as u128))
                    .sum();
                if total != l {
                    return Err(Error::InvalidArgument(
                        "lambda entries must sum to exactly 1".into(),
                    ));
                }
            }
            None => {
                let total: f64 = lambda.iter().map(|r| r.as_f64()).sum();
                if (total - 1.0).abs() > 1e-12 {
                    return Err(Error::InvalidArgument(
                        "lambda entries must sum to 1 (tolerance 1e-12)".into(),
                    ));
                }
            }
        }
        Ok(InitialLaw { lambda })
    }

    pub fn parse_all(texts: &[&str]) -> Result<Self> {
        let lambda = texts
            .iter()
            .map(|t| Ratio::parse(t))
            .collect::<Result<Vec<_>>>()?;
        InitialLaw::new(lambda)
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.lambda.len()
    }

    #[inline]
    pub fn lambda(&self) -> &[Ratio] {
        &self.lambda
    }

    /// Leader set M_0 = argmax lambda_i as ascending 1-based state ids,
    /// decided by exact rational comparison. Depends only on the law.
    pub fn leaders(&self) -> Vec<u8> {
        let max = self.lambda.iter().max().copied().unwrap();
        self.lambda
            .iter()
            .enumerate()
            .filter(|(_, r)| **r == max)
            .map(|(i, _)| (i + 1) as u8)
            .collect()
    }

    pub fn lambda_max(&self) -> f64 {
        self.lambda.iter().max().copied().unwrap().as_f64()
    }
}

/// Least common multiple of the denominators, capped at 2^63 (exactness is
/// abandoned beyond the cap, not correctness).
fn common_denominator(lambda: &[Ratio]) -> Option<u128> {
    let mut l: u128 = 1;
    for r in lambda {
        let d = r.den as u128;
        let g = {
            let (mut a, mut b) = (l, d);
            while b != 0 {
                let t = a % b;
                a = b;
                b = t;
            }
            a
        };
        l = l.checked_mul(d / g)?;
        if l > (1u128 << 63) {
            return None;
        }
    }
    Some(l)
}

/// Draws S_0 with i.i.d. lambda-distributed states, deterministically in
/// (n, law, seed). The per-vertex draw is a pure function of the seed's
/// tagged init stream and the vertex id.
pub fn sample_initial(n: usize, law: &InitialLaw, seed: u64) -> Result<StateVector> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be >= 1".into()));
    }
    let k = law.k();
    if k < 1 {
        return Err(Error::InvalidArgument("law must have k >= 1".into()));
    }
    // Cumulative thresholds scaled to 2^64; state i+1 is drawn when the
    // uniform word falls below thresholds[i] first.
    let mut thresholds: Vec<u64> = Vec::with_capacity(k.saturating_sub(1));
    match common_denominator(law.lambda()) {
        Some(l) => {
            let mut cum: u128 = 0;
            for r in &law.lambda()[..k - 1] {
                cum += r.num as u128 * (l / r.den as u128);
                thresholds.push(((cum << 64) / l) as u64);
            }
        }
        None => {
            let mut cum = 0.0f64;
            for r in &law.lambda()[..k - 1] {
                cum += r.as_f64();
                thresholds.push((cum * 18446744073709551616.0) as u64);
            }
        }
    }
    let key = derive(seed, TAG_INIT);
    let mut states = Vec::with_capacity(n);
    for v in 0..n {
        let r = split(key, v as u64);
        let mut state = k as u8;
        for (i, &t) in thresholds.iter().enumerate() {
            if r < t {
                state = (i + 1) as u8;
                break;
            }
        }
        states.push(state);
    }
    StateVector::new(states, k as u8, 0)
}

/// Part sizes, leader set, and the centered deviation vector of a
/// configuration: for leaders, n_i = n*/k_0 + c_i sqrt(n*).
#[derive(Clone, Debug, PartialEq)]
pub struct PartitionStats {
    /// counts[i] is the number of vertices in state i+1.
    pub counts: Vec<u64>,
    /// Ascending 1-based ids of the leader states (argmax lambda).
    pub leaders: Vec<u8>,
    pub k0: usize,
    /// Total size of the leader parts.
    pub n_star: u64,
    /// Centered deviations, aligned with `leaders`.
    pub c: Vec<f64>,
    pub lambda_max: f64,
}

pub fn compute_stats(s0: &StateVector, law: &InitialLaw) -> Result<PartitionStats> {
    if s0.round() != 0 {
        return Err(Error::InvalidArgument(
            "statistics are defined on the initial configuration (round 0)".into(),
        ));
    }
    if s0.k() as usize != law.k() {
        return Err(Error::InvalidArgument(
            "state count differs between configuration and law".into(),
        ));
    }
    let mut counts = vec![0u64; law.k()];
    for &s in s0.states() {
        counts[(s - 1) as usize] += 1;
    }
    stats_from_counts(&counts, law)
}

/// Same statistics from precomputed part sizes (used when reconstructing
/// from result files).
pub fn stats_from_counts(counts: &[u64], law: &InitialLaw) -> Result<PartitionStats> {
    if counts.len() != law.k() {
        return Err(Error::InvalidArgument(
            "counts length differs from law".into(),
        ));
    }
    let leaders = law.leaders();
    let k0 = leaders.len();
    let n_star: u64 = leaders.iter().map(|&l| counts[(l - 1) as usize]).sum();
    let c = if n_star == 0 {
        vec![0.0; k0]
    } else {
        let root = libm::sqrt(n_star as f64);
        leaders
            .iter()
            .map(|&l| {
                let ni = counts[(l - 1) as usize] as f64;
                (ni * k0 as f64 - n_star as f64) / (k0 as f64 * root)
            })
            .collect()
    };
    Ok(PartitionStats {
        counts: counts.to_vec(),
        leaders,
        k0,
        n_star,
        c,
        lambda_max: law.lambda_max(),
    })
}

/// Per-vertex neighborhood concentration rates over a realized graph.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VertexEventRates {
    /// Fraction of vertices with |n_i(v) - n_i p| <= ln(n) sqrt(np) for all i.
    pub deg_conc: f64,
    /// Fraction with |n*(v) - n_v* p| <= k_0 ln(n) sqrt(np).
    pub n_star_v: f64,
    /// Fraction with |n_i(v) - n*(v) n_i/n*| < ln(n) sqrt(n*(v)) for all
    /// leaders i.
    pub hypergeom: f64,
}

/// Outcomes of the high-probability events on one realization.
#[derive(Clone, Debug, PartialEq)]
pub struct EventVerdicts {
    /// All-state concentration: |n_i - n lambda_i| <= ln(n) sqrt(n).
    pub e0: bool,
    /// Leader-total concentration: |n* - n lambda*| < k_0 sqrt(n) ln(n).
    pub p0: bool,
    /// delta < |c_i| <= 1/delta for every leader.
    pub event1: bool,
    /// Consecutive gaps of the sorted c vector exceed delta.
    pub event2: bool,
    /// event1 && event2.
    pub e_delta_n: bool,
    pub delta: f64,
    pub vertex_rates: Option<VertexEventRates>,
}

/// The two anti-concentration predicates on a centered deviation vector:
/// every component magnitude inside (delta, 1/delta], and every consecutive
/// gap of the descending-sorted vector above delta.
pub fn c_vector_events(c: &[f64], delta: f64) -> (bool, bool) {
    let event1 = c
        .iter()
        .all(|&ci| delta < libm::fabs(ci) && libm::fabs(ci) <= 1.0 / delta);
    let mut sorted = c.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let event2 = sorted.windows(2).all(|w| w[0] - w[1] > delta);
    (event1, event2)
}

/// Evaluates the configuration-level event predicates. Logarithms are
/// natural. Pure in (stats, n, law, delta).
pub fn check_events(
    stats: &PartitionStats,
    n: usize,
    law: &InitialLaw,
    delta: f64,
) -> Result<EventVerdicts> {
    if !delta.is_finite() || delta <= 0.0 {
        return Err(Error::InvalidArgument("delta must be positive".into()));
    }
    if stats.counts.len() != law.k() {
        return Err(Error::InvalidArgument(
            "stats and law disagree on k".into(),
        ));
    }
    let nf = n as f64;
    let ln_n = libm::log(nf);
    let sqrt_n = libm::sqrt(nf);

    let e0 = stats.counts.iter().zip(law.lambda()).all(|(&ni, r)| {
        let dev = ni as f64 - nf * r.as_f64();
        libm::fabs(dev) <= ln_n * sqrt_n
    });

    let k0 = stats.k0 as f64;
    let lambda_star = k0 * stats.lambda_max;
    let p0 = libm::fabs(stats.n_star as f64 - nf * lambda_star) < k0 * sqrt_n * ln_n;

    let (event1, event2) = c_vector_events(&stats.c, delta);

    Ok(EventVerdicts {
        e0,
        p0,
        event1,
        event2,
        e_delta_n: event1 && event2,
        delta,
        vertex_rates: None,
    })
}

/// Measures the per-vertex concentration events on a realized graph and
/// configuration; `p` is the edge probability the bounds are stated against.
pub fn compute_vertex_event_rates(
    g: &Graph,
    s0: &StateVector,
    stats: &PartitionStats,
    p: f64,
) -> Result<VertexEventRates> {
    let n = g.n();
    if s0.states().len() != n {
        return Err(Error::InvalidArgument(
            "configuration length differs from graph order".into(),
        ));
    }
    let k = s0.k() as usize;
    let mut parts: Vec<VertexSubset> = (0..k).map(|_| VertexSubset::empty(n)).collect();
    for (v, &s) in s0.states().iter().enumerate() {
        parts[(s - 1) as usize].insert(v);
    }
    let ln_n = libm::log(n as f64);
    let sqrt_np = libm::sqrt(n as f64 * p);
    let k0 = stats.k0 as f64;
    let is_leader: Vec<bool> = (0..k)
        .map(|i| stats.leaders.contains(&((i + 1) as u8)))
        .collect();

    let mut ok_deg = 0usize;
    let mut ok_nstar = 0usize;
    let mut ok_hyper = 0usize;
    for v in 0..n {
        let prof = degree_profile(g, v, &parts)?;
        let deg_ok = (0..k).all(|i| {
            let dev = prof[i] as f64 - stats.counts[i] as f64 * p;
            libm::fabs(dev) <= ln_n * sqrt_np
        });
        if deg_ok {
            ok_deg += 1;
        }
        let n_of_v: usize = (0..k).filter(|&i| is_leader[i]).map(|i| prof[i]).sum();
        let in_star = is_leader[(s0.states()[v] - 1) as usize];
        let n_v_star = stats.n_star - if in_star { 1 } else { 0 };
        if libm::fabs(n_of_v as f64 - n_v_star as f64 * p) <= k0 * ln_n * sqrt_np {
            ok_nstar += 1;
        }
        let sqrt_nv = libm::sqrt(n_of_v as f64);
        let hyper_ok = stats.n_star > 0
            && (0..k).filter(|&i| is_leader[i]).all(|i| {
                let target = n_of_v as f64 * stats.counts[i] as f64 / stats.n_star as f64;
                libm::fabs(prof[i] as f64 - target) < ln_n * sqrt_nv
            });
        if hyper_ok {
            ok_hyper += 1;
        }
    }
    let nf = n as f64;
    Ok(VertexEventRates {
        deg_conc: ok_deg as f64 / nf,
        n_star_v: ok_nstar as f64 / nf,
        hypergeom: ok_hyper as f64 / nf,
    })
}
