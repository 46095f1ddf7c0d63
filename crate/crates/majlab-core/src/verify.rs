//! Turns trial populations into pass/fail verdicts for the headline claims:
//! three-round unanimity, round-1 elimination of non-leading states, tie-set
//! scaling, strong-sense ordering of round-1 adopters, the conditional
//! variance bound, anti-concentration of the initial configuration, the
//! per-vertex degree-gap property, and rounds 2-3 cleanup.
//!
//! Every verdict is a pure function of its inputs (the one sampler,
//! `verify_anti_concentration`, takes its seed explicitly). Thresholds are
//! desk-scale surrogates for asymptotic statements; the defaults live here
//! as named constants so callers can cite or override them.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::dynamics::TrialRecord;
use crate::graph::{degree_profile, Graph, VertexSubset};
use crate::init::{c_vector_events, sample_initial, InitialLaw, PartitionStats};
use crate::rng::split;
use crate::{Error, Result};

/// Minimum fraction of trials unanimous by round 3.
pub const FLOOR_UNANIMITY: f64 = 0.95;
/// Minimum fraction of trials with non-leading states extinct after round 1.
pub const FLOOR_ELIMINATION: f64 = 0.95;
/// Expected log-log slope of mean tie-set size against n/p.
pub const SLOPE_CENTER: f64 = 0.5;
/// Allowed deviation of the fitted slope from `SLOPE_CENTER`.
pub const SLOPE_TOLERANCE: f64 = 0.15;
/// Minimum fraction of qualifying trials with X-order matching c-order.
pub const FLOOR_STRONG_ORDER: f64 = 0.9;
/// Largest allowed growth of Var(X_1)/n^(3/2) across a size sweep.
pub const VARIANCE_RATIO_LIMIT: f64 = 2.0;
/// Vertex-mass fraction the winner must reach after round 2.
pub const CLEANUP_MASS: f64 = 0.99;
/// Minimum fraction of trials passing each cleanup statistic.
pub const FLOOR_CLEANUP: f64 = 0.95;
/// Minimum fraction of trials whose winner is an initially largest state.
pub const FLOOR_WINNER_LEADER: f64 = 0.85;
/// Fewest trials per sweep size that make a variance estimate acceptable.
pub const MIN_TRIALS_PER_SIZE: usize = 30;
/// Sentinel statistic for degenerate fits (undefined slope, zero baseline).
pub const DIVERGED: f64 = 9e99;

/// The claims this module can check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClaimId {
    Unanimity3,
    Round1Elim,
    TieSetScaling,
    StrongGap,
    VarianceBound,
    AntiConc,
    DegreeGap,
    WinnerIsLeader,
    CleanupR2R3,
}

impl ClaimId {
    pub const ALL: [ClaimId; 9] = [
        ClaimId::Unanimity3,
        ClaimId::Round1Elim,
        ClaimId::TieSetScaling,
        ClaimId::StrongGap,
        ClaimId::VarianceBound,
        ClaimId::AntiConc,
        ClaimId::DegreeGap,
        ClaimId::WinnerIsLeader,
        ClaimId::CleanupR2R3,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ClaimId::Unanimity3 => "UNANIMITY_3",
            ClaimId::Round1Elim => "ROUND1_ELIM",
            ClaimId::TieSetScaling => "TIE_SET_SCALING",
            ClaimId::StrongGap => "STRONG_GAP",
            ClaimId::VarianceBound => "VARIANCE_BOUND",
            ClaimId::AntiConc => "ANTI_CONC",
            ClaimId::DegreeGap => "DEGREE_GAP",
            ClaimId::WinnerIsLeader => "WINNER_IS_LEADER",
            ClaimId::CleanupR2R3 => "CLEANUP_R2R3",
        }
    }

    pub fn parse(s: &str) -> Result<ClaimId> {
        Self::ALL
            .iter()
            .copied()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown claim id: {s}")))
    }
}

/// Outcome of one claim check. `pass` compares `statistic` against
/// `threshold`; `applicable` is false when the claim's premise did not hold
/// on this data (premise failures are reported, never counted as failures).
#[derive(Clone, Debug)]
pub struct ClaimVerdict {
    pub claim_id: ClaimId,
    pub pass: bool,
    pub statistic: f64,
    pub threshold: f64,
    pub n_trials: u64,
    /// 95% normal-approximation halfwidth for fraction statistics, the OLS
    /// slope standard-error halfwidth for fits, 0 where no CI is defined.
    pub ci_halfwidth: f64,
    pub applicable: bool,
    pub notes: String,
}

impl ClaimVerdict {
    /// Pass for exit-code purposes: a claim whose premise failed does not
    /// fail the run.
    pub fn effective_pass(&self) -> bool {
        self.pass || !self.applicable
    }
}

/// 95% halfwidth for an observed fraction over n trials.
fn fraction_ci(frac: f64, n: u64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    1.96 * libm::sqrt(frac * (1.0 - frac) / n as f64)
}

fn require_nonempty(records: &[TrialRecord]) -> Result<()> {
    if records.is_empty() {
        return Err(Error::InvalidArgument("no trial records".into()));
    }
    let k = records[0].initial_counts.len();
    let n: u64 = records[0].initial_counts.iter().sum();
    for r in records {
        if r.initial_counts.len() != k || r.initial_counts.iter().sum::<u64>() != n {
            return Err(Error::InvalidArgument(
                "records mix different (n, k) parameters".into(),
            ));
        }
    }
    Ok(())
}

fn record_n(r: &TrialRecord) -> u64 {
    r.initial_counts.iter().sum()
}

/// Fraction of trials unanimous within three rounds.
pub fn verify_unanimity(records: &[TrialRecord], floor: f64) -> Result<ClaimVerdict> {
    require_nonempty(records)?;
    let hits = records
        .iter()
        .filter(|r| (1..=3).contains(&r.rounds_to_unanimity))
        .count();
    let n = records.len() as u64;
    let statistic = hits as f64 / n as f64;
    Ok(ClaimVerdict {
        claim_id: ClaimId::Unanimity3,
        pass: statistic >= floor,
        statistic,
        threshold: floor,
        n_trials: n,
        ci_halfwidth: fraction_ci(statistic, n),
        applicable: true,
        notes: format!("{hits}/{n} trials unanimous within 3 rounds"),
    })
}

/// Fraction of trials whose round-1 part sizes vanish outside the leader
/// set `m0` (ascending 1-based state ids).
pub fn verify_round1_elimination(
    records: &[TrialRecord],
    m0: &[u8],
    floor: f64,
) -> Result<ClaimVerdict> {
    require_nonempty(records)?;
    let k = records[0].initial_counts.len();
    if m0.is_empty()
        || m0.windows(2).any(|w| w[0] >= w[1])
        || m0.iter().any(|&s| s == 0 || s as usize > k)
    {
        return Err(Error::InvalidArgument(
            "leader set must be ascending state ids in 1..=k".into(),
        ));
    }
    let mut hits = 0usize;
    for r in records {
        let parts_r1 = r.part_sizes_by_round.first().ok_or_else(|| {
            Error::InvalidArgument("record has no round-1 part sizes".into())
        })?;
        let survivors = (1..=k as u8)
            .filter(|s| !m0.contains(s))
            .filter(|&s| parts_r1[(s - 1) as usize] > 0)
            .count();
        if survivors == 0 {
            hits += 1;
        }
    }
    let n = records.len() as u64;
    let statistic = hits as f64 / n as f64;
    Ok(ClaimVerdict {
        claim_id: ClaimId::Round1Elim,
        pass: statistic >= floor,
        statistic,
        threshold: floor,
        n_trials: n,
        ci_halfwidth: fraction_ci(statistic, n),
        applicable: true,
        notes: if m0.len() == k {
            "all states lead; elimination holds vacuously".into()
        } else {
            format!("{hits}/{n} trials with non-leading states extinct after round 1")
        },
    })
}

/// Least-squares slope and its standard error for y against x.
fn ols_slope(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let m = xs.len() as f64;
    let xbar = xs.iter().sum::<f64>() / m;
    let ybar = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - xbar) * (x - xbar)).sum();
    let sxy: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (x - xbar) * (y - ybar))
        .sum();
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    let dof = (xs.len().max(3) - 2) as f64;
    let se = libm::sqrt(ss_res / dof / sxx);
    (slope, se)
}

/// Fits log mean tie-set size against log(n/p) across a size sweep; the
/// statistic is the slope's distance from 1/2. Also asserts the per-trial
/// hard bound |T_1| <= (ln n)^2 sqrt(n/p).
pub fn verify_tie_scaling(sweep: &[(u64, &[TrialRecord])], p: f64) -> Result<ClaimVerdict> {
    if sweep.len() < 3 {
        return Err(Error::InvalidArgument(
            "scaling fit needs at least 3 sweep sizes".into(),
        ));
    }
    if sweep.windows(2).any(|w| w[0].0 >= w[1].0) {
        return Err(Error::InvalidArgument(
            "sweep sizes must be strictly ascending".into(),
        ));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidArgument("p must lie in (0, 1]".into()));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut total = 0u64;
    let mut bound_violations = 0u64;
    for &(n, records) in sweep {
        require_nonempty(records)?;
        let nf = n as f64;
        let cap = libm::log(nf) * libm::log(nf) * libm::sqrt(nf / p);
        let mut sum = 0.0;
        for r in records {
            let t1 = *r.tie_count_by_round.first().ok_or_else(|| {
                Error::InvalidArgument("record has no round-1 tie count".into())
            })? as f64;
            if t1 > cap {
                bound_violations += 1;
            }
            sum += t1;
        }
        total += records.len() as u64;
        let mean = sum / records.len() as f64;
        if mean <= 0.0 {
            return Ok(ClaimVerdict {
                claim_id: ClaimId::TieSetScaling,
                pass: false,
                statistic: DIVERGED,
                threshold: SLOPE_TOLERANCE,
                n_trials: total,
                ci_halfwidth: 0.0,
                applicable: true,
                notes: format!("mean tie count at n={n} is zero; log-log slope undefined"),
            });
        }
        xs.push(libm::log(nf / p));
        ys.push(libm::log(mean));
    }
    let (slope, se) = ols_slope(&xs, &ys);
    let statistic = libm::fabs(slope - SLOPE_CENTER);
    let pass = statistic <= SLOPE_TOLERANCE && bound_violations == 0;
    Ok(ClaimVerdict {
        claim_id: ClaimId::TieSetScaling,
        pass,
        statistic,
        threshold: SLOPE_TOLERANCE,
        n_trials: total,
        ci_halfwidth: 1.96 * se,
        applicable: true,
        notes: format!(
            "slope {slope:.4} (target {SLOPE_CENTER} +/- {SLOPE_TOLERANCE}); \
             hard-bound violations {bound_violations}/{total}"
        ),
    })
}

/// Over trials satisfying the anti-concentration event at `delta`, checks
/// that strong-adoption counts X_i order the same way as the centered
/// deviations c_i, and reports the empirical gap constant
/// min over pairs of mean (X_i - X_{i+1}) / (n sqrt(p) (c_i - c_{i+1})).
pub fn verify_strong_gap(
    records: &[TrialRecord],
    stats: &[PartitionStats],
    delta: f64,
    p: f64,
    floor: f64,
) -> Result<ClaimVerdict> {
    require_nonempty(records)?;
    if records.len() != stats.len() {
        return Err(Error::InvalidArgument(
            "need one statistics entry per record".into(),
        ));
    }
    if !delta.is_finite() || delta <= 0.0 || !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidArgument(
            "delta must be positive and p in (0, 1]".into(),
        ));
    }
    let k0 = stats[0].k0;
    if stats.iter().any(|s| s.k0 != k0) {
        return Err(Error::InvalidArgument(
            "records mix laws with different leader sets".into(),
        ));
    }
    let total = records.len() as u64;
    if k0 < 2 {
        return Ok(ClaimVerdict {
            claim_id: ClaimId::StrongGap,
            pass: true,
            statistic: 1.0,
            threshold: floor,
            n_trials: total,
            ci_halfwidth: 0.0,
            applicable: true,
            notes: "single leading state; no pairs to order".into(),
        });
    }
    let n = record_n(&records[0]) as f64;
    let scale = n * libm::sqrt(p);
    let mut qualifying = 0u64;
    let mut ordered = 0u64;
    // Per pair position: sum of normalized gaps over qualifying trials.
    let mut gap_sums = alloc::vec![0.0f64; k0 - 1];
    for (r, st) in records.iter().zip(stats) {
        let (e1, e2) = c_vector_events(&st.c, delta);
        if !(e1 && e2) {
            continue;
        }
        qualifying += 1;
        // Leaders sorted by c descending; ties cannot occur under event2.
        let mut order: Vec<usize> = (0..k0).collect();
        order.sort_by(|&a, &b| st.c[b].partial_cmp(&st.c[a]).unwrap());
        let mut ok = true;
        for w in 0..k0 - 1 {
            let (hi, lo) = (order[w], order[w + 1]);
            let x_hi = r.strong_counts_round1[(st.leaders[hi] - 1) as usize] as f64;
            let x_lo = r.strong_counts_round1[(st.leaders[lo] - 1) as usize] as f64;
            if x_hi <= x_lo {
                ok = false;
            }
            gap_sums[w] += (x_hi - x_lo) / (scale * (st.c[hi] - st.c[lo]));
        }
        if ok {
            ordered += 1;
        }
    }
    if qualifying == 0 {
        return Ok(ClaimVerdict {
            claim_id: ClaimId::StrongGap,
            pass: false,
            statistic: 0.0,
            threshold: floor,
            n_trials: 0,
            ci_halfwidth: 0.0,
            applicable: false,
            notes: format!(
                "no trial of {total} satisfied the conditioning event at delta={delta}"
            ),
        });
    }
    let statistic = ordered as f64 / qualifying as f64;
    let lambda_hat = gap_sums
        .iter()
        .map(|s| s / qualifying as f64)
        .fold(f64::INFINITY, f64::min);
    Ok(ClaimVerdict {
        claim_id: ClaimId::StrongGap,
        pass: statistic >= floor && lambda_hat > 0.0,
        statistic,
        threshold: floor,
        n_trials: qualifying,
        ci_halfwidth: fraction_ci(statistic, qualifying),
        applicable: true,
        notes: format!(
            "{ordered}/{qualifying} qualifying trials ordered ({total} total); \
             empirical gap constant {lambda_hat:.4}"
        ),
    })
}

/// Bessel-corrected sample variance.
fn sample_variance(xs: &[f64]) -> f64 {
    let m = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / m;
    xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (m - 1.0)
}

/// Checks that Var(X_1)/n^(3/2), with the initial configuration held fixed
/// per size and the graph resampled, does not grow across the sweep.
pub fn verify_variance(sweep: &[(u64, &[TrialRecord])]) -> Result<ClaimVerdict> {
    if sweep.len() < 2 {
        return Err(Error::InvalidArgument(
            "variance comparison needs at least 2 sweep sizes".into(),
        ));
    }
    if sweep.windows(2).any(|w| w[0].0 >= w[1].0) {
        return Err(Error::InvalidArgument(
            "sweep sizes must be strictly ascending".into(),
        ));
    }
    let mut ratios = Vec::new();
    let mut total = 0u64;
    let mut notes = String::new();
    for &(n, records) in sweep {
        if records.len() < MIN_TRIALS_PER_SIZE {
            return Err(Error::InvalidArgument(format!(
                "variance at n={n} needs >= {MIN_TRIALS_PER_SIZE} trials, got {}",
                records.len()
            )));
        }
        require_nonempty(records)?;
        let xs: Vec<f64> = records
            .iter()
            .map(|r| r.strong_counts_round1[0] as f64)
            .collect();
        let var = sample_variance(&xs);
        let ratio = var / libm::pow(n as f64, 1.5);
        if !notes.is_empty() {
            notes.push_str("; ");
        }
        notes.push_str(&format!("n={n}: var={var:.1}, var/n^1.5={ratio:.4}"));
        ratios.push(ratio);
        total += records.len() as u64;
    }
    let first = ratios[0];
    let last = *ratios.last().unwrap();
    let (statistic, pass) = if first == 0.0 {
        if last == 0.0 {
            (0.0, true)
        } else {
            (DIVERGED, false)
        }
    } else {
        let ratio = last / first;
        (ratio, ratio <= VARIANCE_RATIO_LIMIT)
    };
    Ok(ClaimVerdict {
        claim_id: ClaimId::VarianceBound,
        pass,
        statistic,
        threshold: VARIANCE_RATIO_LIMIT,
        n_trials: total,
        ci_halfwidth: 0.0,
        applicable: true,
        notes,
    })
}

/// Samples fresh initial configurations and measures how often the centered
/// deviation vector satisfies both anti-concentration events at `delta`.
pub fn verify_anti_concentration(
    n: usize,
    law: &InitialLaw,
    delta: f64,
    epsilon: f64,
    n_trials: u64,
    seed: u64,
) -> Result<ClaimVerdict> {
    if n == 0 || n_trials == 0 {
        return Err(Error::InvalidArgument(
            "need n >= 1 and at least one trial".into(),
        ));
    }
    if !delta.is_finite() || delta <= 0.0 || !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidArgument(
            "delta must be positive and epsilon in (0, 1)".into(),
        ));
    }
    let mut hits = 0u64;
    for t in 0..n_trials {
        let s0 = sample_initial(n, law, split(seed, t))?;
        let stats = crate::init::compute_stats(&s0, law)?;
        let (e1, e2) = c_vector_events(&stats.c, delta);
        if e1 && e2 {
            hits += 1;
        }
    }
    let statistic = hits as f64 / n_trials as f64;
    let threshold = 1.0 - epsilon;
    Ok(ClaimVerdict {
        claim_id: ClaimId::AntiConc,
        pass: statistic >= threshold,
        statistic,
        threshold,
        n_trials,
        ci_halfwidth: fraction_ci(statistic, n_trials),
        applicable: true,
        notes: format!("{hits}/{n_trials} configurations at delta={delta}"),
    })
}

/// Counts vertices whose neighbor counts fail the pairwise gap
/// d_{P_i}(v) - d_{P_{i+1}}(v) > (delta/4) n p^(3/2) for some consecutive
/// pair of leading parts; passes when fewer than n p / sqrt(omega) fail.
/// Applicable only when the part sizes themselves are separated by
/// delta n sqrt(p); an optional residual part completes the partition but
/// takes part in no gap.
pub fn verify_degree_gap(
    g: &Graph,
    leading_parts: &[VertexSubset],
    residual: Option<&VertexSubset>,
    delta: f64,
    omega: f64,
    p: f64,
) -> Result<ClaimVerdict> {
    if leading_parts.is_empty() {
        return Err(Error::InvalidArgument("no leading parts given".into()));
    }
    if !delta.is_finite() || delta <= 0.0 || !omega.is_finite() || omega <= 0.0 || !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidArgument(
            "delta and omega must be positive, p in (0, 1]".into(),
        ));
    }
    let n = g.n();
    let mut covered = 0usize;
    for part in leading_parts.iter().chain(residual) {
        if part.universe_n() != n {
            return Err(Error::InvalidArgument(
                "part universe differs from graph order".into(),
            ));
        }
        covered += part.len();
    }
    if covered != n {
        return Err(Error::InvalidArgument(
            "parts and residual must partition the vertex set".into(),
        ));
    }
    if leading_parts
        .windows(2)
        .any(|w| w[0].len() < w[1].len())
    {
        return Err(Error::InvalidArgument(
            "leading parts must be ordered by size descending".into(),
        ));
    }
    let threshold = n as f64 * p / libm::sqrt(omega);
    if leading_parts.len() == 1 {
        return Ok(ClaimVerdict {
            claim_id: ClaimId::DegreeGap,
            pass: true,
            statistic: 0.0,
            threshold,
            n_trials: 1,
            ci_halfwidth: 0.0,
            applicable: true,
            notes: "single leading part; no pairs to separate".into(),
        });
    }
    // Premise: consecutive part sizes separated by delta n sqrt(p).
    let size_gap_floor = delta * n as f64 * libm::sqrt(p);
    for w in leading_parts.windows(2) {
        let gap = (w[0].len() - w[1].len()) as f64;
        if gap < size_gap_floor {
            return Ok(ClaimVerdict {
                claim_id: ClaimId::DegreeGap,
                pass: false,
                statistic: 0.0,
                threshold,
                n_trials: 1,
                ci_halfwidth: 0.0,
                applicable: false,
                notes: format!(
                    "premise violated: part size gap {gap:.0} below \
                     delta n sqrt(p) = {size_gap_floor:.1}"
                ),
            });
        }
    }
    let degree_gap_floor = delta / 4.0 * n as f64 * libm::pow(p, 1.5);
    let mut violators = 0u64;
    for v in 0..n {
        let prof = degree_profile(g, v, leading_parts)?;
        if prof
            .windows(2)
            .any(|w| (w[0] as f64 - w[1] as f64) <= degree_gap_floor)
        {
            violators += 1;
        }
    }
    Ok(ClaimVerdict {
        claim_id: ClaimId::DegreeGap,
        pass: (violators as f64) <= threshold,
        statistic: violators as f64,
        threshold,
        n_trials: 1,
        ci_halfwidth: 0.0,
        applicable: true,
        notes: format!(
            "{violators} of {n} vertices below the pairwise degree gap \
             {degree_gap_floor:.1}"
        ),
    })
}

/// Checks the last two rounds: the eventual winner holds >= `mass` of the
/// vertices after round 2, and round 3 is unanimous, each in >= `floor` of
/// trials. The statistic is the smaller of the two fractions.
pub fn verify_cleanup(records: &[TrialRecord], mass: f64, floor: f64) -> Result<ClaimVerdict> {
    require_nonempty(records)?;
    if records.iter().any(|r| r.part_sizes_by_round.len() < 3) {
        return Err(Error::InvalidArgument(
            "cleanup check needs three recorded rounds; rerun with max_rounds >= 3".into(),
        ));
    }
    let n = record_n(&records[0]);
    let mut hits_r2 = 0u64;
    let mut hits_r3 = 0u64;
    for r in records {
        if r.winner != 0 {
            let w = (r.winner - 1) as usize;
            if r.part_sizes_by_round[1][w] as f64 >= mass * n as f64 {
                hits_r2 += 1;
            }
        }
        if r.part_sizes_by_round[2].iter().max() == Some(&n) {
            hits_r3 += 1;
        }
    }
    let total = records.len() as u64;
    let stat_r2 = hits_r2 as f64 / total as f64;
    let stat_r3 = hits_r3 as f64 / total as f64;
    let statistic = stat_r2.min(stat_r3);
    Ok(ClaimVerdict {
        claim_id: ClaimId::CleanupR2R3,
        pass: stat_r2 >= floor && stat_r3 >= floor,
        statistic,
        threshold: floor,
        n_trials: total,
        ci_halfwidth: fraction_ci(statistic, total),
        applicable: true,
        notes: format!(
            "round-2 winner mass >= {mass}: {hits_r2}/{total}; \
             round-3 unanimity: {hits_r3}/{total}"
        ),
    })
}

/// Fraction of trials whose eventual winner is one of the initially largest
/// states.
pub fn verify_winner_is_leader(records: &[TrialRecord], floor: f64) -> Result<ClaimVerdict> {
    require_nonempty(records)?;
    let mut hits = 0u64;
    for r in records {
        if r.winner == 0 {
            continue;
        }
        let max = *r.initial_counts.iter().max().unwrap();
        if r.initial_counts[(r.winner - 1) as usize] == max {
            hits += 1;
        }
    }
    let total = records.len() as u64;
    let statistic = hits as f64 / total as f64;
    Ok(ClaimVerdict {
        claim_id: ClaimId::WinnerIsLeader,
        pass: statistic >= floor,
        statistic,
        threshold: floor,
        n_trials: total,
        ci_halfwidth: fraction_ci(statistic, total),
        applicable: true,
        notes: format!("{hits}/{total} winners were initially largest"),
    })
}
