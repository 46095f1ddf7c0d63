//! Exact combinatorial probabilities and their Gaussian approximations.
//!
//! Three evaluation paths certify each other: brute-force enumeration of
//! neighbor sets (n_v* <= 20), exact 128-bit rational arithmetic
//! (n_v* <= 64), and log-gamma arithmetic (stable to n_v* ~ 1e7). The
//! Gaussian side evaluates the local-limit density both with the verbatim
//! normalization constant (|Sigma|/2pi)^((k0-1)/2) and with the standard
//! multivariate-normal normalization |Sigma|^(1/2)/(2pi)^((k0-1)/2); the two
//! agree at k0 = 2 and differ beyond, and comparison tables report both so
//! the data says which one tracks the exact probabilities.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

const TWO_PI: f64 = core::f64::consts::TAU;

/// A vertex's neighbor counts per leading part: s_i of n_of_v neighbors fall
/// in part i, whose size is part_sizes[i]; n_v_star is the total population.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeighborProfile {
    pub s: Vec<u64>,
    pub n_of_v: u64,
    pub part_sizes: Vec<u64>,
    pub n_v_star: u64,
}

impl NeighborProfile {
    pub fn new(s: Vec<u64>, part_sizes: Vec<u64>) -> Result<Self> {
        let p = NeighborProfile {
            n_of_v: s.iter().sum(),
            n_v_star: part_sizes.iter().sum(),
            s,
            part_sizes,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.s.is_empty() || self.s.len() != self.part_sizes.len() {
            return Err(Error::InvalidArgument(
                "profile and part sizes must have equal positive length".into(),
            ));
        }
        if self.s.iter().sum::<u64>() != self.n_of_v {
            return Err(Error::InvalidArgument("profile must sum to n_of_v".into()));
        }
        if self.part_sizes.iter().sum::<u64>() != self.n_v_star {
            return Err(Error::InvalidArgument(
                "part sizes must sum to n_v_star".into(),
            ));
        }
        if self.s.iter().zip(&self.part_sizes).any(|(si, pi)| si > pi) {
            return Err(Error::InvalidArgument(
                "profile entry exceeds its part size".into(),
            ));
        }
        Ok(())
    }
}

/// Exact binomial coefficient; callers keep n small enough that the result
/// fits (largest use here is C(64, 32) < 2^61).
fn binom_u128(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut res: u128 = 1;
    for i in 1..=k {
        res = res * (n - k + i) as u128 / i as u128;
    }
    res
}

/// ln C(n, k) via log-gamma.
pub fn ln_choose(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    libm::lgamma((n + 1) as f64) - libm::lgamma((k + 1) as f64) - libm::lgamma((n - k + 1) as f64)
}

/// Multivariate hypergeometric probability of the profile as the exact
/// rational (numerator, denominator). Requires n_v_star <= 64 so every
/// coefficient fits in 128 bits exactly.
pub fn profile_prob_rational(p: &NeighborProfile) -> Result<(u128, u128)> {
    p.validate()?;
    if p.n_v_star > 64 {
        return Err(Error::SizeLimit(format!(
            "rational path needs n_v_star <= 64, got {}",
            p.n_v_star
        )));
    }
    let num = p
        .s
        .iter()
        .zip(&p.part_sizes)
        .map(|(&si, &pi)| binom_u128(pi, si))
        .product::<u128>();
    let den = binom_u128(p.n_v_star, p.n_of_v);
    Ok((num, den))
}

#[doc(hidden)]
pub fn profile_prob_lgamma(p: &NeighborProfile) -> Result<f64> {
    p.validate()?;
    let ln_num: f64 = p
        .s
        .iter()
        .zip(&p.part_sizes)
        .map(|(&si, &pi)| ln_choose(pi, si))
        .sum();
    Ok(libm::exp(ln_num - ln_choose(p.n_v_star, p.n_of_v)))
}

/// Probability that a uniformly chosen n_of_v-subset of the n_v_star
/// population realizes exactly the given per-part counts. Exact rational
/// arithmetic below n_v_star = 65, log-gamma beyond.
pub fn profile_prob_exact(p: &NeighborProfile) -> Result<f64> {
    p.validate()?;
    if p.n_of_v == 0 {
        return Ok(1.0);
    }
    if p.n_v_star <= 64 {
        let (num, den) = profile_prob_rational(p)?;
        Ok(num as f64 / den as f64)
    } else {
        profile_prob_lgamma(p)
    }
}

/// Counts matching subsets among all C(n_v_star, n_of_v) of them:
/// (matching, total). Independent oracle for the closed forms; n_v_star <= 20.
pub fn profile_prob_enumerate_rational(p: &NeighborProfile) -> Result<(u64, u64)> {
    p.validate()?;
    if p.n_v_star > 20 {
        return Err(Error::SizeLimit(format!(
            "enumeration handles n_v_star <= 20, got {}",
            p.n_v_star
        )));
    }
    let n = p.n_v_star as u32;
    let k = p.n_of_v as u32;
    // Slot j belongs to part i when prefix[i] <= j < prefix[i+1].
    let mut part_masks: Vec<u32> = Vec::with_capacity(p.part_sizes.len());
    let mut base = 0u32;
    for &sz in &p.part_sizes {
        let mask = if sz == 0 {
            0
        } else {
            ((1u32 << sz) - 1) << base
        };
        part_masks.push(mask);
        base += sz as u32;
    }
    let mut matching = 0u64;
    let mut total = 0u64;
    let mut check = |mask: u32| {
        total += 1;
        let ok = part_masks
            .iter()
            .zip(&p.s)
            .all(|(&m, &si)| (mask & m).count_ones() as u64 == si);
        if ok {
            matching += 1;
        }
    };
    if k == 0 {
        check(0);
    } else {
        // Gosper's hack: iterate all n-bit masks with exactly k ones.
        let limit = (1u32 << n) - 1;
        let mut mask = (1u32 << k) - 1;
        while mask <= limit {
            check(mask);
            let c = mask & mask.wrapping_neg();
            let r = mask + c;
            mask = (((r ^ mask) >> 2) / c) | r;
        }
    }
    Ok((matching, total))
}

/// Enumerated probability as a float; see `profile_prob_enumerate_rational`.
pub fn profile_prob_enumerate(p: &NeighborProfile) -> Result<f64> {
    let (matching, total) = profile_prob_enumerate_rational(p)?;
    Ok(matching as f64 / total as f64)
}

/// All profiles s with sum n_of_v and 0 <= s_i <= part_sizes[i].
pub fn admissible_profiles(part_sizes: &[u64], n_of_v: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut cur = vec![0u64; part_sizes.len()];
    fn rec(parts: &[u64], left: u64, i: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if i + 1 == parts.len() {
            if left <= parts[i] {
                cur[i] = left;
                out.push(cur.clone());
            }
            return;
        }
        let rest: u64 = parts[i + 1..].iter().sum();
        let lo = left.saturating_sub(rest);
        let hi = left.min(parts[i]);
        for v in lo..=hi {
            cur[i] = v;
            rec(parts, left - v, i + 1, cur, out);
        }
    }
    if !part_sizes.is_empty() {
        rec(part_sizes, n_of_v, 0, &mut cur, &mut out);
    }
    out
}

/// Inputs of the local-limit density: k0 leading parts, population ratio
/// r = n*(v)/n_v*, and the rescaled deviation vector x = delta/sqrt(n*(v)).
#[derive(Clone, Debug, PartialEq)]
pub struct LltParams {
    pub k0: usize,
    pub ratio: f64,
    pub x: Vec<f64>,
}

impl LltParams {
    pub fn new(k0: usize, ratio: f64, x: Vec<f64>) -> Result<Self> {
        let p = LltParams { k0, ratio, x };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        if self.k0 < 2 {
            return Err(Error::InvalidArgument("k0 must be >= 2".into()));
        }
        // r = 0 is the infinite-population (multinomial) limit and is
        // accepted; r = 1 degenerates the correction factor.
        if !(0.0..1.0).contains(&self.ratio) {
            return Err(Error::InvalidArgument(format!(
                "ratio must lie in [0,1), got {}",
                self.ratio
            )));
        }
        if self.x.len() != self.k0 - 1 {
            return Err(Error::InvalidArgument(
                "x must have dimension k0-1".into(),
            ));
        }
        if self.x.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("x must be finite".into()));
        }
        Ok(())
    }
}

/// Sigma = k0/(1-r) (I + J) of size (k0-1) x (k0-1), J all ones.
pub fn sigma_matrix(params: &LltParams) -> Result<Vec<Vec<f64>>> {
    params.validate()?;
    let d = params.k0 - 1;
    let factor = params.k0 as f64 / (1.0 - params.ratio);
    Ok((0..d)
        .map(|i| {
            (0..d)
                .map(|j| factor * if i == j { 2.0 } else { 1.0 })
                .collect()
        })
        .collect())
}

/// Closed-form determinant k0^k0 / (1-r)^(k0-1); the eigenvalues of I + J
/// are k0 (once) and 1 (k0-2 times), so det(I + J) = k0.
pub fn sigma_det(params: &LltParams) -> Result<f64> {
    params.validate()?;
    let k0 = params.k0 as f64;
    Ok(libm::pow(k0, k0) / libm::pow(1.0 - params.ratio, k0 - 1.0))
}

/// Determinant by LU factorization with partial pivoting; test reference for
/// the closed form (matrices here are at most 9 x 9).
pub fn det_lu(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m.to_vec();
    let mut det = 1.0;
    for col in 0..n {
        let (pivot, _) = a
            .iter()
            .enumerate()
            .skip(col)
            .map(|(i, row)| (i, libm::fabs(row[col])))
            .max_by(|x, y| x.1.partial_cmp(&y.1).unwrap())
            .unwrap();
        if a[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det *= a[col][col];
        for i in col + 1..n {
            let f = a[i][col] / a[col][col];
            for j in col..n {
                a[i][j] -= f * a[col][j];
            }
        }
    }
    det
}

fn quadratic_form(params: &LltParams) -> Result<f64> {
    let sigma = sigma_matrix(params)?;
    let d = params.k0 - 1;
    let mut q = 0.0;
    for i in 0..d {
        for j in 0..d {
            q += params.x[i] * sigma[i][j] * params.x[j];
        }
    }
    Ok(q)
}

/// Density with the determinant-power normalization (|Sigma|/2pi)^((k0-1)/2).
pub fn llt_density(params: &LltParams) -> Result<f64> {
    let det = sigma_det(params)?;
    let q = quadratic_form(params)?;
    let d = (params.k0 - 1) as f64;
    Ok(libm::pow(det / TWO_PI, d / 2.0) * libm::exp(-0.5 * q))
}

/// Density with the standard multivariate-normal normalization
/// |Sigma|^(1/2) / (2pi)^((k0-1)/2) (Sigma being the inverse covariance).
/// Identical to `llt_density` at k0 = 2.
pub fn llt_density_standard(params: &LltParams) -> Result<f64> {
    let det = sigma_det(params)?;
    let q = quadratic_form(params)?;
    let d = (params.k0 - 1) as f64;
    Ok(libm::sqrt(det) / libm::pow(TWO_PI, d / 2.0) * libm::exp(-0.5 * q))
}

/// One row of a comparison table: exact probability of the profile at offset
/// `delta` from the centering point, against both density approximations.
#[derive(Clone, Debug)]
pub struct LltRow {
    pub delta: Vec<i64>,
    pub exact: f64,
    pub approx: f64,
    pub rel_err: f64,
    pub approx_std: f64,
    pub rel_err_std: f64,
}

/// Tabulates exact vs approximate probabilities for all profiles with
/// |delta_i| <= window around the centering point m_i = ceil(n_of_v * p_i),
/// p_i = part_sizes[i]/n_v_star (the last coordinate absorbs the remainder).
/// The approximation is density(x)/n_of_v^((k0-1)/2) at x = delta/sqrt(n_of_v).
pub fn llt_compare(
    n_v_star: u64,
    n_of_v: u64,
    part_sizes: &[u64],
    window: u64,
) -> Result<Vec<LltRow>> {
    let k0 = part_sizes.len();
    if k0 < 2 {
        return Err(Error::InvalidArgument(
            "comparison needs at least two leading parts".into(),
        ));
    }
    if part_sizes.iter().sum::<u64>() != n_v_star {
        return Err(Error::InvalidArgument(
            "part sizes must sum to n_v_star".into(),
        ));
    }
    if n_of_v == 0 || n_of_v > n_v_star {
        return Err(Error::InvalidArgument(
            "n_of_v must lie in [1, n_v_star]".into(),
        ));
    }
    let max_window = libm::log(n_v_star as f64) * libm::sqrt(n_of_v as f64);
    if window as f64 > max_window {
        return Err(Error::InvalidArgument(format!(
            "window {window} exceeds the ln(n)-scaled validity range {max_window:.0}"
        )));
    }
    let rows_total = libm::pow(2.0 * window as f64 + 1.0, (k0 - 1) as f64);
    if rows_total > 2e6 {
        return Err(Error::SizeLimit(
            "comparison grid would exceed 2e6 rows".into(),
        ));
    }
    // Centering point: m_i = ceil(n_of_v p_i) for i < k0, remainder last.
    let mut m = vec![0u64; k0];
    let mut acc = 0u64;
    for i in 0..k0 - 1 {
        let num = n_of_v as u128 * part_sizes[i] as u128;
        m[i] = num.div_ceil(n_v_star as u128) as u64;
        acc += m[i];
    }
    if acc > n_of_v {
        return Err(Error::InvalidArgument(
            "centering point is inadmissible (n_of_v too small for this k0)".into(),
        ));
    }
    m[k0 - 1] = n_of_v - acc;

    let r = n_of_v as f64 / n_v_star as f64;
    let root = libm::sqrt(n_of_v as f64);
    let scale = libm::pow(n_of_v as f64, (k0 - 1) as f64 / 2.0);
    let w = window as i64;
    let mut delta = vec![-w; k0 - 1];
    let mut rows = Vec::new();
    'grid: loop {
        // Build the profile for this delta; skip inadmissible corners.
        let mut s = vec![0u64; k0];
        let mut ok = true;
        let mut used: i128 = 0;
        for i in 0..k0 - 1 {
            let v = m[i] as i128 + delta[i] as i128;
            if v < 0 || v as u64 > part_sizes[i].min(n_of_v) {
                ok = false;
                break;
            }
            s[i] = v as u64;
            used += v;
        }
        if ok {
            let last = n_of_v as i128 - used;
            if last >= 0 && last as u64 <= part_sizes[k0 - 1] {
                s[k0 - 1] = last as u64;
                let profile = NeighborProfile::new(s, part_sizes.to_vec())?;
                let exact = profile_prob_exact(&profile)?;
                let x: Vec<f64> = delta.iter().map(|&d| d as f64 / root).collect();
                let params = LltParams::new(k0, r, x)?;
                let approx = llt_density(&params)? / scale;
                let approx_std = llt_density_standard(&params)? / scale;
                let rel = |a: f64| {
                    if exact > 0.0 {
                        libm::fabs(a - exact) / exact
                    } else {
                        f64::INFINITY
                    }
                };
                rows.push(LltRow {
                    delta: delta.clone(),
                    exact,
                    approx,
                    rel_err: rel(approx),
                    approx_std,
                    rel_err_std: rel(approx_std),
                });
            }
        }
        // Odometer over the (k0-1)-dimensional window.
        for i in (0..k0 - 1).rev() {
            delta[i] += 1;
            if delta[i] <= w {
                continue 'grid;
            }
            delta[i] = -w;
        }
        break;
    }
    Ok(rows)
}

/// P(X = Y) for independent X ~ Bin(n_i, p), Y ~ Bin(n_j, p).
pub fn tie_prob_exact(n_i: u64, n_j: u64, p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!(
            "probability must lie in [0,1], got {p}"
        )));
    }
    if p == 0.0 {
        return Ok(1.0); // both counts are identically zero
    }
    if p == 1.0 {
        return Ok(if n_i == n_j { 1.0 } else { 0.0 });
    }
    let ln_p = libm::log(p);
    let ln_q = libm::log1p(-p);
    let lpmf = |n: u64, s: u64| ln_choose(n, s) + s as f64 * ln_p + (n - s) as f64 * ln_q;
    let mut total = 0.0;
    for s in 0..=n_i.min(n_j) {
        total += libm::exp(lpmf(n_i, s) + lpmf(n_j, s));
    }
    Ok(total)
}

/// Largest pointwise gap between the Bin(n, q) pmf and the Gaussian density
/// with the same mean and variance, plus the gap rescaled by sigma^2 (the
/// local-limit bound says the gap is O(1/sigma^2)).
#[derive(Clone, Copy, Debug)]
pub struct BinomialLltDeviation {
    pub sup: f64,
    pub sup_times_sigma2: f64,
    pub at_k: u64,
}

pub fn binomial_llt_check(n: u64, q: f64) -> Result<BinomialLltDeviation> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::InvalidArgument(
            "q must lie strictly inside (0,1)".into(),
        ));
    }
    let sigma2 = n as f64 * q * (1.0 - q);
    let mean = n as f64 * q;
    let ln_q1 = libm::log(q);
    let ln_q0 = libm::log1p(-q);
    let norm = 1.0 / libm::sqrt(TWO_PI * sigma2);
    let mut sup = 0.0;
    let mut at_k = 0;
    for k in 0..=n {
        let pmf = libm::exp(ln_choose(n, k) + k as f64 * ln_q1 + (n - k) as f64 * ln_q0);
        let z = k as f64 - mean;
        let gauss = norm * libm::exp(-z * z / (2.0 * sigma2));
        let dev = libm::fabs(pmf - gauss);
        if dev > sup {
            sup = dev;
            at_k = k;
        }
    }
    Ok(BinomialLltDeviation {
        sup,
        sup_times_sigma2: sup * sigma2,
        at_k,
    })
}
