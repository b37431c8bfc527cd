//! Length bounds for QM and MWS codes.
//!
//! Real-valued rate constants (`h_q`, `lambda_q`, `mu_q`) are computed in
//! double precision. The averaging threshold
//! `q^(2k-2n) * sum_w C(n,w)^2 (q-1)^(2w) < 2(q-1)^2` is decided with exact
//! integers as long as the crossing lies below [`ThresholdLimits::exact`];
//! past that, a log-domain float evaluation and finally a local central limit
//! approximation take over, and the result records which one was used.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{FromPrimitive, One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{build_field, FieldInfo};
use crate::json;

fn check_q(q: u64) -> Result<()> {
    if q < 2 {
        Err(Error::Domain(format!("q must be at least 2, got {q}")))
    } else {
        Ok(())
    }
}

/// q-ary entropy `-x log_q x - (1-x) log_q(1-x) + x log_q(q-1)`, with
/// `0 log 0 = 0`.
pub fn entropy_q(q: u64, x: f64) -> Result<f64> {
    check_q(q)?;
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("entropy argument {x} is outside [0, 1]")));
    }
    let xlnx = |t: f64| if t == 0.0 { 0.0 } else { t * t.ln() };
    let q = q as f64;
    Ok((-xlnx(x) - xlnx(1.0 - x) + x * (q - 1.0).ln()) / q.ln())
}

/// `(1 - h_q((q-2)/(q-1))) * ln q`.
///
/// With `v = 1/(q-1)` this equals `ln(1+v) + (1-v) ln(1-v)
/// = sum_{j>=3} c_j v^j`, where `c_j = 1/(j-1)` for odd j and
/// `-(j-2)/(j(j-1))` for even j. The series avoids the cancellation that
/// makes the direct formula useless once `q^3` approaches `1/eps`.
fn entropy_gap_nats(q: u64) -> f64 {
    if q < 16 {
        let x = (q as f64 - 2.0) / (q as f64 - 1.0);
        return (1.0 - entropy_q(q, x).expect("x in [0,1]")) * (q as f64).ln();
    }
    let v = 1.0 / (q as f64 - 1.0);
    let mut sum = 0.0;
    let mut vp = v * v;
    for j in 3..200u32 {
        vp *= v;
        let jf = f64::from(j);
        let c = if j % 2 == 1 {
            1.0 / (jf - 1.0)
        } else {
            -(jf - 2.0) / (jf * (jf - 1.0))
        };
        let term = c * vp;
        sum += term;
        if term.abs() < sum.abs() * 1e-18 {
            break;
        }
    }
    sum
}

/// `lambda_q = (1 - h_q((q-2)/(q-1)))^(-1)`; GV-based QM codes exist at
/// length `ceil(k * lambda_q)`.
pub fn lambda_q(q: u64) -> Result<f64> {
    check_q(q)?;
    Ok((q as f64).ln() / entropy_gap_nats(q))
}

/// `mu_q = 2 / log_q(q^2 / (q^2 - 2q + 2))`.
pub fn mu_q(q: u64) -> Result<f64> {
    check_q(q)?;
    let qf = q as f64;
    let a = 2.0 * (qf - 1.0) / (qf * qf);
    Ok(2.0 * qf.ln() / -(-a).ln_1p())
}

/// `ceil(q/2 * (q^k - 1)/(q - 1))`.
pub fn mws_lower_bound(q: u64, k: u32) -> BigUint {
    let q = BigUint::from(q);
    let reps = (q.pow(k) - 1u32) / (&q - 1u32);
    (q * reps).div_ceil(&BigUint::from(2u32))
}

/// Known exact shortest MWS lengths: `2^k - 1` for q = 2, `q(q+1)/2` for k = 2.
pub fn exact_mws_length(q: u64, k: u32) -> Option<BigUint> {
    if q == 2 {
        Some((BigUint::one() << k) - 1u32)
    } else if k == 2 {
        Some(BigUint::from(q) * (q + 1) / 2u32)
    } else {
        None
    }
}

/// `sum_{w=0}^{n} C(n,w)^2 (q-1)^(2w)`, summed term by term.
pub fn binom_sq_sum(n: u64, q: u64) -> BigUint {
    let t = BigUint::from(q - 1).pow(2);
    let mut binom = BigUint::one();
    let mut tp = BigUint::one();
    let mut sum = BigUint::one();
    for w in 1..=n {
        binom = binom * (n - w + 1) / w;
        tp *= &t;
        sum += &binom * &binom * &tp;
    }
    sum
}

/// `(w_max, M(n,q))` with `w_max = floor((q-1)(n+1)/q)` and
/// `M(n,q) = C(n, w_max) (q-1)^w_max`.
pub fn max_term(n: u64, q: u64) -> (u64, BigUint) {
    let w = (q - 1) * (n + 1) / q;
    (w, binomial(n, w) * BigUint::from(q - 1).pow(w as u32))
}

pub fn binomial(n: u64, w: u64) -> BigUint {
    if w > n {
        return BigUint::zero();
    }
    let w = w.min(n - w);
    (1..=w).fold(BigUint::one(), |acc, i| acc * (n - w + i) / i)
}

/// `a / b` as f64 without overflowing intermediate conversions.
pub fn ratio_f64(a: &BigUint, b: &BigUint) -> f64 {
    if a.is_zero() {
        return 0.0;
    }
    let shift = a.bits() as i64 - b.bits() as i64 - 64;
    let quotient = if shift > 0 {
        a / (b << shift as u64)
    } else {
        (a << (-shift) as u64) / b
    };
    quotient.to_f64().unwrap_or(f64::INFINITY) * 2f64.powi(shift.clamp(-2000, 2000) as i32)
}

/// `binom_sq_sum(n, q) * sqrt(n) / q^(2n)`; bounded in n for fixed q.
pub fn collision_ratio(n: u64, q: u64) -> f64 {
    let s = binom_sq_sum(n, q);
    ratio_f64(&s, &BigUint::from(q).pow(2 * n as u32)) * (n as f64).sqrt()
}

/// The constant `q / sqrt(q-1)` that the maximal-term argument gives for
/// `binom_sq_sum(n, q) < C_q q^(2n) / sqrt(n)`.
pub fn collision_constant(q: u64) -> f64 {
    q as f64 / (q as f64 - 1.0).sqrt()
}

/// Exact evaluation of the averaging condition at one length.
pub fn eqbound_holds(q: u64, k: u32, n: u64) -> bool {
    let qb = BigUint::from(q);
    let lhs = binom_sq_sum(n, q) * qb.pow(2 * k);
    let rhs = BigUint::from(2 * (q - 1) * (q - 1)) * qb.pow(2 * n as u32);
    lhs < rhs
}

/// Left side of the averaging condition as an exact fraction
/// `(numerator, denominator)`.
pub fn eqbound_lhs(q: u64, k: u32, n: u64) -> (BigUint, BigUint) {
    let qb = BigUint::from(q);
    let num = binom_sq_sum(n, q) * qb.pow(2 * k);
    let den = qb.pow(2 * n as u32);
    let g = num.gcd(&den);
    (num / &g, den / g)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdMethod {
    Exact,
    Float,
    Asymptotic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ThresholdLimits {
    /// Largest n scanned with exact integers.
    pub exact: u64,
    /// Largest n evaluated in floating point.
    pub float: u64,
}

impl Default for ThresholdLimits {
    fn default() -> Self {
        ThresholdLimits {
            exact: 1 << 13,
            float: 1 << 22,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EqBoundThreshold {
    #[serde(serialize_with = "json::big")]
    pub n: BigUint,
    pub method: ThresholdMethod,
}

/// Smallest `n >= k` satisfying the averaging condition, with default limits.
pub fn eqbound_min_n(q: u64, k: u32) -> Result<EqBoundThreshold> {
    eqbound_min_n_with(q, k, ThresholdLimits::default())
}

pub fn eqbound_min_n_with(q: u64, k: u32, limits: ThresholdLimits) -> Result<EqBoundThreshold> {
    check_q(q)?;
    if let Some(n) = exact_scan(q, k, limits.exact) {
        return Ok(EqBoundThreshold {
            n: BigUint::from(n),
            method: ThresholdMethod::Exact,
        });
    }
    let lo = limits.exact.max(u64::from(k));
    if let Some(n) = float_search(q, k, lo, limits.float) {
        return Ok(EqBoundThreshold {
            n: BigUint::from(n),
            method: ThresholdMethod::Float,
        });
    }
    Ok(EqBoundThreshold {
        n: asymptotic_min_n(q, k),
        method: ThresholdMethod::Asymptotic,
    })
}

/// Scans n = k, k+1, ..., limit with the three-term recurrence
/// `(n+1) S_{n+1} = (2n+1)(1+t) S_n - n (1-t)^2 S_{n-1}`, `t = (q-1)^2`.
fn exact_scan(q: u64, k: u32, limit: u64) -> Option<u64> {
    let t = BigInt::from((q - 1) * (q - 1));
    let one_plus_t = &t + 1;
    let one_minus_t_sq = (&t - 1) * (&t - 1);
    let q2 = BigUint::from(q * q);
    let lhs_scale = BigUint::from(q).pow(2 * k);
    let rhs_scale = BigUint::from(2 * (q - 1) * (q - 1));

    let mut prev = BigInt::zero();
    let mut cur = BigInt::one(); // S_0
    let mut q_pow = BigUint::one(); // q^(2n)
    for n in 0..=limit {
        if n >= u64::from(k) {
            let s = cur.magnitude();
            if s * &lhs_scale < &rhs_scale * &q_pow {
                return Some(n);
            }
        }
        let next: BigInt = (BigInt::from(2 * n + 1) * &one_plus_t * &cur
            - BigInt::from(n) * &one_minus_t_sq * &prev)
            / BigInt::from(n + 1);
        debug_assert_eq!(next.sign(), Sign::Plus);
        prev = std::mem::replace(&mut cur, next);
        q_pow *= &q2;
    }
    None
}

/// Natural log of the averaging left side at length n.
pub fn eqbound_lhs_ln(q: u64, k: u32, n: u64) -> f64 {
    let lq = (q as f64).ln();
    let lt = if q == 2 { 0.0 } else { ((q - 1) as f64).ln() };
    // log-sum-exp over w of 2 (ln C(n,w) + w ln(q-1))
    let mut terms = Vec::with_capacity(n as usize + 1);
    let mut ln_binom = 0.0f64;
    let mut comp = 0.0f64;
    terms.push(0.0);
    for w in 1..=n {
        let inc = ((n - w + 1) as f64 / w as f64).ln();
        // Kahan summation of the running log-binomial.
        let y = inc - comp;
        let t = ln_binom + y;
        comp = (t - ln_binom) - y;
        ln_binom = t;
        terms.push(2.0 * (ln_binom + w as f64 * lt));
    }
    let peak = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = terms.iter().map(|x| (x - peak).exp()).sum();
    let ln_s = peak + sum.ln();
    2.0 * f64::from(k) * lq + ln_s - 2.0 * n as f64 * lq
}

fn float_holds(q: u64, k: u32, n: u64) -> bool {
    let rhs = (2.0 * ((q - 1) as f64).powi(2)).ln();
    eqbound_lhs_ln(q, k, n) < rhs
}

/// Bisection on `[lo, limit]`; the left side is non-increasing in n.
fn float_search(q: u64, k: u32, lo: u64, limit: u64) -> Option<u64> {
    if lo > limit || !float_holds(q, k, limit) {
        return None;
    }
    let (mut bad, mut good) = (lo, limit);
    if float_holds(q, k, lo) {
        return Some(lo);
    }
    while good - bad > 1 {
        let mid = bad + (good - bad) / 2;
        if float_holds(q, k, mid) {
            good = mid;
        } else {
            bad = mid;
        }
    }
    Some(good)
}

/// Uses `sum_w P(w)^2 ~ 1/(2 sqrt(pi n p (1-p)))` for the binomial
/// collision probability with `p = (q-1)/q`.
pub fn asymptotic_min_n(q: u64, k: u32) -> BigUint {
    let qf = q as f64;
    let root = qf.powi(2 * k as i32) * qf
        / (2.0 * (std::f64::consts::PI * (qf - 1.0)).sqrt() * 2.0 * (qf - 1.0).powi(2));
    BigUint::from_f64((root * root).ceil()).unwrap_or_default()
}

/// Reported estimate `q / (2 (q-1)^(5/2))` of the existence constant.
pub fn existence_constant_estimate(q: u64) -> f64 {
    let qf = q as f64;
    qf / (2.0 * (qf - 1.0).powf(2.5))
}

/// `2^exponent`, printed in full only when it is reasonably short.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerOfTwo {
    pub exponent: u64,
    #[serde(serialize_with = "json::big_opt")]
    pub value: Option<BigUint>,
}

impl PowerOfTwo {
    const PRINT_LIMIT: u64 = 1024;

    pub fn new(exponent: u64) -> Self {
        let value = (exponent <= Self::PRINT_LIMIT).then(|| BigUint::one() << exponent);
        PowerOfTwo { exponent, value }
    }

    pub fn to_biguint(&self) -> BigUint {
        BigUint::one() << self.exponent
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EmbeddedLengths {
    /// `2^ceil(k lambda_q)`.
    pub gv: PowerOfTwo,
    /// `2^((q^k-1)/(q-1) - 1)`.
    pub simplex: PowerOfTwo,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AsymptoticRatios {
    /// `lambda_q / (2 q^3 ln q)`.
    pub lambda: f64,
    /// `mu_q / (q ln q)`.
    pub mu: f64,
    /// `lambda_q / mu_q / (2 q^2)`.
    pub lambda_over_mu: f64,
}

pub fn asymptotic_ratios(q: u64) -> Result<AsymptoticRatios> {
    let (l, m) = (lambda_q(q)?, mu_q(q)?);
    let qf = q as f64;
    Ok(AsymptoticRatios {
        lambda: l / (2.0 * qf.powi(3) * qf.ln()),
        mu: m / (qf * qf.ln()),
        lambda_over_mu: l / m / (2.0 * qf * qf),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub note: &'static str,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundsReport {
    pub field: FieldInfo,
    pub q: u64,
    pub k: u32,
    #[serde(serialize_with = "json::big")]
    pub lower_bound_length: BigUint,
    #[serde(serialize_with = "json::big_opt")]
    pub exact_length: Option<BigUint>,
    pub lambda_q: f64,
    pub mu_q: f64,
    pub gv_qm_length: u64,
    pub nonconstructive_qm_length: u64,
    pub embedded_lengths: EmbeddedLengths,
    pub eqbound_min_n: EqBoundThreshold,
    pub asymptotic_ratios: AsymptoticRatios,
    /// `(1/k) log_q` of the lower bound and of the averaging threshold.
    pub log_rate: [f64; 2],
    pub limit_bracket: [f64; 2],
    pub existence_constant: Estimate,
}

pub fn bounds_report(q: u64, k: u32) -> Result<BoundsReport> {
    bounds_report_with(q, k, ThresholdLimits::default())
}

pub fn bounds_report_with(q: u64, k: u32, limits: ThresholdLimits) -> Result<BoundsReport> {
    if k == 0 {
        return Err(Error::Domain("k must be positive".into()));
    }
    let field = build_field(q)?.info();
    let lambda = lambda_q(q)?;
    let mu = mu_q(q)?;
    let lower = mws_lower_bound(q, k);
    let gv_qm_length = (f64::from(k) * lambda).ceil() as u64;
    let reps = crate::code::projective_count(q as u32, k as usize) as u64;
    let eq = eqbound_min_n_with(q, k, limits)?;
    let log_q = |x: &BigUint| ln_big(x) / (q as f64).ln() / f64::from(k);
    Ok(BoundsReport {
        field,
        q,
        k,
        exact_length: exact_mws_length(q, k),
        lambda_q: lambda,
        mu_q: mu,
        gv_qm_length,
        nonconstructive_qm_length: (f64::from(k) * mu).ceil() as u64,
        embedded_lengths: EmbeddedLengths {
            gv: PowerOfTwo::new(gv_qm_length),
            simplex: PowerOfTwo::new(reps - 1),
        },
        log_rate: [log_q(&lower), log_q(&eq.n)],
        lower_bound_length: lower,
        eqbound_min_n: eq,
        asymptotic_ratios: asymptotic_ratios(q)?,
        limit_bracket: [1.0, 4.0],
        existence_constant: Estimate {
            value: existence_constant_estimate(q),
            note: "approximate; asymptotic estimate, not used in any check",
        },
    })
}

fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        x.to_f64().unwrap_or(f64::INFINITY).ln()
    } else {
        let shift = bits - 64;
        (x >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
    }
}

/// Header of the CSV table produced from a list of reports.
pub const CSV_HEADER: &str = "q,k,lower_bound,exact_length,lambda_q,mu_q,gv_qm_length,\
nonconstructive_qm_length,gv_embedded_log2,simplex_embedded_log2,eqbound_min_n,eqbound_method,\
ratio_lambda,ratio_mu,ratio_lambda_over_mu";

impl BoundsReport {
    pub fn csv_row(&self) -> String {
        let method = match self.eqbound_min_n.method {
            ThresholdMethod::Exact => "exact",
            ThresholdMethod::Float => "float",
            ThresholdMethod::Asymptotic => "asymptotic",
        };
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.q,
            self.k,
            self.lower_bound_length,
            self.exact_length.as_ref().map(ToString::to_string).unwrap_or_default(),
            self.lambda_q,
            self.mu_q,
            self.gv_qm_length,
            self.nonconstructive_qm_length,
            self.embedded_lengths.gv.exponent,
            self.embedded_lengths.simplex.exponent,
            self.eqbound_min_n.n,
            method,
            self.asymptotic_ratios.lambda,
            self.asymptotic_ratios.mu,
            self.asymptotic_ratios.lambda_over_mu,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn entropy_values() {
        for q in [2, 3, 4, 5, 7, 8, 9] {
            assert_eq!(entropy_q(q, 0.0).unwrap(), 0.0);
            let cap = (q as f64 - 1.0) / q as f64;
            assert!(close(entropy_q(q, cap).unwrap(), 1.0, 1e-12), "q={q}");
        }
        assert!(close(entropy_q(2, 0.5).unwrap(), 1.0, 1e-12));
        assert!(entropy_q(2, -0.1).is_err());
        assert!(entropy_q(2, 1.5).is_err());
        assert!(entropy_q(1, 0.5).is_err());
    }

    #[test]
    fn entropy_is_concave_with_peak_at_capacity() {
        for q in [2u64, 3, 4, 5, 7, 8, 9] {
            let grid: Vec<f64> = (0..=1000).map(|i| f64::from(i) / 1000.0).collect();
            let h: Vec<f64> = grid.iter().map(|&x| entropy_q(q, x).unwrap()).collect();
            for w in h.windows(3) {
                assert!(w[0] + w[2] <= 2.0 * w[1] + 1e-9, "q={q}");
            }
            let max = h.iter().copied().fold(f64::MIN, f64::max);
            assert!(max <= 1.0 + 1e-9);
        }
    }

    #[test]
    fn lambda_values() {
        assert_eq!(lambda_q(2).unwrap(), 1.0);
        let direct = 1.0 / (1.0 - 1.5 * 2f64.ln() / 3f64.ln());
        assert!(close(lambda_q(3).unwrap(), direct, 1e-12));
        assert!((lambda_q(3).unwrap() - 18.66).abs() < 0.01);
    }

    #[test]
    fn series_matches_direct_formula() {
        for q in 16..60u64 {
            let x = (q as f64 - 2.0) / (q as f64 - 1.0);
            let direct = (1.0 - entropy_q(q, x).unwrap()) * (q as f64).ln();
            let series = entropy_gap_nats(q);
            // The direct route loses about log10(q^2) digits.
            assert!(close(series, direct, 1e-8), "q={q}: {series} vs {direct}");
        }
    }

    #[test]
    fn mu_values() {
        assert!(close(mu_q(2).unwrap(), 2.0, 1e-12));
        assert!(close(mu_q(3).unwrap(), 2.0 * 3f64.ln() / (9.0f64 / 5.0).ln(), 1e-12));
        assert!((mu_q(3).unwrap() - 3.74).abs() < 0.01);
    }

    #[test]
    fn lower_bounds() {
        for k in 1..=10 {
            assert_eq!(mws_lower_bound(2, k), BigUint::from((1u32 << k) - 1));
        }
        assert_eq!(mws_lower_bound(3, 2), BigUint::from(6u32));
        assert_eq!(mws_lower_bound(4, 2), BigUint::from(10u32));
        assert_eq!(mws_lower_bound(3, 3), BigUint::from(20u32));
        for q in [3u64, 4, 5, 7, 8, 9] {
            assert_eq!(Some(mws_lower_bound(q, 2)), exact_mws_length(q, 2));
        }
    }

    #[test]
    fn binom_sq_sum_vandermonde() {
        for n in 0..=64 {
            assert_eq!(binom_sq_sum(n, 2), binomial(2 * n, n), "n={n}");
        }
    }

    #[test]
    fn max_term_examples() {
        assert_eq!(max_term(3, 2), (2, BigUint::from(3u32)));
        assert_eq!(max_term(4, 3), (3, BigUint::from(32u32)));
    }

    #[test]
    fn max_term_is_the_true_maximum() {
        for q in [2u64, 3, 4, 5, 7, 8, 9] {
            for n in 0..=80 {
                let best = (0..=n)
                    .map(|w| binomial(n, w) * BigUint::from(q - 1).pow(w as u32))
                    .max()
                    .unwrap();
                assert_eq!(max_term(n, q).1, best, "q={q} n={n}");
            }
        }
    }

    #[test]
    fn recurrence_matches_direct_sum() {
        // Drive the recurrence directly and compare with the term-by-term sum.
        for q in [2u64, 3, 5, 9] {
            let t = BigInt::from((q - 1) * (q - 1));
            let (mut prev, mut cur) = (BigInt::zero(), BigInt::one());
            for n in 0..60u64 {
                assert_eq!(cur.magnitude(), &binom_sq_sum(n, q), "q={q} n={n}");
                let next = (BigInt::from(2 * n + 1) * (&t + 1) * &cur
                    - BigInt::from(n) * (&t - 1) * (&t - 1) * &prev)
                    / BigInt::from(n + 1);
                prev = std::mem::replace(&mut cur, next);
            }
        }
    }

    #[test]
    fn threshold_binary_dimension_two() {
        let th = eqbound_min_n(2, 2).unwrap();
        assert_eq!(th, EqBoundThreshold { n: BigUint::from(21u32), method: ThresholdMethod::Exact });
        assert!(!eqbound_holds(2, 2, 20));
        assert!(eqbound_holds(2, 2, 21));
        let (a, b) = eqbound_lhs(2, 2, 20);
        assert!((ratio_f64(&a, &b) - 2.006).abs() < 1e-3);
        let (a, b) = eqbound_lhs(2, 2, 21);
        assert!((ratio_f64(&a, &b) - 1.958).abs() < 1e-3);
    }

    #[test]
    fn threshold_is_monotone_in_k() {
        for q in [2u64, 3, 4, 5] {
            let mut last = BigUint::zero();
            for k in 1..=3 {
                let n = eqbound_min_n(q, k).unwrap().n;
                assert!(n >= last);
                last = n;
            }
        }
    }

    #[test]
    fn float_route_agrees_with_exact_route() {
        let forced = ThresholdLimits { exact: 0, float: 1 << 16 };
        for (q, k) in [(2u64, 2u32), (2, 3), (2, 4), (3, 2), (3, 3), (4, 2), (5, 2)] {
            let exact = eqbound_min_n(q, k).unwrap();
            assert_eq!(exact.method, ThresholdMethod::Exact);
            let float = eqbound_min_n_with(q, k, forced).unwrap();
            assert_eq!(float.method, ThresholdMethod::Float);
            assert_eq!(float.n, exact.n, "q={q} k={k}");
        }
    }

    #[test]
    fn asymptotic_route_is_close() {
        let exact = eqbound_min_n(2, 4).unwrap().n.to_f64().unwrap();
        let asym = asymptotic_min_n(2, 4).to_f64().unwrap();
        assert!((asym - exact).abs() / exact < 0.01, "{asym} vs {exact}");
        let forced = ThresholdLimits { exact: 0, float: 0 };
        assert_eq!(
            eqbound_min_n_with(2, 4, forced).unwrap().method,
            ThresholdMethod::Asymptotic
        );
    }

    #[test]
    fn ratio_conversion() {
        let a = BigUint::from(3u32) << 3000u32;
        let b = BigUint::from(2u32) << 3000u32;
        assert!(close(ratio_f64(&a, &b), 1.5, 1e-15));
        assert!(close(ratio_f64(&BigUint::from(1u32), &BigUint::from(3u32)), 1.0 / 3.0, 1e-15));
    }

    #[test]
    fn report_cells() {
        let r = bounds_report(2, 3).unwrap();
        assert_eq!(r.lower_bound_length, BigUint::from(7u32));
        assert_eq!(r.exact_length, Some(BigUint::from(7u32)));
        assert_eq!(r.gv_qm_length, 3);
        assert_eq!(r.embedded_lengths.gv.to_biguint(), BigUint::from(8u32));
        let r = bounds_report(3, 2).unwrap();
        assert_eq!(r.lower_bound_length, BigUint::from(6u32));
        assert_eq!(r.exact_length, Some(BigUint::from(6u32)));
        let r = bounds_report(3, 3).unwrap();
        assert_eq!(r.lower_bound_length, BigUint::from(20u32));
        assert_eq!(r.exact_length, None);
        assert_eq!(r.limit_bracket, [1.0, 4.0]);
        assert!(matches!(bounds_report(6, 2), Err(Error::NotPrimePower { q: 6 })));
    }
}
