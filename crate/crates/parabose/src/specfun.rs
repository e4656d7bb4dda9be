//! Scalar special-function kernels: rising factorials, binomials, Laguerre
//! and Hermite polynomials, and hypergeometric series evaluators.
//!
//! Everything here is plain `f64`. Terminating sums are accumulated with
//! compensated (Kahan) summation so that the finite half-integer cases of the
//! Wigner series reproduce polynomial coefficients to near machine precision.

use crate::{Error, Result};

/// Compensated (Kahan) accumulator for `f64` sums.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    err: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let y = x - self.err;
        let t = self.sum + y;
        self.err = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

/// Truncation policy for infinite series.
///
/// A series is declared converged once `small_streak` consecutive terms
/// satisfy `|term| < rel_tol * |partial sum|`; the estimated error is the sum
/// of the magnitudes of that last streak. `max_terms` is a hard cap; hitting
/// it yields [`ConvergenceStatus::NotGuaranteed`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    pub rel_tol: f64,
    pub small_streak: usize,
    pub max_terms: usize,
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            small_streak: 20,
            max_terms: 100_000,
        }
    }
}

impl SeriesControl {
    pub fn new(rel_tol: f64, small_streak: usize, max_terms: usize) -> Result<Self> {
        if rel_tol.is_nan() || rel_tol <= 0.0 {
            return Err(Error::InvalidParameters(format!(
                "rel_tol must be positive, got {rel_tol}"
            )));
        }
        if small_streak < 1 {
            return Err(Error::InvalidParameters(
                "small_streak must be at least 1".into(),
            ));
        }
        if max_terms < small_streak {
            return Err(Error::InvalidParameters(format!(
                "max_terms ({max_terms}) must be at least small_streak ({small_streak})"
            )));
        }
        Ok(Self {
            rel_tol,
            small_streak,
            max_terms,
        })
    }
}

/// How a series evaluation ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ConvergenceStatus {
    /// The sum terminates; the only error is floating-point rounding.
    Exact,
    /// The stop rule fired inside the absolutely convergent regime.
    Converged,
    /// Either the term cap was hit or convergence has no theoretical backing.
    NotGuaranteed,
}

impl ConvergenceStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            ConvergenceStatus::Exact => "Exact",
            ConvergenceStatus::Converged => "Converged",
            ConvergenceStatus::NotGuaranteed => "NotGuaranteed",
        }
    }
}

/// Value of a series evaluation together with convergence diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub value: f64,
    pub est_error: f64,
    pub terms_used: usize,
    pub status: ConvergenceStatus,
}

impl EvalResult {
    pub fn exact(value: f64, est_error: f64, terms_used: usize) -> Self {
        Self {
            value,
            est_error,
            terms_used,
            status: ConvergenceStatus::Exact,
        }
    }
}

/// If `x` is a nonpositive integer, returns `-x` as an unsigned integer.
pub(crate) fn nonpos_int(x: f64) -> Option<u64> {
    if x <= 0.0 && x == x.trunc() && x > -9.0e15 {
        Some((-x) as u64)
    } else {
        None
    }
}

/// Rising factorial (Pochhammer symbol) `x (x+1) ... (x+k-1)`, with the empty
/// product for `k = 0`.
///
/// Computed by iterative product, never through gamma ratios, so exact zeros
/// at nonpositive-integer arguments stay exact.
pub fn rising_factorial(x: f64, k: u32) -> f64 {
    let mut p = 1.0;
    for i in 0..k {
        p *= x + i as f64;
    }
    p
}

/// `n!` as a float; overflows to infinity beyond 170.
pub fn factorial(n: u32) -> f64 {
    rising_factorial(1.0, n)
}

/// Binomial coefficient `C(n, k)` as a float.
pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut p = 1.0;
    for i in 0..k {
        p = p * (n - i) as f64 / (i + 1) as f64;
    }
    p
}

// Lanczos approximation, g = 7, 9 coefficients (published digits kept).
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function via the Lanczos approximation (reflection for x < 1/2).
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
        return std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * gamma(1.0 - x));
    }
    let x = x - 1.0;
    let mut acc = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    (2.0 * std::f64::consts::PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
}

/// Generalized Laguerre polynomial `L_n^(alpha)(z)` through the extended
/// definition `(1/n!) sum_k (-n)_k (alpha+k+1)_{n-k} z^k / k!`, valid for all
/// real `alpha` including negative integers.
///
/// Evaluated by the degree recurrence, which computes the same polynomial
/// (the recurrence is an identity in `alpha`) without the cancellation the
/// alternating monomial sum suffers at large `n z`.
pub fn laguerre_gen(n: u32, alpha: f64, z: f64) -> f64 {
    let mut seq = LaguerreSeq::new(alpha, z);
    let mut val = seq.next_value();
    for _ in 0..n {
        val = seq.next_value();
    }
    val
}

/// The extended definition summed literally; reference for `laguerre_gen`,
/// reliable only while the monomials do not cancel catastrophically.
#[cfg(test)]
fn laguerre_gen_sum(n: u32, alpha: f64, z: f64) -> f64 {
    let mut acc = KahanSum::new();
    for k in 0..=n {
        acc.add(
            rising_factorial(-(n as f64), k)
                * rising_factorial(alpha + k as f64 + 1.0, n - k)
                * z.powi(k as i32)
                / factorial(k),
        );
    }
    acc.value() / factorial(n)
}

/// Laguerre polynomial `L_n(z) = L_n^(0)(z)`.
pub fn laguerre(n: u32, z: f64) -> f64 {
    laguerre_gen(n, 0.0, z)
}

/// Physicists' Hermite polynomial `H_n(x)` via the three-term recurrence
/// `H_{n+1} = 2x H_n - 2n H_{n-1}`.
pub fn hermite(n: u32, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 2.0 * x;
    for m in 1..n {
        let next = 2.0 * x * cur - 2.0 * m as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Streaming evaluation of `L_d^(alpha)(t)` for `d = 0, 1, 2, ...` through
/// the degree recurrence; each call to [`Self::next_value`] yields the next
/// degree. The recurrence is a polynomial identity in `alpha`, so it is valid
/// for the extended definition at negative integer `alpha` as well.
#[derive(Debug, Clone)]
pub(crate) struct LaguerreSeq {
    alpha: f64,
    t: f64,
    deg: u32,
    prev: f64,
    cur: f64,
}

impl LaguerreSeq {
    pub fn new(alpha: f64, t: f64) -> Self {
        Self {
            alpha,
            t,
            deg: 0,
            prev: 0.0,
            cur: 0.0,
        }
    }

    pub fn next_value(&mut self) -> f64 {
        let val = match self.deg {
            0 => 1.0,
            1 => self.alpha + 1.0 - self.t,
            d => {
                let dm1 = (d - 1) as f64;
                ((2.0 * dm1 + 1.0 + self.alpha - self.t) * self.cur - (dm1 + self.alpha) * self.prev)
                    / d as f64
            }
        };
        self.prev = self.cur;
        self.cur = val;
        self.deg += 1;
        val
    }
}

fn check_denominators(numer: &[f64], denom: &[f64]) -> Result<Option<u64>> {
    let n_term = numer.iter().filter_map(|&x| nonpos_int(x)).min();
    if let Some(d_term) = denom.iter().filter_map(|&x| nonpos_int(x)).min() {
        // a denominator Pochhammer vanishes at index d_term + 1; the series
        // must terminate strictly before that
        let ok = matches!(n_term, Some(n) if n <= d_term);
        if !ok {
            return Err(Error::InvalidParameters(format!(
                "denominator parameter {} vanishes before the series terminates",
                -(d_term as f64)
            )));
        }
    }
    Ok(n_term)
}

/// Generalized hypergeometric series `pFq(numer; denom; z)` summed directly
/// from the definition.
///
/// If some numerator parameter is a nonpositive integer the sum terminates
/// and the result is exact; otherwise the [`SeriesControl`] stop rule
/// applies.
pub fn hyp_pfq(numer: &[f64], denom: &[f64], z: f64, ctl: &SeriesControl) -> Result<EvalResult> {
    let n_term = check_denominators(numer, denom)?;

    let mut acc = KahanSum::new();
    let mut abs_acc = 0.0f64;
    let mut term = 1.0f64;

    if let Some(nt) = n_term {
        // exact finite sum of nt + 1 terms
        for k in 0..=nt {
            acc.add(term);
            abs_acc += term.abs();
            let kf = k as f64;
            let mut ratio = z / (kf + 1.0);
            for &p in numer {
                ratio *= p + kf;
            }
            for &q in denom {
                ratio /= q + kf;
            }
            term *= ratio;
        }
        return Ok(EvalResult::exact(
            acc.value(),
            f64::EPSILON * abs_acc,
            nt as usize + 1,
        ));
    }

    let mut streak = 0usize;
    let mut streak_abs = 0.0f64;
    for k in 0..ctl.max_terms {
        acc.add(term);
        if term.abs() < ctl.rel_tol * acc.value().abs() {
            streak += 1;
            streak_abs += term.abs();
            if streak >= ctl.small_streak {
                return Ok(EvalResult {
                    value: acc.value(),
                    est_error: streak_abs,
                    terms_used: k + 1,
                    status: ConvergenceStatus::Converged,
                });
            }
        } else {
            streak = 0;
            streak_abs = 0.0;
        }
        let kf = k as f64;
        let mut ratio = z / (kf + 1.0);
        for &p in numer {
            ratio *= p + kf;
        }
        for &q in denom {
            ratio /= q + kf;
        }
        term *= ratio;
    }
    Ok(EvalResult {
        value: acc.value(),
        est_error: streak_abs.max(term.abs() * ctl.small_streak as f64),
        terms_used: ctl.max_terms,
        status: ConvergenceStatus::NotGuaranteed,
    })
}

/// Terminating hypergeometric series: some numerator parameter must be a
/// nonpositive integer, and no denominator parameter may vanish first.
pub fn hyp_terminating(numer: &[f64], denom: &[f64], z: f64) -> Result<f64> {
    if !numer.iter().any(|&x| nonpos_int(x).is_some()) {
        return Err(Error::InvalidParameters(
            "series does not terminate: no numerator parameter is a nonpositive integer".into(),
        ));
    }
    let ctl = SeriesControl::default();
    Ok(hyp_pfq(numer, denom, z, &ctl)?.value)
}

/// Confluent hypergeometric function `1F1(a; c; z)`.
///
/// For negative `z` the defining series alternates destructively, so unless
/// it terminates we evaluate through Kummer's transformation
/// `1F1(a; c; z) = e^z 1F1(c-a; c; -z)`, whose terms share a sign pattern.
pub fn hyp1f1(a: f64, c: f64, z: f64, ctl: &SeriesControl) -> Result<EvalResult> {
    if z < 0.0 && nonpos_int(a).is_none() {
        let inner = hyp_pfq(&[c - a], &[c], -z, ctl)?;
        let scale = z.exp();
        return Ok(EvalResult {
            value: scale * inner.value,
            est_error: scale * inner.est_error,
            ..inner
        });
    }
    hyp_pfq(&[a], &[c], z, ctl)
}
