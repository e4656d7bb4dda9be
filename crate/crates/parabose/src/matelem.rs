//! Closed-form and recurrence-based matrix elements of powers of
//! `X = lambda p + mu q` between Fock states, and of the diagonal
//! exponential elements `<n| e^{iX} |n>`.
//!
//! Two independent closed forms exist for the diagonal even-power elements
//! (routes `j` and `s`), one closed form for the off-diagonal elements, and
//! a dynamic-programming recurrence that serves as their oracle. Odd Fock
//! states reduce to even ones with `a -> a + 1` throughout.

use num_complex::Complex64;

use crate::fock::ParaParam;
use crate::specfun::{
    binomial, factorial, hyp1f1, hyp_pfq, rising_factorial, ConvergenceStatus, EvalResult,
    KahanSum, SeriesControl,
};
use crate::{Error, Result};

/// Highest Fock pair index supported by the exponential-element routes;
/// beyond this `(4j)!` overflows `f64`.
pub const MAX_PAIR_INDEX: u32 = 40;

/// Whether the bra/ket pair is built on `|2n>` or `|2n+1>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    /// Odd-state elements equal even-state elements with `a -> a + 1`.
    fn effective(&self, a: &ParaParam) -> ParaParam {
        match self {
            Parity::Even => *a,
            Parity::Odd => a.shifted(),
        }
    }
}

/// A matrix-element request `<2n+2l (+1)| X^{2k} |2n (+1)>`.
///
/// `l` counts the off-diagonal offset in steps of two Fock levels; the
/// element vanishes whenever `|l| > k`.
#[derive(Debug, Clone, Copy)]
pub struct MatElemQuery {
    pub n: u32,
    pub k: u32,
    pub l: i32,
    pub parity: Parity,
    pub a: ParaParam,
    pub lambda: f64,
    pub mu: f64,
}

impl MatElemQuery {
    /// Diagonal query (`l = 0`) with `lambda^2 + mu^2 = t`.
    pub fn diagonal(n: u32, k: u32, parity: Parity, a: ParaParam, t: f64) -> Self {
        Self {
            n,
            k,
            l: 0,
            parity,
            a,
            lambda: 0.0,
            mu: t.sqrt(),
        }
    }

    pub fn t(&self) -> f64 {
        self.lambda * self.lambda + self.mu * self.mu
    }

    fn alphas(&self) -> (Complex64, Complex64) {
        let s = 2.0f64.sqrt();
        (
            Complex64::new(self.mu, self.lambda) / s,
            Complex64::new(self.mu, -self.lambda) / s,
        )
    }
}

/// Diagonal element `<2n| X^{2k} |2n>` by the double-binomial closed form
/// (route `j`):
///
/// ```text
/// t^k sum_{j, 2j<=k}^{n} (2j)!/j! C(n,j) C(k,2j) (a+n-j)_j (a+2n)_{k-2j}
/// ```
pub fn diag_j(n: u32, k: u32, parity: Parity, a: &ParaParam, t: f64) -> f64 {
    let a = parity.effective(a).a();
    let nf = n as f64;
    let mut acc = KahanSum::new();
    for j in 0..=n.min(k / 2) {
        acc.add(
            factorial(2 * j) / factorial(j)
                * binomial(n, j)
                * binomial(k, 2 * j)
                * rising_factorial(a + nf - j as f64, j)
                * rising_factorial(a + 2.0 * nf, k - 2 * j),
        );
    }
    t.powi(k as i32) * acc.value()
}

/// Diagonal element `<2n| X^{2k} |2n>` by the single-sum closed form
/// (route `s`):
///
/// ```text
/// t^k sum_{j=0}^{min(n,k)} (1/j!) C(n,j) (a+j)_{k-j} (k+1-j)_{2j}
/// ```
pub fn diag_s(n: u32, k: u32, parity: Parity, a: &ParaParam, t: f64) -> f64 {
    let a = parity.effective(a).a();
    let mut acc = KahanSum::new();
    for j in 0..=n.min(k) {
        acc.add(
            binomial(n, j) / factorial(j)
                * rising_factorial(a + j as f64, k - j)
                * rising_factorial((k + 1 - j) as f64, 2 * j),
        );
    }
    t.powi(k as i32) * acc.value()
}

/// Off-diagonal element `<2n+2l| X^{2k} |2n>` (shifted to odd states for
/// [`Parity::Odd`]) by the closed form; zero whenever `|l| > k` or the bra
/// state does not exist.
pub fn offdiag_closed(q: &MatElemQuery) -> Complex64 {
    let a = q.parity.effective(&q.a).a();
    let (ap, am) = q.alphas();
    if q.l >= 0 {
        offdiag_upper(q.n, q.l as u32, q.k, a, ap, am)
    } else {
        // <2n-2l| X^{2k} |2n> is the mirrored form with the roles of the
        // raising and lowering weights exchanged
        offdiag_lower(q.n, (-q.l) as u32, q.k, a, ap, am)
    }
}

fn offdiag_upper(n: u32, l: u32, k: u32, a: f64, ap: Complex64, am: Complex64) -> Complex64 {
    if l > k {
        return Complex64::ZERO;
    }
    let nf = n as f64;
    let lf = l as f64;
    // sqrt((n+1)_l (n+a)_l), both products positive
    let root = rising_factorial(nf + 1.0, l).sqrt() * rising_factorial(nf + a, l).sqrt();
    let mut acc = KahanSum::new();
    for j in 0..=n.min(k - l) {
        let jf = j as f64;
        acc.add(
            rising_factorial(a + lf + jf, k - l - j)
                * rising_factorial(-nf, j)
                * rising_factorial(-(k as f64), l + j)
                * rising_factorial((k + l + 1) as f64, j)
                / (factorial(l + j) * factorial(j)),
        );
    }
    let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
    sign * 2.0f64.powi(k as i32) * root * acc.value() * ap.powu(k + l) * am.powu(k - l)
}

fn offdiag_lower(n: u32, l: u32, k: u32, a: f64, ap: Complex64, am: Complex64) -> Complex64 {
    if l > k || l > n {
        // |l| > k has no surviving path; l > n would reach below the vacuum
        return Complex64::ZERO;
    }
    let nf = n as f64;
    let lf = l as f64;
    let root = rising_factorial(nf - lf + 1.0, l).sqrt() * rising_factorial(nf - lf + a, l).sqrt();
    let mut acc = KahanSum::new();
    for j in 0..=(n - l).min(k - l) {
        let jf = j as f64;
        acc.add(
            rising_factorial(a + lf + jf, k - l - j)
                * rising_factorial(-nf + lf, j)
                * rising_factorial(-(k as f64), l + j)
                * rising_factorial((k + l + 1) as f64, j)
                / (factorial(l + j) * factorial(j)),
        );
    }
    let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
    sign * 2.0f64.powi(k as i32) * root * acc.value() * ap.powu(k - l) * am.powu(k + l)
}

/// The same element evaluated by dynamic programming on the two-step
/// recurrence
///
/// ```text
/// F_{k,l}(n) = 2 a+^2 sqrt((n+a)(n+1)) F_{k-1,l-1}(n+1)
///            + 2 a+ a- (2n+a)         F_{k-1,l}(n)
///            + 2 a-^2 sqrt(n(n+a-1))  F_{k-1,l+1}(n-1)
/// ```
///
/// upward from the boundary data `F_{0,0} = 1`, `F_{0,l!=0} = 0`. Every state
/// reachable from the target satisfies `l + n = const`, so the table is
/// indexed by `l` alone per level. This is the independent oracle for
/// [`offdiag_closed`].
pub fn offdiag_recurrence(q: &MatElemQuery) -> Complex64 {
    if q.l.unsigned_abs() > q.k {
        return Complex64::ZERO;
    }
    let a = q.parity.effective(&q.a).a();
    let (ap, am) = q.alphas();
    let kk = q.k as i64;
    // l + n is invariant along the recurrence
    let s_inv = q.l as i64 + q.n as i64;
    let width = (2 * kk + 1) as usize;
    let idx = |l: i64| (l + kk) as usize;

    let c_up = 2.0 * ap * ap;
    let c_mid = 2.0 * ap * am;
    let c_down = 2.0 * am * am;

    let mut prev = vec![Complex64::ZERO; width];
    if s_inv >= 0 {
        prev[idx(0)] = Complex64::new(1.0, 0.0);
    }
    let mut cur = vec![Complex64::ZERO; width];
    for level in 1..=kk {
        for slot in cur.iter_mut() {
            *slot = Complex64::ZERO;
        }
        for l in -level..=level {
            let n = s_inv - l;
            if n < 0 {
                continue;
            }
            let nf = n as f64;
            let mut val = Complex64::ZERO;
            if (l - 1).abs() < level {
                val += c_up * ((nf + a) * (nf + 1.0)).sqrt() * prev[idx(l - 1)];
            }
            if l.abs() < level {
                val += c_mid * (2.0 * nf + a) * prev[idx(l)];
            }
            if (l + 1).abs() < level && n >= 1 {
                val += c_down * (nf * (nf + a - 1.0)).sqrt() * prev[idx(l + 1)];
            }
            cur[idx(l)] = val;
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[idx(q.l as i64)]
}

fn check_pair_index(n: u32) -> Result<()> {
    if n > MAX_PAIR_INDEX {
        return Err(Error::OutOfSupportedRange(format!(
            "Fock pair index {n} exceeds the supported maximum {MAX_PAIR_INDEX}"
        )));
    }
    Ok(())
}

/// Diagonal exponential element `<2n| e^{iX} |2n>` through the grouped form
///
/// ```text
/// sum_{j=0}^{n} C(n,j) (2j)! (a+n-j)_j / ((4j)! j!) t^{2j}
///               1F1(a+2n; 2j+1/2; -t/4)
/// ```
///
/// with `t = lambda^2 + mu^2`; odd parity shifts `a -> a + 1`.
pub fn exp_diag_a28(
    n: u32,
    parity: Parity,
    a: &ParaParam,
    t: f64,
    ctl: &SeriesControl,
) -> Result<EvalResult> {
    check_pair_index(n)?;
    let a = parity.effective(a).a();
    let nf = n as f64;
    let mut acc = KahanSum::new();
    let mut est = 0.0;
    let mut terms = 0;
    let mut status = ConvergenceStatus::Exact;
    for j in 0..=n {
        let coef = binomial(n, j) * factorial(2 * j) * rising_factorial(a + nf - j as f64, j)
            / (factorial(4 * j) * factorial(j))
            * t.powi(2 * j as i32);
        let f = hyp1f1(a + 2.0 * nf, 2.0 * j as f64 + 0.5, -t / 4.0, ctl)?;
        acc.add(coef * f.value);
        est += coef.abs() * f.est_error;
        terms += f.terms_used;
        status = status.max(f.status);
    }
    Ok(EvalResult {
        value: acc.value(),
        est_error: est,
        terms_used: terms,
        status,
    })
}

/// The same element through the alternating form
///
/// ```text
/// sum_{j=0}^{n} C(n,j) (-1)^j / j! t^j 2F2(a+j, 1+2j; j+1/2, 1+j; -t/4)
/// ```
pub fn exp_diag_a27(
    n: u32,
    parity: Parity,
    a: &ParaParam,
    t: f64,
    ctl: &SeriesControl,
) -> Result<EvalResult> {
    check_pair_index(n)?;
    let a = parity.effective(a).a();
    let mut acc = KahanSum::new();
    let mut est = 0.0;
    let mut terms = 0;
    let mut status = ConvergenceStatus::Exact;
    for j in 0..=n {
        let jf = j as f64;
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let coef = binomial(n, j) * sign / factorial(j) * t.powi(j as i32);
        let f = hyp_pfq(
            &[a + jf, 1.0 + 2.0 * jf],
            &[jf + 0.5, 1.0 + jf],
            -t / 4.0,
            ctl,
        )?;
        acc.add(coef * f.value);
        est += coef.abs() * f.est_error;
        terms += f.terms_used;
        status = status.max(f.status);
    }
    Ok(EvalResult {
        value: acc.value(),
        est_error: est,
        terms_used: terms,
        status,
    })
}

/// Third cross-check route: the exponential series over matrix elements,
/// `sum_k (-1)^k <X^{2k}> / (2k)!`. Entire in `t`, so it converges for every
/// argument and anchors both closed exponential forms.
pub fn exp_diag_series(
    n: u32,
    parity: Parity,
    a: &ParaParam,
    t: f64,
    ctl: &SeriesControl,
) -> Result<EvalResult> {
    check_pair_index(n)?;
    let mut acc = KahanSum::new();
    let mut weight = 1.0f64; // (-1)^k t^k / (2k)!
    let mut streak = 0usize;
    let mut streak_abs = 0.0f64;
    for k in 0..ctl.max_terms {
        let moment = diag_s(n, k as u32, parity, a, 1.0);
        if !moment.is_finite() {
            break;
        }
        let term = weight * moment;
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
        weight *= -t / ((2.0 * kf + 1.0) * (2.0 * kf + 2.0));
    }
    Ok(EvalResult {
        value: acc.value(),
        est_error: streak_abs,
        terms_used: ctl.max_terms,
        status: ConvergenceStatus::NotGuaranteed,
    })
}
