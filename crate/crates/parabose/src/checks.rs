//! Named invariant suites behind the `verify` CLI subcommand.
//!
//! Each check evaluates one mathematical identity or cross-route equality
//! over a fixed grid and reports the maximum observed error against its
//! tolerance. Grids are deterministic (the random draws use a fixed-seed
//! splitmix64), so repeated runs produce identical reports.

use crate::fock::{ParaParam, TruncatedRep};
use crate::matelem::{
    diag_j, diag_s, exp_diag_a27, exp_diag_a28, exp_diag_series, offdiag_closed,
    offdiag_recurrence, MatElemQuery, Parity,
};
use crate::oracle::{energy_moment, integral_appa_check, normalization, wigner_quadrature, QuadSpec};
use crate::specfun::{
    binomial, factorial, hermite, hyp_pfq, hyp_terminating, laguerre, laguerre_gen,
    rising_factorial, ConvergenceStatus, KahanSum, SeriesControl,
};
use crate::wigner::{
    canonical_wn, convergence_guard, w0_polynomial, wavefn, waveeq_residual, wn, Formula,
    PhasePoint, WignerQuery,
};

use std::f64::consts::FRAC_1_PI;

/// Outcome of one named check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub max_err: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Evaluation parameters worth reporting (for quadrature checks: the
    /// half-width and node count used).
    pub params: String,
}

impl CheckResult {
    fn new(name: &str, max_err: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            max_err,
            tolerance,
            pass: max_err.is_finite() && max_err <= tolerance,
            params: String::new(),
        }
    }

    fn with_params(name: &str, max_err: f64, tolerance: f64, params: String) -> Self {
        Self {
            params,
            ..Self::new(name, max_err, tolerance)
        }
    }
}

fn quad_params(spec: &QuadSpec) -> String {
    format!(
        "tensor Gauss-Legendre, half_width={}, nodes_per_axis={} (stability-checked at {})",
        spec.half_width,
        spec.nodes_per_axis,
        2 * spec.nodes_per_axis
    )
}

/// Names of the available suites, in reporting order.
pub const SUITES: [&str; 4] = ["specfun", "matelem", "wigner", "oracle"];

/// Runs one suite by name; `None` for an unknown name.
pub fn run_suite(name: &str) -> Option<Vec<CheckResult>> {
    match name {
        "specfun" => Some(suite_specfun()),
        "matelem" => Some(suite_matelem()),
        "wigner" => Some(suite_wigner()),
        "oracle" => Some(suite_oracle()),
        _ => None,
    }
}

fn rel_err(x: f64, y: f64) -> f64 {
    (x - y).abs() / x.abs().max(y.abs()).max(1.0)
}

/// Deterministic splitmix64 stream mapped to `[0, 1)`.
struct SplitMix64(u64);

impl SplitMix64 {
    fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
}

pub fn suite_specfun() -> Vec<CheckResult> {
    let mut out = Vec::new();
    let ctl = SeriesControl::default();

    let mut err: f64 = 0.0;
    for i in 0..=24 {
        let x = -30.0 + 2.5 * i as f64 + 0.21;
        for k in 0..=60u32 {
            let lhs = rising_factorial(x, k + 1);
            let rhs = rising_factorial(x, k) * (x + k as f64);
            err = err.max(rel_err(lhs, rhs));
        }
    }
    out.push(CheckResult::new("pochhammer_recurrence", err, 1e-12));

    let mut err: f64 = 0.0;
    for k in 0..=20u32 {
        let lhs = factorial(2 * k);
        let rhs = rising_factorial(0.5, k) * factorial(k) * 4.0f64.powi(k as i32);
        err = err.max(rel_err(lhs, rhs));
    }
    out.push(CheckResult::new("factorial_doubling", err, 1e-12));

    let mut rng = SplitMix64(0x5eed_cafe);
    let mut err: f64 = 0.0;
    for _ in 0..200 {
        let n = (rng.uniform() * 11.0) as u32;
        let a = -4.0 + 8.0 * rng.uniform();
        let c = 0.15 + 5.0 * rng.uniform();
        let lhs = hyp_terminating(&[-(n as f64), a], &[c], 1.0).unwrap();
        let rhs = rising_factorial(c - a, n) / rising_factorial(c, n);
        err = err.max(rel_err(lhs, rhs));
    }
    out.push(CheckResult::new("chu_vandermonde_random", err, 1e-10));

    let mut err: f64 = 0.0;
    for ia in 0..8 {
        let a = -0.8 + 0.5 * ia as f64;
        for iz in -10..=10 {
            let z = iz as f64 * 0.05;
            let lhs = hyp_pfq(&[a], &[], z, &ctl).unwrap().value;
            err = err.max(rel_err(lhs, (1.0 - z).powf(-a)));
        }
    }
    out.push(CheckResult::new("binomial_theorem_1f0", err, 1e-10));

    let mut err: f64 = 0.0;
    for ib in -6..=6 {
        for ic in -6..=6 {
            let b = ib as f64 * 0.5 + 0.1;
            let c = ic as f64 * 0.5 + 0.3;
            for iz in -10..=10 {
                let z = iz as f64 * 0.5;
                let lhs = hyp_pfq(&[b], &[c], z, &ctl).unwrap().value;
                let rhs = z.exp() * hyp_pfq(&[c - b], &[c], -z, &ctl).unwrap().value;
                err = err.max(rel_err(lhs, rhs));
            }
        }
    }
    out.push(CheckResult::new("kummer_transform", err, 1e-10));

    // 2F2(a, c+j; b, c; z) = e^z sum_k C(j,k) z^k/(c)_k 2F2(b-a, c+j; b, c+k; -z)
    let mut err: f64 = 0.0;
    for j in 0..=4u32 {
        for &(a, b, c) in &[(0.7, 1.4, 0.9), (1.3, 0.6, 2.2), (2.1, 3.0, 1.1)] {
            for iz in -6..=6 {
                let z = iz as f64 * 0.5;
                let lhs = hyp_pfq(&[a, c + j as f64], &[b, c], z, &ctl).unwrap().value;
                let mut rhs = KahanSum::new();
                for k in 0..=j {
                    rhs.add(
                        binomial(j, k) * z.powi(k as i32) / rising_factorial(c, k)
                            * hyp_pfq(&[b - a, c + j as f64], &[b, c + k as f64], -z, &ctl)
                                .unwrap()
                                .value,
                    );
                }
                err = err.max(rel_err(lhs, z.exp() * rhs.value()));
            }
        }
    }
    out.push(CheckResult::new("paris_2f2_transform", err, 1e-10));

    let mut err: f64 = 0.0;
    for k in 0..=8u32 {
        for &(x, y) in &[(0.3, -0.8), (1.1, 0.4), (0.0, 2.0), (-1.5, 1.5)] {
            let mut lhs = KahanSum::new();
            for j in 0..=k {
                lhs.add(binomial(k, j) * hermite(2 * j, x) * hermite(2 * k - 2 * j, y));
            }
            let rhs = (-1.0f64).powi(k as i32)
                * factorial(k)
                * 4.0f64.powi(k as i32)
                * laguerre(k, x * x + y * y);
            err = err.max(rel_err(lhs.value(), rhs));
        }
    }
    out.push(CheckResult::new("hermite_summation", err, 1e-10));

    let mut err: f64 = 0.0;
    for n in 0..=6u32 {
        for r in 0..=6u32 {
            for &alpha in &[0.0, 1.0, 2.5] {
                for &z in &[0.3, 1.0, 4.2] {
                    let mut lhs = KahanSum::new();
                    for k in 0..=n {
                        lhs.add(
                            (-1.0f64).powi(k as i32)
                                * binomial(n, k)
                                * laguerre_gen(r + k, alpha, z),
                        );
                    }
                    let rhs =
                        (-1.0f64).powi(n as i32) * laguerre_gen(r + n, alpha - n as f64, z);
                    err = err.max(rel_err(lhs.value(), rhs));
                }
            }
        }
    }
    out.push(CheckResult::new("laguerre_alternating_sum", err, 1e-10));

    let mut excess: f64 = 0.0;
    for k in 0..=50u32 {
        for i in 0..=50 {
            let t = 0.5 * i as f64;
            excess = excess.max(laguerre(k, t).abs() - (t / 2.0).exp());
        }
    }
    out.push(CheckResult::new("laguerre_upper_bound", excess.max(0.0), 1e-9));

    let mut err: f64 = 0.0;
    for n in 0..=8u32 {
        for &alpha in &[0.0, 0.5, 2.75] {
            for &z in &[0.0, 0.4, 1.0, 3.0] {
                let direct = laguerre_gen(n, alpha, z);
                let viaf = rising_factorial(alpha + 1.0, n) / factorial(n)
                    * hyp_terminating(&[-(n as f64)], &[alpha + 1.0], z).unwrap();
                err = err.max(rel_err(direct, viaf));
            }
        }
    }
    out.push(CheckResult::new("laguerre_vs_hypergeometric", err, 1e-12));

    out
}

pub fn suite_matelem() -> Vec<CheckResult> {
    let mut out = Vec::new();
    let ctl = SeriesControl::default();
    let params: Vec<ParaParam> = [0.3, 0.5, 1.5, 2.5, std::f64::consts::FRAC_PI_2]
        .iter()
        .map(|&a| ParaParam::new(a).unwrap())
        .collect();

    let mut err: f64 = 0.0;
    for a in &params {
        for n in 0..=12u32 {
            for k in 0..=12u32 {
                for &t in &[0.25, 1.0, 4.0] {
                    for parity in [Parity::Even, Parity::Odd] {
                        err = err.max(rel_err(
                            diag_j(n, k, parity, a, t),
                            diag_s(n, k, parity, a, t),
                        ));
                    }
                }
            }
        }
    }
    out.push(CheckResult::new("diag_J_equals_diag_S", err, 1e-10));

    let mut err: f64 = 0.0;
    for &av in &[0.3, 0.7, 1.5, 2.5] {
        let a = ParaParam::new(av).unwrap();
        let rep = TruncatedRep::new(a, 28).unwrap();
        for n in 0..=6u32 {
            for k in 0..=6u32 {
                for (parity, base) in [(Parity::Even, 0usize), (Parity::Odd, 1usize)] {
                    let state = 2 * n as usize + base;
                    let brute = rep
                        .x_power_element(0.6, 0.8, 2 * k, state, state)
                        .unwrap()
                        .re;
                    err = err.max(rel_err(diag_j(n, k, parity, &a, 1.0), brute));
                    err = err.max(rel_err(diag_s(n, k, parity, &a, 1.0), brute));
                }
            }
        }
    }
    out.push(CheckResult::new("closed_forms_vs_fock_oracle", err, 1e-10));

    let mut err: f64 = 0.0;
    for &av in &[0.7, 1.5, 2.5] {
        let a = ParaParam::new(av).unwrap();
        for n in 0..=6u32 {
            for k in 0..=6u32 {
                for l in -(k as i32)..=k as i32 {
                    let q = MatElemQuery {
                        n,
                        k,
                        l,
                        parity: Parity::Even,
                        a,
                        lambda: 0.6,
                        mu: 1.1,
                    };
                    let closed = offdiag_closed(&q);
                    let rec = offdiag_recurrence(&q);
                    let scale = closed.norm().max(rec.norm()).max(1.0);
                    err = err.max((closed - rec).norm() / scale);
                }
            }
        }
    }
    out.push(CheckResult::new("offdiag_closed_vs_recurrence", err, 1e-10));

    let mut err: f64 = 0.0;
    let a = ParaParam::new(1.3).unwrap();
    for n in 0..=4u32 {
        for k in 0..=6u32 {
            let q_odd = MatElemQuery {
                n,
                k,
                l: 1,
                parity: Parity::Odd,
                a,
                lambda: 0.4,
                mu: -0.9,
            };
            let q_even = MatElemQuery {
                parity: Parity::Even,
                a: a.shifted(),
                ..q_odd
            };
            err = err.max((offdiag_closed(&q_odd) - offdiag_closed(&q_even)).norm());
        }
    }
    out.push(CheckResult::new("odd_parity_shift", err, 0.0));

    let mut err: f64 = 0.0;
    for &av in &[0.7, 1.5, 2.5] {
        let a = ParaParam::new(av).unwrap();
        for n in 0..=2u32 {
            for parity in [Parity::Even, Parity::Odd] {
                for &t in &[0.0, 0.5, 2.0, 8.0] {
                    let grouped = exp_diag_a28(n, parity, &a, t, &ctl).unwrap().value;
                    let alternating = exp_diag_a27(n, parity, &a, t, &ctl).unwrap().value;
                    let series = exp_diag_series(n, parity, &a, t, &ctl).unwrap().value;
                    err = err.max(rel_err(grouped, alternating));
                    err = err.max(rel_err(grouped, series));
                }
            }
        }
    }
    out.push(CheckResult::new("exp_diag_route_agreement", err, 1e-10));

    out
}

pub fn suite_wigner() -> Vec<CheckResult> {
    let mut out = Vec::new();

    let mut err: f64 = 0.0;
    let canonical_a = ParaParam::half_integer(0);
    for n in 0..=10u32 {
        for i in 0..=32 {
            let r2 = 16.0 * i as f64 / 32.0;
            let point = PhasePoint::from_r2(r2);
            let w = wn(&WignerQuery::new(n, canonical_a, point)).unwrap().value;
            err = err.max((w - canonical_wn(n, &point)).abs());
        }
    }
    out.push(CheckResult::new("canonical_reduction", err, 1e-9));

    let mut err: f64 = 0.0;
    for n in 0..=8u32 {
        for m in 0..=4u32 {
            let a = ParaParam::half_integer(m);
            for &r2 in &[0.0, 0.5, 1.0, 4.0, 9.0, 16.0] {
                let point = PhasePoint::from_r2(r2);
                let mut q = WignerQuery::new(n, a, point);
                q.formula = Formula::A29;
                let v29 = wn(&q).unwrap().value;
                q.formula = Formula::A31;
                let v31 = wn(&q).unwrap().value;
                err = err.max((v29 - v31).abs() / v29.abs().max(FRAC_1_PI * (-r2).exp()));
            }
        }
    }
    out.push(CheckResult::new("route_equivalence_a29_a31", err, 1e-9));

    let mut err: f64 = 0.0;
    for m in 0..=4u32 {
        let a = ParaParam::half_integer(m);
        for i in 0..=20 {
            let point = PhasePoint::from_r2(0.8 * i as f64);
            let series = wn(&WignerQuery::new(0, a, point)).unwrap().value;
            let poly = w0_polynomial(m, &point).value;
            err = err.max(rel_err(series, poly));
        }
    }
    out.push(CheckResult::new("w0_polynomial_consistency", err, 1e-12));

    let mut err: f64 = 0.0;
    let a32 = ParaParam::half_integer(1);
    for i in 0..=64 {
        let point = PhasePoint::from_r2(16.0 * i as f64 / 64.0);
        let w = wn(&WignerQuery::new(0, a32, point)).unwrap().value;
        err = err.max((w - canonical_wn(1, &point)).abs());
    }
    out.push(CheckResult::new("ground_state_coincidence_a32", err, 1e-12));

    let mut err: f64 = 0.0;
    for nu in 0..=3u32 {
        for &av in &[0.8, 1.5, 2.3] {
            let a = ParaParam::new(av).unwrap();
            for &r2 in &[0.0, 1.0, 4.0] {
                let point = PhasePoint::from_r2(r2);
                let mut odd = WignerQuery::new(2 * nu + 1, a, point);
                odd.allow_unguaranteed = true;
                let mut even = WignerQuery::new(2 * nu, a.shifted(), point);
                even.allow_unguaranteed = true;
                let diff = (wn(&odd).unwrap().value - wn(&even).unwrap().value).abs();
                err = err.max(diff);
            }
        }
    }
    out.push(CheckResult::new("odd_state_shift_structural", err, 0.0));

    let mut err: f64 = 0.0;
    let a = ParaParam::half_integer(2);
    for &(p, q) in &[(0.3, -1.2), (2.0, 0.7), (1.1, 1.1)] {
        for n in 0..=4u32 {
            let w1 = wn(&WignerQuery::new(n, a, PhasePoint::new(p, q))).unwrap().value;
            let w2 = wn(&WignerQuery::new(n, a, PhasePoint::from_r2(p * p + q * q)))
                .unwrap()
                .value;
            err = err.max((w1 - w2).abs());
        }
    }
    out.push(CheckResult::new("radial_invariance", err, 0.0));

    let guard_ok = convergence_guard(2, &ParaParam::new(0.8).unwrap())
        == ConvergenceStatus::NotGuaranteed
        && convergence_guard(3, &ParaParam::new(0.8).unwrap()) == ConvergenceStatus::Converged
        && convergence_guard(0, &ParaParam::half_integer(1)) == ConvergenceStatus::Exact
        && convergence_guard(6, &ParaParam::new(1.2).unwrap()) == ConvergenceStatus::Converged;
    out.push(CheckResult::new(
        "convergence_guard_classification",
        if guard_ok { 0.0 } else { 1.0 },
        0.0,
    ));

    let mut err: f64 = 0.0;
    for &av in &[0.7, 1.5, 2.5] {
        let a = ParaParam::new(av).unwrap();
        for m in 0..=6u32 {
            for n in m..=6u32 {
                let overlap = wave_overlap(m, n, &a);
                let expect = if m == n { 1.0 } else { 0.0 };
                err = err.max((overlap - expect).abs());
            }
        }
    }
    out.push(CheckResult::new("wavefn_orthonormality", err, 1e-8));

    let mut err: f64 = 0.0;
    for n in 0..=4u32 {
        for &av in &[0.7, 1.5, 2.5] {
            let a = ParaParam::new(av).unwrap();
            for &q in &[0.5, 1.0, 1.7, 2.3, -0.8] {
                err = err.max(waveeq_residual(n, &a, q).unwrap().abs());
            }
        }
    }
    out.push(CheckResult::new("wave_equation_residual", err, 1e-6));

    out
}

/// `integral psi_m psi_n dq` by Gauss-Legendre after the substitution
/// `q = u^5`, which smooths the `|q|^{a-1/2}` kink at the origin for the
/// tenth-of-integer `a` grid used here. Mixed parities vanish by symmetry.
pub fn wave_overlap(m: u32, n: u32, a: &ParaParam) -> f64 {
    if (m + n) % 2 == 1 {
        return 0.0;
    }
    let (xs, ws) = crate::oracle::gauss_legendre(400);
    // q in [0, 12] covers the Gaussian tail; u = q^{1/5}
    let u_max = 12.0f64.powf(0.2);
    let half = u_max / 2.0;
    let mut acc = KahanSum::new();
    for (x, w) in xs.iter().zip(&ws) {
        let u = half * (x + 1.0);
        let q = u.powi(5);
        let jac = 5.0 * u.powi(4);
        acc.add(w * half * jac * wavefn(m, a, q).value * wavefn(n, a, q).value);
    }
    2.0 * acc.value()
}

pub fn suite_oracle() -> Vec<CheckResult> {
    let mut out = Vec::new();
    let spec = QuadSpec::new(12.0, 200).unwrap();

    for k in 0..=3u32 {
        let mut err: f64 = 0.0;
        for &(p, q) in &[(0.0, 0.0), (0.5, 0.0), (1.0, -1.0), (2.0, 1.0)] {
            let (_, _, diff) = integral_appa_check(k, p, q, &spec).unwrap();
            err = err.max(diff);
        }
        out.push(CheckResult::with_params(
            &format!("appendixA_integral_k{k}"),
            err,
            1e-8,
            quad_params(&spec),
        ));
    }

    let mut err: f64 = 0.0;
    for n in 0..=3u32 {
        for m in 0..=2u32 {
            let a = ParaParam::half_integer(m);
            for &r2 in &[0.0, 1.0, 4.0] {
                let point = PhasePoint::from_r2(r2);
                let quad = wigner_quadrature(n, &a, &point, &spec).unwrap();
                let closed = wn(&WignerQuery::new(n, a, point)).unwrap().value;
                err = err.max((quad - closed).abs());
            }
        }
    }
    out.push(CheckResult::with_params(
        "defining_integral_roundtrip",
        err,
        1e-7,
        quad_params(&spec),
    ));

    let spec = QuadSpec::new(9.0, 150).unwrap();
    let mut nerr: f64 = 0.0;
    let mut eerr: f64 = 0.0;
    for n in 0..=4u32 {
        for m in 0..=2u32 {
            let a = ParaParam::half_integer(m);
            nerr = nerr.max((normalization(n, &a, &spec).unwrap() - 1.0).abs());
            eerr = eerr.max((energy_moment(n, &a, &spec).unwrap() - (n as f64 + a.a())).abs());
        }
    }
    out.push(CheckResult::with_params(
        "normalization_unit",
        nerr,
        1e-8,
        quad_params(&spec),
    ));
    out.push(CheckResult::with_params(
        "energy_moment_levels",
        eerr,
        1e-7,
        quad_params(&spec),
    ));

    out
}
