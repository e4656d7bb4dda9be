//! Independent numerical verification by two-dimensional quadrature:
//! the Gaussian-moment integral behind the Laguerre expansions, the defining
//! integral of `W_n`, and normalization/energy moments.
//!
//! Quadrature is restricted to half-integer `a`, where the exponential
//! matrix elements are polynomial times `e^{-t/4}` and a truncated square is
//! a controlled domain. Node evaluations are parallelized per grid row with
//! a deterministic pairwise reduction, so results do not depend on the
//! worker count.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::fock::ParaParam;
use crate::matelem::{exp_diag_a28, Parity};
use crate::specfun::{factorial, laguerre, SeriesControl};
use crate::wigner::{wn, Formula, PhasePoint, WignerQuery};
use crate::{Error, Result};

use std::f64::consts::FRAC_1_PI;

/// Tensor-product Gauss-Legendre rule over the square `[-H, H]^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadSpec {
    pub half_width: f64,
    pub nodes_per_axis: usize,
}

impl Default for QuadSpec {
    fn default() -> Self {
        Self {
            half_width: 12.0,
            nodes_per_axis: 400,
        }
    }
}

impl QuadSpec {
    pub fn new(half_width: f64, nodes_per_axis: usize) -> Result<Self> {
        if half_width.is_nan() || half_width <= 0.0 || nodes_per_axis < 2 {
            return Err(Error::InvalidParameters(
                "quadrature needs a positive half-width and at least 2 nodes per axis".into(),
            ));
        }
        Ok(Self {
            half_width,
            nodes_per_axis,
        })
    }

    /// Half-width large enough that the envelope `e^{-r^2/4} r^{2k}` on the
    /// boundary of the square (nearest point `r = H`) is below `1e-14` of
    /// its peak `e^{-k} (4k)^k`, never smaller than the configured width.
    fn effective_half_width(&self, poly_half_degree: u32) -> f64 {
        let k = poly_half_degree as f64;
        let log_peak = if poly_half_degree == 0 {
            0.0
        } else {
            -k + k * (4.0 * k).ln()
        };
        let mut h = self.half_width;
        while -h * h / 4.0 + 2.0 * k * h.ln() > log_peak + 1e-14f64.ln() {
            h += 0.5;
        }
        h
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Chebyshev-type initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // evaluate P_n and P_n' at x
            let mut p0 = 1.0;
            let mut p1 = x;
            for j in 2..=n {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn pairwise_sum(v: &[Complex64]) -> Complex64 {
    match v.len() {
        0 => Complex64::ZERO,
        1 => v[0],
        n => pairwise_sum(&v[..n / 2]) + pairwise_sum(&v[n / 2..]),
    }
}

/// `integral of f over [-H, H]^2` by the tensor rule; rows are evaluated in
/// parallel, each row reduced serially and the rows combined pairwise in
/// index order.
fn tensor_integral<F>(f: &F, half_width: f64, nodes: usize) -> Complex64
where
    F: Fn(f64, f64) -> Complex64 + Sync,
{
    let (xs, ws) = gauss_legendre(nodes);
    let rows: Vec<Complex64> = (0..nodes)
        .into_par_iter()
        .map(|i| {
            let x = xs[i] * half_width;
            let mut acc = Complex64::ZERO;
            for j in 0..nodes {
                acc += ws[j] * f(x, xs[j] * half_width);
            }
            ws[i] * acc
        })
        .collect();
    pairwise_sum(&rows) * half_width * half_width
}

/// Runs the integral at the configured resolution and at doubled nodes;
/// errors out if the two disagree by more than `1e-8`, otherwise returns the
/// finer value.
fn stable_integral<F>(f: &F, half_width: f64, spec: &QuadSpec, what: &str) -> Result<Complex64>
where
    F: Fn(f64, f64) -> Complex64 + Sync,
{
    let coarse = tensor_integral(f, half_width, spec.nodes_per_axis);
    let fine = tensor_integral(f, half_width, 2 * spec.nodes_per_axis);
    if (fine - coarse).norm() > 1e-8 {
        return Err(Error::QuadratureDidNotConverge(format!(
            "{what}: refinement changed the value by {:.3e}",
            (fine - coarse).norm()
        )));
    }
    Ok(fine)
}

fn real_part_checked(z: Complex64, what: &str) -> Result<f64> {
    if z.im.abs() >= 1e-9 {
        return Err(Error::QuadratureDidNotConverge(format!(
            "{what}: imaginary part {:.3e} exceeds 1e-9",
            z.im
        )));
    }
    Ok(z.re)
}

/// Checks the Gaussian-moment identity
///
/// ```text
/// (1/4pi^2) int e^{-(l^2+m^2)/4} e^{-i(l p + m q)} (l^2+m^2)^k dl dm
///   = (1/pi) e^{-p^2-q^2} k! 4^k L_k(p^2+q^2)
/// ```
///
/// Returns `(lhs, rhs, |lhs - rhs|)` with the left side by quadrature.
pub fn integral_appa_check(k: u32, p: f64, q: f64, spec: &QuadSpec) -> Result<(f64, f64, f64)> {
    if k > 8 {
        return Err(Error::OutOfSupportedRange(
            "moment order k must be at most 8".into(),
        ));
    }
    let h = spec.effective_half_width(k);
    let norm = 1.0 / (4.0 * std::f64::consts::PI * std::f64::consts::PI);
    let f = |lam: f64, mu: f64| -> Complex64 {
        let t = lam * lam + mu * mu;
        let phase = Complex64::new(0.0, -(lam * p + mu * q)).exp();
        norm * (-t / 4.0).exp() * t.powi(k as i32) * phase
    };
    let lhs = real_part_checked(
        stable_integral(&f, h, spec, "moment integral")?,
        "moment integral",
    )?;
    let r2 = p * p + q * q;
    let rhs = FRAC_1_PI * (-r2).exp() * factorial(k) * 4.0f64.powi(k as i32) * laguerre(k, r2);
    Ok((lhs, rhs, (lhs - rhs).abs()))
}

fn require_half_integer(a: &ParaParam) -> Result<u32> {
    a.half_integer_m().ok_or_else(|| {
        Error::InvalidParameters(
            "quadrature oracles require the half-integer form a = 1/2 + m".into(),
        )
    })
}

/// Evaluates the defining integral
///
/// ```text
/// W_n(p,q) = (1/4pi^2) int <n| e^{iX} |n> e^{-i(l p + m q)} dl dm
/// ```
///
/// by quadrature, with the diagonal exponential element supplied by the
/// grouped closed form from [`crate::matelem`].
pub fn wigner_quadrature(n: u32, a: &ParaParam, point: &PhasePoint, spec: &QuadSpec) -> Result<f64> {
    let m = require_half_integer(a)?;
    if n > 8 {
        return Err(Error::OutOfSupportedRange(
            "quadrature oracle supports n <= 8".into(),
        ));
    }
    let (pair, parity) = if n % 2 == 0 {
        (n / 2, Parity::Even)
    } else {
        ((n - 1) / 2, Parity::Odd)
    };
    let ctl = SeriesControl::default();
    // the Kummer-transformed element is a polynomial of degree m + n in t
    let h = spec.effective_half_width(m + n);
    let (p, q) = (point.p(), point.q());
    let norm = 1.0 / (4.0 * std::f64::consts::PI * std::f64::consts::PI);
    let f = |lam: f64, mu: f64| -> Complex64 {
        let t = lam * lam + mu * mu;
        let element = exp_diag_a28(pair, parity, a, t, &ctl)
            .expect("parameters validated before quadrature")
            .value;
        let phase = Complex64::new(0.0, -(lam * p + mu * q)).exp();
        norm * element * phase
    };
    real_part_checked(
        stable_integral(&f, h, spec, "defining integral")?,
        "defining integral",
    )
}

fn closed_form_w(n: u32, a: &ParaParam, p: f64, q: f64) -> f64 {
    wn(&WignerQuery {
        n,
        a: *a,
        point: PhasePoint::new(p, q),
        formula: Formula::A29,
        ctl: SeriesControl::default(),
        allow_unguaranteed: false,
    })
    .expect("half-integer a evaluates exactly")
    .value
}

/// `integral of W_n dp dq` over the closed form; the expected value is 1.
pub fn normalization(n: u32, a: &ParaParam, spec: &QuadSpec) -> Result<f64> {
    require_half_integer(a)?;
    let f = |p: f64, q: f64| Complex64::new(closed_form_w(n, a, p, q), 0.0);
    real_part_checked(
        stable_integral(&f, spec.half_width, spec, "normalization")?,
        "normalization",
    )
}

/// `integral of ((p^2+q^2)/2) W_n dp dq`; the Hamiltonian is its own symbol
/// under the exponential correspondence rule, so the expected value is the
/// energy level `n + a`.
pub fn energy_moment(n: u32, a: &ParaParam, spec: &QuadSpec) -> Result<f64> {
    require_half_integer(a)?;
    let f = |p: f64, q: f64| {
        Complex64::new((p * p + q * q) / 2.0 * closed_form_w(n, a, p, q), 0.0)
    };
    real_part_checked(
        stable_integral(&f, spec.half_width, spec, "energy moment")?,
        "energy moment",
    )
}
