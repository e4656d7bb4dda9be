//! Python extension module exposing the main types and operations of the
//! `parabose` crate: Wigner functions, wave functions, matrix elements,
//! special-function kernels and the verification suites.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use parabose::checks;
use parabose::matelem;
use parabose::oracle;
use parabose::specfun;
use parabose::wigner;
use parabose::{Error, SeriesControl};

fn to_py_err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_parity(s: &str) -> PyResult<matelem::Parity> {
    match s {
        "even" => Ok(matelem::Parity::Even),
        "odd" => Ok(matelem::Parity::Odd),
        other => Err(PyValueError::new_err(format!(
            "unknown parity '{other}' (expected 'even' or 'odd')"
        ))),
    }
}

/// Representation parameter a > 0; recognizes the exact half-integer form
/// a = 1/2 + m.
#[pyclass(name = "ParaParam", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyParaParam {
    inner: parabose::ParaParam,
}

#[pymethods]
impl PyParaParam {
    #[new]
    fn new(a: f64) -> PyResult<Self> {
        Ok(Self {
            inner: parabose::ParaParam::new(a).map_err(to_py_err)?,
        })
    }

    /// Exact half-integer construction a = 1/2 + m.
    #[staticmethod]
    fn half_integer(m: u32) -> Self {
        Self {
            inner: parabose::ParaParam::half_integer(m),
        }
    }

    #[getter]
    fn a(&self) -> f64 {
        self.inner.a()
    }

    #[getter]
    fn half_integer_m(&self) -> Option<u32> {
        self.inner.half_integer_m()
    }

    /// The shifted parameter a + 1 (odd states reduce to even ones with it).
    fn shifted(&self) -> Self {
        Self {
            inner: self.inner.shifted(),
        }
    }

    fn __repr__(&self) -> String {
        format!("ParaParam({})", self.inner)
    }
}

/// Value of a series evaluation with convergence diagnostics.
#[pyclass(name = "EvalResult", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyEvalResult {
    #[pyo3(get)]
    value: f64,
    #[pyo3(get)]
    est_error: f64,
    #[pyo3(get)]
    terms_used: usize,
    #[pyo3(get)]
    status: String,
}

impl From<specfun::EvalResult> for PyEvalResult {
    fn from(r: specfun::EvalResult) -> Self {
        Self {
            value: r.value,
            est_error: r.est_error,
            terms_used: r.terms_used,
            status: r.status.as_str().to_string(),
        }
    }
}

#[pymethods]
impl PyEvalResult {
    fn __repr__(&self) -> String {
        format!(
            "EvalResult(value={}, est_error={}, terms_used={}, status='{}')",
            self.value, self.est_error, self.terms_used, self.status
        )
    }
}

fn control(rel_tol: f64, small_streak: usize, max_terms: usize) -> PyResult<SeriesControl> {
    SeriesControl::new(rel_tol, small_streak, max_terms).map_err(to_py_err)
}

/// Wigner function W_n(p, q) of the state |n>.
#[pyfunction]
#[pyo3(signature = (n, a, p, q, formula="a29", allow_unguaranteed=false,
                    rel_tol=1e-12, small_streak=20, max_terms=100_000))]
#[allow(clippy::too_many_arguments)]
fn wn(
    n: u32,
    a: &PyParaParam,
    p: f64,
    q: f64,
    formula: &str,
    allow_unguaranteed: bool,
    rel_tol: f64,
    small_streak: usize,
    max_terms: usize,
) -> PyResult<PyEvalResult> {
    let query = wigner::WignerQuery {
        n,
        a: a.inner,
        point: wigner::PhasePoint::new(p, q),
        formula: formula.parse().map_err(to_py_err)?,
        ctl: control(rel_tol, small_streak, max_terms)?,
        allow_unguaranteed,
    };
    Ok(wigner::wn(&query).map_err(to_py_err)?.into())
}

/// Canonical (a = 1/2) Wigner function.
#[pyfunction]
fn canonical_wn(n: u32, p: f64, q: f64) -> f64 {
    wigner::canonical_wn(n, &wigner::PhasePoint::new(p, q))
}

/// Collapsed ground-state form for a = 1/2 + m.
#[pyfunction]
fn w0_polynomial(m: u32, p: f64, q: f64) -> PyEvalResult {
    wigner::w0_polynomial(m, &wigner::PhasePoint::new(p, q)).into()
}

/// Convergence classification of the W_n series: 'Exact', 'Converged' or
/// 'NotGuaranteed'.
#[pyfunction]
fn convergence_guard(n: u32, a: &PyParaParam) -> String {
    wigner::convergence_guard(n, &a.inner).as_str().to_string()
}

/// Wave function value; returns (value, diverged).
#[pyfunction]
fn wavefn(n: u32, a: &PyParaParam, q: f64) -> (f64, bool) {
    let v = wigner::wavefn(n, &a.inner, q);
    (v.value, v.diverged)
}

/// Residual of the singular-oscillator wave equation at q != 0.
#[pyfunction]
fn waveeq_residual(n: u32, a: &PyParaParam, q: f64) -> PyResult<f64> {
    wigner::waveeq_residual(n, &a.inner, q).map_err(to_py_err)
}

/// Diagonal matrix element <2n|X^{2k}|2n> (or odd states) by route 'j', 's'
/// or 'recurrence'.
#[pyfunction]
#[pyo3(signature = (n, k, a, t, parity="even", route="s"))]
fn matelem_diag(n: u32, k: u32, a: &PyParaParam, t: f64, parity: &str, route: &str) -> PyResult<f64> {
    let parity = parse_parity(parity)?;
    match route {
        "j" => Ok(matelem::diag_j(n, k, parity, &a.inner, t)),
        "s" => Ok(matelem::diag_s(n, k, parity, &a.inner, t)),
        "recurrence" => Ok(matelem::offdiag_recurrence(&matelem::MatElemQuery::diagonal(
            n, k, parity, a.inner, t,
        ))
        .re),
        other => Err(PyValueError::new_err(format!(
            "unknown route '{other}' (expected 'j', 's' or 'recurrence')"
        ))),
    }
}

/// Off-diagonal matrix element <2n+2l|X^{2k}|2n> by the closed form or the
/// recurrence oracle.
#[pyfunction]
#[pyo3(signature = (n, k, l, a, lam, mu, parity="even", route="closed"))]
#[allow(clippy::too_many_arguments)]
fn matelem_offdiag(
    n: u32,
    k: u32,
    l: i32,
    a: &PyParaParam,
    lam: f64,
    mu: f64,
    parity: &str,
    route: &str,
) -> PyResult<Complex64> {
    let query = matelem::MatElemQuery {
        n,
        k,
        l,
        parity: parse_parity(parity)?,
        a: a.inner,
        lambda: lam,
        mu,
    };
    match route {
        "closed" => Ok(matelem::offdiag_closed(&query)),
        "recurrence" => Ok(matelem::offdiag_recurrence(&query)),
        other => Err(PyValueError::new_err(format!(
            "unknown route '{other}' (expected 'closed' or 'recurrence')"
        ))),
    }
}

/// Diagonal exponential element <n|e^{iX}|n> with t = lambda^2 + mu^2, by
/// route 'a28', 'a27' or 'series'.
#[pyfunction]
#[pyo3(signature = (n, a, t, parity="even", route="a28"))]
fn exp_diag(n: u32, a: &PyParaParam, t: f64, parity: &str, route: &str) -> PyResult<PyEvalResult> {
    let parity = parse_parity(parity)?;
    let ctl = SeriesControl::default();
    let r = match route {
        "a28" => matelem::exp_diag_a28(n, parity, &a.inner, t, &ctl),
        "a27" => matelem::exp_diag_a27(n, parity, &a.inner, t, &ctl),
        "series" => matelem::exp_diag_series(n, parity, &a.inner, t, &ctl),
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown route '{other}' (expected 'a28', 'a27' or 'series')"
            )))
        }
    };
    Ok(r.map_err(to_py_err)?.into())
}

/// Defining-integral quadrature oracle for half-integer a.
#[pyfunction]
#[pyo3(signature = (n, a, p, q, half_width=12.0, nodes_per_axis=200))]
fn wigner_quadrature(
    n: u32,
    a: &PyParaParam,
    p: f64,
    q: f64,
    half_width: f64,
    nodes_per_axis: usize,
) -> PyResult<f64> {
    let spec = oracle::QuadSpec::new(half_width, nodes_per_axis).map_err(to_py_err)?;
    oracle::wigner_quadrature(n, &a.inner, &wigner::PhasePoint::new(p, q), &spec)
        .map_err(to_py_err)
}

/// Rising factorial (x)_k.
#[pyfunction]
fn rising_factorial(x: f64, k: u32) -> f64 {
    specfun::rising_factorial(x, k)
}

/// Generalized Laguerre polynomial (extended definition, any alpha).
#[pyfunction]
fn laguerre(n: u32, alpha: f64, z: f64) -> f64 {
    specfun::laguerre_gen(n, alpha, z)
}

/// Physicists' Hermite polynomial.
#[pyfunction]
fn hermite(n: u32, x: f64) -> f64 {
    specfun::hermite(n, x)
}

/// Confluent hypergeometric function 1F1(a; c; z).
#[pyfunction]
#[pyo3(signature = (a, c, z, rel_tol=1e-12, small_streak=20, max_terms=100_000))]
fn hyp1f1(
    a: f64,
    c: f64,
    z: f64,
    rel_tol: f64,
    small_streak: usize,
    max_terms: usize,
) -> PyResult<PyEvalResult> {
    let ctl = control(rel_tol, small_streak, max_terms)?;
    Ok(specfun::hyp1f1(a, c, z, &ctl).map_err(to_py_err)?.into())
}

/// Runs a named invariant suite ('specfun', 'matelem', 'wigner' or
/// 'oracle'); returns a list of (name, max_err, tolerance, pass) tuples.
#[pyfunction]
fn run_checks(suite: &str) -> PyResult<Vec<(String, f64, f64, bool)>> {
    checks::run_suite(suite)
        .map(|rs| {
            rs.into_iter()
                .map(|c| (c.name, c.max_err, c.tolerance, c.pass))
                .collect()
        })
        .ok_or_else(|| {
            PyValueError::new_err(format!(
                "unknown suite '{suite}' (expected one of {:?})",
                checks::SUITES
            ))
        })
}

#[pymodule]
fn parabose_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyParaParam>()?;
    m.add_class::<PyEvalResult>()?;
    m.add_function(wrap_pyfunction!(wn, m)?)?;
    m.add_function(wrap_pyfunction!(canonical_wn, m)?)?;
    m.add_function(wrap_pyfunction!(w0_polynomial, m)?)?;
    m.add_function(wrap_pyfunction!(convergence_guard, m)?)?;
    m.add_function(wrap_pyfunction!(wavefn, m)?)?;
    m.add_function(wrap_pyfunction!(waveeq_residual, m)?)?;
    m.add_function(wrap_pyfunction!(matelem_diag, m)?)?;
    m.add_function(wrap_pyfunction!(matelem_offdiag, m)?)?;
    m.add_function(wrap_pyfunction!(exp_diag, m)?)?;
    m.add_function(wrap_pyfunction!(wigner_quadrature, m)?)?;
    m.add_function(wrap_pyfunction!(rising_factorial, m)?)?;
    m.add_function(wrap_pyfunction!(laguerre, m)?)?;
    m.add_function(wrap_pyfunction!(hermite, m)?)?;
    m.add_function(wrap_pyfunction!(hyp1f1, m)?)?;
    m.add_function(wrap_pyfunction!(run_checks, m)?)?;
    Ok(())
}
