//! Truncated matrix realization of the parabose operators on the Fock basis
//! `|0> ... |N-1>`.
//!
//! The ladder actions are
//!
//! ```text
//! b+ |2n>   = sqrt(2(n+a)) |2n+1>      b- |2n>   = sqrt(2n)     |2n-1>
//! b+ |2n+1> = sqrt(2(n+1)) |2n+2>      b- |2n+1> = sqrt(2(n+a)) |2n>
//! ```
//!
//! Since `X = a+ b+ + a- b-` moves the occupation number by exactly one per
//! application, any matrix element of `X^power` is *exact* (to rounding) as
//! soon as the truncation leaves `power` buffer rows above the highest state
//! involved. This module enforces that bound, which is what makes it usable
//! as ground truth for the closed forms in [`crate::matelem`].

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::{Error, Result};

/// Representation parameter `a > 0` of the parabose oscillator, with exact
/// recognition of the half-integer form `a = 1/2 + m`.
///
/// In the half-integer case every Wigner series terminates, so `m` is kept
/// as an integer rather than re-derived from floating point downstream.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParaParam {
    a: f64,
    half_integer_m: Option<u32>,
}

impl ParaParam {
    /// Validates `a > 0` and detects `a = 1/2 + m` exactly (no tolerance:
    /// `2a` must be an odd integer in the stored representation).
    pub fn new(a: f64) -> Result<Self> {
        if !a.is_finite() || a <= 0.0 {
            return Err(Error::InvalidParameters(format!(
                "representation parameter a must be positive, got {a}"
            )));
        }
        let two_a = 2.0 * a;
        let half_integer_m = if two_a == two_a.trunc() && two_a <= u32::MAX as f64 {
            let k = two_a as u64;
            if k % 2 == 1 {
                Some(((k - 1) / 2) as u32)
            } else {
                None
            }
        } else {
            None
        };
        Ok(Self { a, half_integer_m })
    }

    /// The exact half-integer representation `a = 1/2 + m`.
    pub fn half_integer(m: u32) -> Self {
        Self {
            a: 0.5 + m as f64,
            half_integer_m: Some(m),
        }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn half_integer_m(&self) -> Option<u32> {
        self.half_integer_m
    }

    /// The parameter shifted by one, `a -> a + 1`. Odd-state quantities equal
    /// even-state quantities under this shift.
    pub fn shifted(&self) -> Self {
        match self.half_integer_m {
            Some(m) => Self::half_integer(m + 1),
            // adding 1.0 is exact for every a of interest (|a| << 2^52)
            None => Self {
                a: self.a + 1.0,
                half_integer_m: None,
            },
        }
    }
}

impl std::fmt::Display for ParaParam {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.half_integer_m {
            Some(m) => write!(f, "{}/2", 2 * m + 1),
            None => write!(f, "{}", self.a),
        }
    }
}

/// Dense truncated matrices for `b+` and `b-` on the first `dim` Fock states.
#[derive(Debug, Clone)]
pub struct TruncatedRep {
    a: ParaParam,
    dim: usize,
    b_plus: DMatrix<f64>,
    b_minus: DMatrix<f64>,
}

impl TruncatedRep {
    /// Populates the ladder matrices; entries that fall outside the
    /// truncation are dropped.
    pub fn new(a: ParaParam, dim: usize) -> Result<Self> {
        if dim < 1 {
            return Err(Error::InvalidParameters(
                "truncation dimension must be at least 1".into(),
            ));
        }
        let mut b_plus = DMatrix::zeros(dim, dim);
        for col in 0..dim - 1 {
            let amp = if col % 2 == 0 {
                let n = (col / 2) as f64;
                (2.0 * (n + a.a())).sqrt()
            } else {
                let n = ((col - 1) / 2) as f64;
                (2.0 * (n + 1.0)).sqrt()
            };
            b_plus[(col + 1, col)] = amp;
        }
        let b_minus = b_plus.transpose();
        Ok(Self {
            a,
            dim,
            b_plus,
            b_minus,
        })
    }

    pub fn a(&self) -> &ParaParam {
        &self.a
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn b_plus(&self) -> &DMatrix<f64> {
        &self.b_plus
    }

    pub fn b_minus(&self) -> &DMatrix<f64> {
        &self.b_minus
    }

    /// Position operator matrix `q = (b+ + b-)/sqrt(2)`.
    pub fn q_matrix(&self) -> DMatrix<f64> {
        (&self.b_plus + &self.b_minus) / 2.0f64.sqrt()
    }

    /// Momentum operator matrix `p = i (b+ - b-)/sqrt(2)`.
    pub fn p_matrix(&self) -> DMatrix<Complex64> {
        let scale = Complex64::new(0.0, 1.0 / 2.0f64.sqrt());
        (&self.b_plus - &self.b_minus).map(|x| scale * x)
    }

    /// `X = lambda p + mu q = a+ b+ + a- b-` with `a± = (mu ± i lambda)/sqrt(2)`.
    /// Hermitian for all real `(lambda, mu)`.
    pub fn x_matrix(&self, lambda: f64, mu: f64) -> DMatrix<Complex64> {
        let ap = Complex64::new(mu, lambda) / 2.0f64.sqrt();
        let am = Complex64::new(mu, -lambda) / 2.0f64.sqrt();
        DMatrix::from_fn(self.dim, self.dim, |i, j| {
            ap * self.b_plus[(i, j)] + am * self.b_minus[(i, j)]
        })
    }

    fn require_buffered(&self, n: usize) -> Result<()> {
        if n + 2 > self.dim {
            return Err(Error::IndexOutOfRange(format!(
                "state {n} needs dim >= {} (one buffer row), have {}",
                n + 2,
                self.dim
            )));
        }
        Ok(())
    }

    /// `<n| {b-, b+} |n>`; equals `2(n + a)` for every representation.
    pub fn anticommutator_diag(&self, n: usize) -> Result<f64> {
        self.require_buffered(n)?;
        let anti = &self.b_minus * &self.b_plus + &self.b_plus * &self.b_minus;
        Ok(anti[(n, n)])
    }

    /// `<n| [p, q] |n>`: `-2ai` on even states, `-2(1-a)i` on odd states;
    /// constant `-i` only in the canonical representation `a = 1/2`.
    pub fn commutator_pq_diag(&self, n: usize) -> Result<Complex64> {
        self.require_buffered(n)?;
        let p = self.p_matrix();
        let q = self.q_matrix().map(|x| Complex64::new(x, 0.0));
        let comm = &p * &q - &q * &p;
        Ok(comm[(n, n)])
    }

    /// Exact matrix element `<row| X^power |col>`.
    ///
    /// The truncation must satisfy `dim >= max(row, col) + power + 1` so that
    /// no amplitude leaks past the boundary; this is enforced, not advisory.
    pub fn x_power_element(
        &self,
        lambda: f64,
        mu: f64,
        power: u32,
        row: usize,
        col: usize,
    ) -> Result<Complex64> {
        let needed = row.max(col) + power as usize + 1;
        if self.dim < needed {
            return Err(Error::TruncationTooSmall(format!(
                "<{row}|X^{power}|{col}> needs dim >= {needed}, have {}",
                self.dim
            )));
        }
        if row >= self.dim || col >= self.dim {
            return Err(Error::IndexOutOfRange(format!(
                "state index out of range for dim {}",
                self.dim
            )));
        }
        let x = self.x_matrix(lambda, mu);
        let mut v = nalgebra::DVector::<Complex64>::zeros(self.dim);
        v[col] = Complex64::new(1.0, 0.0);
        for _ in 0..power {
            v = &x * v;
        }
        Ok(v[row])
    }
}
