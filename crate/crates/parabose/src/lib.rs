//! Phase-space toolkit for the one-dimensional parabose oscillator.
//!
//! The parabose oscillator generalizes the canonical harmonic oscillator:
//! instead of `[p, q] = -i` one requires compatibility of the Hamilton and
//! Heisenberg equations, which admits a family of solutions labelled by a
//! positive representation parameter `a` (the ground-state energy). The
//! canonical oscillator is recovered at `a = 1/2`.
//!
//! This crate evaluates the Wigner quasi-probability function `W_n(p, q)` of
//! the stationary states `|n>` for arbitrary `a > 0`, through three
//! independent routes that cross-validate each other:
//!
//! * closed-form Laguerre series ([`wigner::wn`], formulas `a29` and `a31`),
//! * closed-form and recurrence-based operator matrix elements
//!   ([`matelem`]), fed through the exponential series,
//! * a truncated Fock-space brute force ([`fock`]) plus two-dimensional
//!   quadrature of the defining integral ([`oracle`]).
//!
//! Supporting scalar kernels (rising factorials, Laguerre and Hermite
//! polynomials, hypergeometric series) live in [`specfun`]; the invariant
//! suites behind the `verify` CLI subcommand live in [`checks`].

// parity tests via `% 2` throughout; the library targets domain readers
#![allow(clippy::manual_is_multiple_of)]

pub mod checks;
pub mod fock;
pub mod matelem;
pub mod oracle;
pub mod specfun;
pub mod wigner;

pub use fock::{ParaParam, TruncatedRep};
pub use specfun::{ConvergenceStatus, EvalResult, SeriesControl};
pub use wigner::{Formula, PhasePoint, WignerQuery};

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("truncated representation too small: {0}")]
    TruncationTooSmall(String),
    #[error("out of supported range: {0}")]
    OutOfSupportedRange(String),
    #[error(
        "series convergence is not guaranteed in this parameter region; \
         opt into best-effort evaluation to proceed"
    )]
    NotGuaranteedConvergence,
    #[error("quadrature did not converge: {0}")]
    QuadratureDidNotConverge(String),
}

pub type Result<T> = std::result::Result<T, Error>;
