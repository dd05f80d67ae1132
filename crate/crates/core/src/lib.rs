//! Numerical laboratory for the Dirichlet divisor problem and the mean
//! square of the Riemann zeta function on the critical line.
//!
//! The crate computes the divisor error term Δ(x) and its alternating
//! variant Δ*(x) by exact sieved prefix sums, the mean-square error term
//! E(T) by quadrature of |ζ(½+it)|², and the hybrid E*(t) = E(t) −
//! 2πΔ*(t/2π). Each quantity is also evaluated by an independent explicit
//! formula (truncated Voronoi series, Atkinson's formula) so that every
//! route can be cross-checked against another. On top of these sit
//! moment-integral scans with log-log exponent fitting, Gaussian smoothing
//! operators, exact counting for the Robert–Sargos quadruple inequality,
//! and short-interval fourth-power sums with dyadic large-value
//! bookkeeping.

// Frozen reference values keep their full published digits, and the
// `!(x > 0.0)`-style guards deliberately reject NaN along with the
// out-of-range sign.
#![allow(clippy::excessive_precision)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cache;
pub mod divisor;
pub mod error;
pub mod explicit;
pub mod moments;
pub mod quadruples;
pub mod report;
pub mod short_interval;
pub mod smoothing;
pub mod util;
pub mod zeta;

pub use error::{Error, Result};

/// Euler's constant γ = −Γ′(1).
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
