//! Explicit formulas: truncated Voronoi series for Δ(x) and Δ*(x), and
//! Atkinson's formula for E(T).
//!
//! The Atkinson amplitude e(T,n) and phase f(T,n) are always evaluated in
//! their exact closed forms, never by their asymptotic expansions; the
//! expansions only appear in tests as consistency checks. Series are
//! summed in ascending n with compensated accumulation.

use crate::divisor::DivisorTable;
use crate::error::{Error, Result};
use crate::util::KahanSum;
use crate::zeta::{ERoute, EValue};
use serde::Serialize;
use std::f64::consts::PI;

/// Exponent ε₀ used when an O-term is reported as a concrete envelope
/// with constant 1. Heuristic reporting aid, not claimed theory.
pub const DEFAULT_ENVELOPE_EPSILON: f64 = 0.01;

/// Truncation discipline N ≤ ratio·x for the Voronoi series.
pub const DEFAULT_TRUNCATION_RATIO: f64 = 1.0;

/// Default window AT < N < A'T accepted for Atkinson truncations.
pub const DEFAULT_ATKINSON_A: f64 = 0.5;
pub const DEFAULT_ATKINSON_A_PRIME: f64 = 2.0;

/// arsinh x = log(x + √(1+x²)).
pub fn arsinh(x: f64) -> f64 {
    x.asinh()
}

/// Atkinson phase f(T,n) = 2T·arsinh(√(πn/2T)) + √(2πnT + π²n²) − π/4.
pub fn f_atkinson(t: f64, n: u64) -> f64 {
    let nf = n as f64;
    2.0 * t * arsinh((PI * nf / (2.0 * t)).sqrt()) + (2.0 * PI * nf * t + PI * PI * nf * nf).sqrt()
        - PI / 4.0
}

/// Atkinson amplitude
/// e(T,n) = (1 + πn/2T)^{-1/4} · {(2T/πn)^{1/2} arsinh(√(πn/2T))}^{-1},
/// defined here for 1 ≤ n < T.
pub fn e_atkinson(t: f64, n: u64) -> Result<f64> {
    let nf = n as f64;
    if n == 0 || nf >= t {
        return Err(Error::Domain(format!(
            "e(T, n) needs 1 <= n < T, got n = {n}, T = {t}"
        )));
    }
    let ratio = PI * nf / (2.0 * t);
    Ok((1.0 + ratio).powf(-0.25) / ((1.0 / ratio.sqrt()) * arsinh(ratio.sqrt())))
}

/// Validated truncation data for Atkinson's formula.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AtkinsonParams {
    pub t: f64,
    pub n: f64,
    pub n_prime: f64,
}

impl AtkinsonParams {
    /// Accept any N with A·T < N < A'·T for the default window.
    pub fn new(t: f64, n: f64) -> Result<Self> {
        Self::with_window(t, n, DEFAULT_ATKINSON_A, DEFAULT_ATKINSON_A_PRIME)
    }

    pub fn with_window(t: f64, n: f64, a: f64, a_prime: f64) -> Result<Self> {
        if !(t > 0.0) {
            return Err(Error::Parameter(format!("atkinson: T = {t}")));
        }
        if !(0.0 < a && a < a_prime) {
            return Err(Error::Parameter(format!(
                "atkinson window constants {a}, {a_prime}"
            )));
        }
        // The endpoints are admitted so that the conventional N = T sits
        // inside the default window [0.5·T, 2·T].
        if n < a * t || n > a_prime * t {
            return Err(Error::Parameter(format!(
                "atkinson truncation N = {n} outside [{}, {}]",
                a * t,
                a_prime * t
            )));
        }
        let n_prime = t / (2.0 * PI) + n / 2.0 - (n * n / 4.0 + n * t / (2.0 * PI)).sqrt();
        // Always true algebraically; guards the Σ₂ logarithm against a
        // resonance at n = T/2π.
        assert!(
            n_prime > 0.0 && n_prime < t / (2.0 * PI) && n_prime < n,
            "N' = {n_prime} escaped (0, T/2pi)"
        );
        Ok(AtkinsonParams { t, n, n_prime })
    }
}

/// First Atkinson sum Σ₁(T): the oscillating (−1)^n series with
/// amplitude e(T,n) and phase f(T,n).
fn atkinson_sum1(params: &AtkinsonParams, table: &DivisorTable) -> Result<f64> {
    let t = params.t;
    let mut sum = KahanSum::new();
    let top = params.n.floor() as u64;
    for n in 1..=top {
        if (n as f64) >= t {
            // e(T,n) is restricted to n < T; with N = T the single
            // boundary term is O(d(T)·T^{-3/4}), far below the formula's
            // log² error allowance.
            break;
        }
        let nf = n as f64;
        let term = table.d(n) as f64 * nf.powf(-0.75)
            * e_atkinson(t, n)?
            * f_atkinson(t, n).cos();
        sum.add(if n % 2 == 0 { term } else { -term });
    }
    Ok(2.0f64.sqrt() * (t / (2.0 * PI)).powf(0.25) * sum.value())
}

/// Second Atkinson sum Σ₂(T): the short smooth series over n ≤ N'.
fn atkinson_sum2(params: &AtkinsonParams, table: &DivisorTable) -> f64 {
    let t = params.t;
    let mut sum = KahanSum::new();
    for n in 1..=params.n_prime.floor() as u64 {
        let nf = n as f64;
        let log_ratio = (t / (2.0 * PI * nf)).ln();
        sum.add(
            table.d(n) as f64 / nf.sqrt() / log_ratio
                * (t * log_ratio - t + PI / 4.0).cos(),
        );
    }
    -2.0 * sum.value()
}

/// E(T) by Atkinson's explicit formula, Σ₁(T) + Σ₂(T).
pub fn atkinson_e(params: &AtkinsonParams, table: &DivisorTable) -> Result<EValue> {
    let (s1, s2) = atkinson_sums(params, table)?;
    Ok(EValue {
        t: params.t,
        value: s1 + s2,
        route: ERoute::Atkinson,
    })
}

/// Both Atkinson sums, exposed so the harness can compare their sizes.
pub fn atkinson_sums(params: &AtkinsonParams, table: &DivisorTable) -> Result<(f64, f64)> {
    let top = params.n.floor() as u64;
    if top > table.limit() {
        return Err(Error::TableUnderflow {
            x: params.t,
            required: top,
            actual: table.limit(),
        });
    }
    Ok((
        atkinson_sum1(params, table)?,
        atkinson_sum2(params, table),
    ))
}

/// A truncated-series evaluation together with its truncation parameter
/// and the O-term envelope evaluated with constant 1.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SeriesResult {
    pub value: f64,
    pub truncation: u64,
    pub error_envelope: f64,
}

fn voronoi_series(
    x: f64,
    n_trunc: u64,
    table: &DivisorTable,
    alternating: bool,
    epsilon: f64,
    ratio: f64,
) -> Result<SeriesResult> {
    if n_trunc < 2 {
        return Err(Error::Parameter(format!(
            "voronoi truncation N = {n_trunc} must be at least 2"
        )));
    }
    if n_trunc > table.limit() {
        return Err(Error::Parameter(format!(
            "voronoi truncation N = {n_trunc} exceeds table limit {}",
            table.limit()
        )));
    }
    if !(x > 0.0) || (n_trunc as f64) > x * ratio {
        return Err(Error::Parameter(format!(
            "voronoi needs N << x: N = {n_trunc}, x = {x}, allowed N <= {}",
            x * ratio
        )));
    }
    let mut sum = KahanSum::new();
    for n in 1..=n_trunc {
        let nf = n as f64;
        let mut term =
            table.d(n) as f64 * nf.powf(-0.75) * (4.0 * PI * (nf * x).sqrt() - PI / 4.0).cos();
        if alternating && n % 2 == 1 {
            term = -term;
        }
        sum.add(term);
    }
    Ok(SeriesResult {
        value: x.powf(0.25) / (PI * 2.0f64.sqrt()) * sum.value(),
        truncation: n_trunc,
        error_envelope: x.powf(0.5 + epsilon) / (n_trunc as f64).sqrt(),
    })
}

/// Truncated Voronoi series for Δ(x):
/// (π√2)^{-1} x^{1/4} Σ_{n≤N} d(n) n^{-3/4} cos(4π√(nx) − π/4).
pub fn voronoi_delta(x: f64, n_trunc: u64, table: &DivisorTable) -> Result<SeriesResult> {
    voronoi_delta_with(x, n_trunc, table, DEFAULT_ENVELOPE_EPSILON, DEFAULT_TRUNCATION_RATIO)
}

pub fn voronoi_delta_with(
    x: f64,
    n_trunc: u64,
    table: &DivisorTable,
    epsilon: f64,
    ratio: f64,
) -> Result<SeriesResult> {
    voronoi_series(x, n_trunc, table, false, epsilon, ratio)
}

/// Truncated Voronoi series for Δ*(x): as [`voronoi_delta`] with
/// coefficients (−1)^n d(n).
pub fn voronoi_delta_star(x: f64, n_trunc: u64, table: &DivisorTable) -> Result<SeriesResult> {
    voronoi_delta_star_with(x, n_trunc, table, DEFAULT_ENVELOPE_EPSILON, DEFAULT_TRUNCATION_RATIO)
}

pub fn voronoi_delta_star_with(
    x: f64,
    n_trunc: u64,
    table: &DivisorTable,
    epsilon: f64,
    ratio: f64,
) -> Result<SeriesResult> {
    voronoi_series(x, n_trunc, table, true, epsilon, ratio)
}
