//! Gaussian averaging operators and the smoothing inequalities they
//! satisfy: the one-sided sandwich for E(T) and the near-identity for
//! Δ*(T/2π).
//!
//! The operator is (2/√πG)·∫₀^∞ f(T ± u) e^{-u²/G²} du, truncated at
//! u = G·log T with a reported error bound e^{-log²T}. For degenerate
//! small T (the delta-family limit tests) the truncation is floored at
//! 8G so the kernel mass is always captured. Quadrature is composite
//! Simpson with step G/20.

use crate::divisor::{delta_star_combination, DivisorTable};
use crate::error::{Error, Result};
use crate::util::KahanSum;
use crate::zeta::{e_quadrature, ZetaSampleGrid};
use serde::Serialize;
use std::f64::consts::PI;

/// Envelope constant for both lemma checks; a test-harness parameter,
/// not claimed theory.
pub const DEFAULT_ENVELOPE_C: f64 = 3.0;

/// Exponent in the Δ*-identity envelope G·T^ε.
pub const DEFAULT_LEMMA3_EPSILON: f64 = 0.05;

const TRUNCATION_FLOOR: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum KernelSign {
    #[serde(rename = "plus")]
    Plus,
    #[serde(rename = "minus")]
    Minus,
}

impl std::fmt::Display for KernelSign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            KernelSign::Plus => "plus",
            KernelSign::Minus => "minus",
        })
    }
}

/// A Gaussian kernel of width G, truncated at `truncation` in u.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GaussianKernelSpec {
    pub width: f64,
    pub truncation: f64,
    pub sign: KernelSign,
}

impl GaussianKernelSpec {
    /// Kernel for averaging around T. Any positive width is accepted;
    /// the truncation is G·log T floored at 8G.
    pub fn new(width: f64, t: f64, sign: KernelSign) -> Result<Self> {
        if !(width > 0.0) {
            return Err(Error::Parameter(format!("kernel width G = {width}")));
        }
        let kappa = t.max(1.0).ln().max(TRUNCATION_FLOOR);
        Ok(GaussianKernelSpec {
            width,
            truncation: width * kappa,
            sign,
        })
    }

    /// Kernel restricted to the lemma regime 1 ≪ G ≪ T/log T, enforced
    /// as G ≥ 1 and G·log T ≤ T/2.
    pub fn for_lemma_window(width: f64, t: f64, sign: KernelSign) -> Result<Self> {
        if width < 1.0 {
            return Err(Error::Parameter(format!(
                "lemma regime needs G >= 1, got {width}"
            )));
        }
        let spec = Self::new(width, t, sign)?;
        assert!(
            width * t.ln() <= t / 2.0,
            "G log T = {} escapes T/2 = {}",
            width * t.ln(),
            t / 2.0
        );
        Ok(spec)
    }

    /// Fractional kernel mass beyond the truncation point.
    pub fn truncation_bound(&self) -> f64 {
        let kappa = self.truncation / self.width;
        (-kappa * kappa).exp()
    }
}

/// A smoothed value together with the reported truncation error bound.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SmoothedValue {
    pub value: f64,
    pub truncation_bound: f64,
}

/// (2/√πG)·∫₀^truncation f(T ± u) e^{-u²/G²} du by composite Simpson
/// with step G/20.
pub fn gaussian_average<F>(f: F, t: f64, spec: &GaussianKernelSpec) -> Result<SmoothedValue>
where
    F: Fn(f64) -> Result<f64>,
{
    let g = spec.width;
    let mut cells = (spec.truncation / (g / 20.0)).ceil() as usize;
    if cells % 2 == 1 {
        cells += 1;
    }
    let h = spec.truncation / cells as f64;
    let direction = match spec.sign {
        KernelSign::Plus => 1.0,
        KernelSign::Minus => -1.0,
    };
    let eval = |i: usize| -> Result<f64> {
        let u = i as f64 * h;
        Ok(f(t + direction * u)? * (-u * u / (g * g)).exp())
    };
    let mut acc = KahanSum::new();
    for pair in 0..cells / 2 {
        let i = 2 * pair;
        acc.add(h / 3.0 * (eval(i)? + 4.0 * eval(i + 1)? + eval(i + 2)?));
    }
    Ok(SmoothedValue {
        value: 2.0 / (PI.sqrt() * g) * acc.value(),
        truncation_bound: spec.truncation_bound(),
    })
}

/// Result of the E(T) one-sided sandwich check at a single (T, G).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SandwichReport {
    pub t: f64,
    pub g: f64,
    pub e_at_t: f64,
    pub upper_average: f64,
    pub lower_average: f64,
    pub envelope: f64,
    pub holds: bool,
}

/// Check E(T) ≤ avg₊ + C·G·log T and E(T) ≥ avg₋ − C·G·log T, where
/// avg± averages E(T ± u) against the Gaussian kernel. Requires the
/// lemma regime G ≥ 1 and a grid fine enough that its step is at most
/// G/20.
pub fn check_e_sandwich(
    t: f64,
    g: f64,
    grid: &ZetaSampleGrid,
    envelope_c: f64,
) -> Result<SandwichReport> {
    if grid.step() > g / 20.0 {
        return Err(Error::Parameter(format!(
            "grid step {} too coarse for G = {g} (need <= G/20)",
            grid.step()
        )));
    }
    let spec_plus = GaussianKernelSpec::for_lemma_window(g, t, KernelSign::Plus)?;
    let spec_minus = GaussianKernelSpec::for_lemma_window(g, t, KernelSign::Minus)?;
    let e_fn = |tt: f64| Ok(e_quadrature(tt, grid)?.value);
    let upper = gaussian_average(e_fn, t, &spec_plus)?.value;
    let lower = gaussian_average(e_fn, t, &spec_minus)?.value;
    let e_at_t = e_quadrature(t, grid)?.value;
    let envelope = envelope_c * g * t.ln();
    Ok(SandwichReport {
        t,
        g,
        e_at_t,
        upper_average: upper,
        lower_average: lower,
        envelope,
        holds: e_at_t <= upper + envelope && e_at_t >= lower - envelope,
    })
}

/// Result of the Δ* smoothing-identity check at a single (T, G).
///
/// `envelope` is the statement's normalized form C·G·T^ε; the
/// pre-normalization scaling C·G²·T^ε is logged alongside it since the
/// two differ at desk scale.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DeltaStarSmoothingReport {
    pub t: f64,
    pub g: f64,
    pub delta_star_at_t: f64,
    pub average_plus: f64,
    pub average_minus: f64,
    pub residual_plus: f64,
    pub residual_minus: f64,
    pub envelope: f64,
    pub envelope_quadratic: f64,
    pub holds: bool,
}

/// Check Δ*(T/2π) = (2/√πG)∫₀^∞ Δ*(T/2π ± u/2π) e^{-u²/G²} du up to
/// C·G·T^ε, for both signs. The table must cover 4(T + G log T)/2π.
pub fn check_delta_star_smoothing(
    t: f64,
    g: f64,
    table: &DivisorTable,
    envelope_c: f64,
    epsilon: f64,
) -> Result<DeltaStarSmoothingReport> {
    let x0 = t / (2.0 * PI);
    let lhs = delta_star_combination(x0, table)?.value;
    let mut averages = [0.0; 2];
    for (slot, sign) in [KernelSign::Plus, KernelSign::Minus].into_iter().enumerate() {
        let spec = GaussianKernelSpec::new(g, t, sign)?;
        let f = |tt: f64| Ok(delta_star_combination(tt / (2.0 * PI), table)?.value);
        averages[slot] = gaussian_average(f, t, &spec)?.value;
    }
    let envelope = envelope_c * g * t.powf(epsilon);
    let residual_plus = (lhs - averages[0]).abs();
    let residual_minus = (lhs - averages[1]).abs();
    Ok(DeltaStarSmoothingReport {
        t,
        g,
        delta_star_at_t: lhs,
        average_plus: averages[0],
        average_minus: averages[1],
        residual_plus,
        residual_minus,
        envelope,
        envelope_quadratic: envelope_c * g * g * t.powf(epsilon),
        holds: residual_plus <= envelope && residual_minus <= envelope,
    })
}
