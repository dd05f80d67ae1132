//! Critical-line zeta evaluation and the mean-square error term E(T).
//!
//! ζ(½+it) is evaluated by Euler–Maclaurin summation below
//! [`RS_MIN_T`] and by the Riemann–Siegel main sum above it, with the
//! leading correction term by default (error O(t^{-3/4})) and a
//! switchable correction order. |ζ(½+it)|² samples live on a uniform
//! cached grid; every T-dependent integral is read off one shared grid,
//! which is what makes the moment scans affordable — samples are reused
//! across every T.
//!
//! Integration uses composite Simpson anchored at even sample indices.
//! A query point inside a pair integrates that pair's interpolating
//! parabola, so integrals are additive and agree exactly with the full
//! Simpson rule at pair boundaries.

use crate::divisor::{delta_star_combination, DivisorTable};
use crate::error::{Error, Result};
use crate::util::KahanSum;
use crate::EULER_GAMMA;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

/// Crossover between Euler–Maclaurin and Riemann–Siegel evaluation.
pub const RS_MIN_T: f64 = 30.0;

/// Default number of Riemann–Siegel correction terms (the C₀ term).
pub const DEFAULT_RS_ORDER: u8 = 1;

/// Maximum supported correction order (main sum + C₀ + C₁).
pub const MAX_RS_ORDER: u8 = 2;

// B_{2k}/(2k)! for the Euler–Maclaurin tail.
const BERNOULLI_FACTORIAL: [f64; 10] = [
    8.333333333333333e-2,    // B2/2!
    -1.388888888888889e-3,   // B4/4!
    3.306878306878307e-5,    // B6/6!
    -8.267195767195768e-7,   // B8/8!
    2.08767569878681e-8,     // B10/10!
    -5.284190138687493e-10,  // B12/12!
    1.3382536530684679e-11,  // B14/14!
    -3.3896802963225832e-13, // B16/16!
    8.586062056277845e-15,   // B18/18!
    -2.1748686985580617e-16, // B20/20!
];

/// Riemann–Siegel theta, asymptotic series through the t^{-5} term.
pub fn riemann_siegel_theta(t: f64) -> f64 {
    let t2 = t * t;
    0.5 * t * (t / (2.0 * PI)).ln() - 0.5 * t - PI / 8.0
        + 1.0 / (48.0 * t)
        + 7.0 / (5760.0 * t * t2)
        + 31.0 / (80640.0 * t * t2 * t2)
}

/// Euler–Maclaurin evaluation of ζ(s) with `n` direct terms and
/// `tail_terms` Bernoulli corrections. Converges once 2πn exceeds
/// |s| + 2·tail_terms.
fn zeta_euler_maclaurin(s: Complex64, n: usize, tail_terms: usize) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    for j in 1..n {
        sum += (-s * (j as f64).ln()).exp();
    }
    let nf = n as f64;
    let n_pow_minus_s = (-s * nf.ln()).exp();
    sum += n_pow_minus_s * (nf / (s - 1.0) + 0.5);
    let mut product = s;
    let mut n_pow = n_pow_minus_s / nf; // N^{-s-1}
    for (k, &coeff) in BERNOULLI_FACTORIAL.iter().take(tail_terms).enumerate() {
        sum += n_pow * product * coeff;
        let k2 = 2.0 * (k + 1) as f64;
        product = product * (s + (k2 - 1.0)) * (s + k2);
        n_pow /= nf * nf;
    }
    sum
}

/// Leading Riemann–Siegel correction kernel
/// Ψ(p) = cos(2π(p² − p − 1/16)) / cos(2πp). The zeros of the
/// denominator at p = 1/4, 3/4 are removable and harmless in f64.
fn rs_psi(p: f64) -> f64 {
    (2.0 * PI * (p * p - p - 1.0 / 16.0)).cos() / (2.0 * PI * p).cos()
}

/// Ψ'''(p) by a fourth-order central difference; feeds the C₁ term.
fn rs_psi_d3(p: f64) -> f64 {
    let h = 4e-3;
    (rs_psi(p - 3.0 * h) - 8.0 * rs_psi(p - 2.0 * h) + 13.0 * rs_psi(p - h)
        - 13.0 * rs_psi(p + h)
        + 8.0 * rs_psi(p + 2.0 * h)
        - rs_psi(p + 3.0 * h))
        / (8.0 * h * h * h)
}

/// Hardy's function Z(t) = e^{iθ(t)} ζ(½+it) for t ≥ RS_MIN_T, by the
/// Riemann–Siegel formula with `order` correction terms.
fn riemann_siegel_z(t: f64, order: u8) -> f64 {
    let tau = (t / (2.0 * PI)).sqrt();
    let m = tau.floor() as u64;
    let theta = riemann_siegel_theta(t);
    let mut sum = KahanSum::new();
    for n in 1..=m {
        let nf = n as f64;
        sum.add((theta - t * nf.ln()).cos() / nf.sqrt());
    }
    let mut z = 2.0 * sum.value();
    if order >= 1 {
        let p = tau - m as f64;
        let sign = if m % 2 == 1 { 1.0 } else { -1.0 }; // (−1)^{m−1}
        let mut correction = rs_psi(p);
        if order >= 2 {
            correction -= rs_psi_d3(p) / (96.0 * PI * PI) / tau;
        }
        z += sign * correction / tau.sqrt();
    }
    z
}

/// ζ(½+it) with an explicit Riemann–Siegel correction order (0..=2).
pub fn zeta_half_with_order(t: f64, order: u8) -> Complex64 {
    let order = order.min(MAX_RS_ORDER);
    if t < 0.0 {
        return zeta_half_with_order(-t, order).conj();
    }
    if t < RS_MIN_T {
        zeta_euler_maclaurin(Complex64::new(0.5, t), 48, 10)
    } else {
        let z = riemann_siegel_z(t, order);
        Complex64::from_polar(z, -riemann_siegel_theta(t))
    }
}

/// ζ(½+it). Euler–Maclaurin below t = 30, Riemann–Siegel with the C₀
/// correction above; negative t by reflection.
pub fn zeta_half(t: f64) -> Complex64 {
    zeta_half_with_order(t, DEFAULT_RS_ORDER)
}

/// Hardy's Z(t): real, |Z(t)| = |ζ(½+it)|, sign changes at the zeros.
pub fn hardy_z(t: f64) -> f64 {
    if t >= RS_MIN_T {
        riemann_siegel_z(t, DEFAULT_RS_ORDER)
    } else {
        let zeta = zeta_euler_maclaurin(Complex64::new(0.5, t), 48, 10);
        (Complex64::from_polar(1.0, riemann_siegel_theta(t)) * zeta).re
    }
}

/// |ζ(½+it)|², the grid integrand.
pub fn zeta_half_norm_sqr(t: f64, order: u8) -> f64 {
    if t >= RS_MIN_T {
        let z = riemann_siegel_z(t, order);
        z * z
    } else {
        zeta_half_with_order(t, order).norm_sqr()
    }
}

/// Which evaluation dominated a grid's construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GridMethod {
    #[serde(rename = "euler-maclaurin")]
    EulerMaclaurin,
    #[serde(rename = "riemann-siegel")]
    RiemannSiegel,
}

impl GridMethod {
    pub(crate) fn tag_byte(self) -> u8 {
        match self {
            GridMethod::EulerMaclaurin => 0,
            GridMethod::RiemannSiegel => 1,
        }
    }

    pub(crate) fn from_tag_byte(b: u8) -> Option<Self> {
        match b {
            0 => Some(GridMethod::EulerMaclaurin),
            1 => Some(GridMethod::RiemannSiegel),
            _ => None,
        }
    }
}

/// Cached |ζ(½+it)|² samples on a uniform grid, with the cumulative
/// Simpson-pair integrals precomputed. Immutable once built; shareable
/// across threads.
#[derive(Debug, Clone)]
pub struct ZetaSampleGrid {
    t_start: f64,
    step: f64,
    values: Vec<f64>,
    method: GridMethod,
    cum_pairs: Vec<f64>,
}

/// Largest admissible step for a grid ending at `t_end`: several samples
/// per oscillation of the integrand's slowest relevant scale.
pub fn max_grid_step(t_end: f64) -> f64 {
    PI / (t_end / (2.0 * PI) + 2.0).ln()
}

impl ZetaSampleGrid {
    /// Build a grid over [t_start, ≥t_end] with the default correction
    /// order. The cell count is rounded up to an even number so every
    /// query lands inside a complete Simpson pair.
    pub fn build(t_start: f64, t_end: f64, step: f64) -> Result<Self> {
        Self::build_with_order(t_start, t_end, step, DEFAULT_RS_ORDER)
    }

    pub fn build_with_order(t_start: f64, t_end: f64, step: f64, order: u8) -> Result<Self> {
        if !(step > 0.0) || !(t_end > t_start) || t_start < 0.0 {
            return Err(Error::Parameter(format!(
                "grid range [{t_start}, {t_end}] step {step}"
            )));
        }
        if step > max_grid_step(t_end) {
            return Err(Error::Parameter(format!(
                "step {step} exceeds density bound {} for t_end {t_end}",
                max_grid_step(t_end)
            )));
        }
        let mut cells = ((t_end - t_start) / step).ceil() as usize;
        if cells % 2 == 1 {
            cells += 1;
        }
        cells = cells.max(2);
        let values: Vec<f64> = (0..=cells)
            .into_par_iter()
            .map(|i| zeta_half_norm_sqr(t_start + i as f64 * step, order))
            .collect();
        let method = if t_start + cells as f64 * step < RS_MIN_T {
            GridMethod::EulerMaclaurin
        } else {
            GridMethod::RiemannSiegel
        };
        Ok(Self::assemble(t_start, step, values, method))
    }

    /// Wrap existing samples (cache load path); recomputes the cumulative
    /// integrals.
    pub(crate) fn assemble(
        t_start: f64,
        step: f64,
        values: Vec<f64>,
        method: GridMethod,
    ) -> Self {
        debug_assert!(values.len() % 2 == 1 && values.len() >= 3);
        let pairs = (values.len() - 1) / 2;
        let mut cum_pairs = Vec::with_capacity(pairs + 1);
        let mut acc = KahanSum::new();
        cum_pairs.push(0.0);
        for k in 0..pairs {
            let f0 = values[2 * k];
            let f1 = values[2 * k + 1];
            let f2 = values[2 * k + 2];
            acc.add(step / 3.0 * (f0 + 4.0 * f1 + f2));
            cum_pairs.push(acc.value());
        }
        ZetaSampleGrid {
            t_start,
            step,
            values,
            method,
            cum_pairs,
        }
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn t_end(&self) -> f64 {
        self.t_start + (self.values.len() - 1) as f64 * self.step
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn method(&self) -> GridMethod {
        self.method
    }

    pub fn samples(&self) -> &[f64] {
        &self.values
    }

    fn check_coverage(&self, t: f64) -> Result<()> {
        let tol = 1e-9 * self.step;
        if t < self.t_start - tol || t > self.t_end() + tol {
            return Err(Error::Coverage {
                have_start: self.t_start,
                have_end: self.t_end(),
                requested: t,
            });
        }
        Ok(())
    }

    /// Sampled |ζ(½+it)|² at the grid node nearest to t.
    pub fn value_near(&self, t: f64) -> Result<f64> {
        self.check_coverage(t)?;
        let i = ((t - self.t_start) / self.step).round() as usize;
        Ok(self.values[i.min(self.values.len() - 1)])
    }

    /// ∫ from t_start to t of the Simpson-pair reconstruction.
    fn cumulative(&self, t: f64) -> Result<f64> {
        self.check_coverage(t)?;
        let t = t.clamp(self.t_start, self.t_end());
        let cells = self.values.len() - 1;
        let mut j = ((t - self.t_start) / self.step).floor() as usize;
        if j >= cells {
            j = cells - 1;
        }
        let anchor = j & !1;
        let f0 = self.values[anchor];
        let f1 = self.values[anchor + 1];
        let f2 = self.values[anchor + 2];
        let h = self.step;
        let x = t - (self.t_start + anchor as f64 * h);
        let b = (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * h);
        let c = (f0 - 2.0 * f1 + f2) / (2.0 * h * h);
        Ok(self.cum_pairs[anchor / 2] + x * (f0 + x * (b / 2.0 + x * c / 3.0)))
    }

    /// ∫_a^b |ζ(½+it)|² dt over any subinterval of the grid.
    pub fn integral(&self, a: f64, b: f64) -> Result<f64> {
        if b < a {
            return Err(Error::Parameter(format!("integral bounds {a} > {b}")));
        }
        Ok(self.cumulative(b)? - self.cumulative(a)?)
    }
}

/// Route tag on an E(T) evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ERoute {
    #[serde(rename = "quadrature-1.2")]
    Quadrature,
    #[serde(rename = "atkinson-2.5")]
    Atkinson,
}

impl std::fmt::Display for ERoute {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ERoute::Quadrature => "quadrature-1.2",
            ERoute::Atkinson => "atkinson-2.5",
        })
    }
}

/// A mean-square error-term evaluation tagged with its route.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EValue {
    pub t: f64,
    pub value: f64,
    pub route: ERoute,
}

/// Main term T(log(T/2π) + 2γ − 1) of the mean square, with the
/// continuous extension 0 at T = 0.
pub fn mean_square_main_term(t: f64) -> f64 {
    if t == 0.0 {
        0.0
    } else {
        t * ((t / (2.0 * PI)).ln() + 2.0 * EULER_GAMMA - 1.0)
    }
}

/// ∫₀^T |ζ(½+it)|² dt from a grid that covers [0, T].
pub fn mean_square_integral(t: f64, grid: &ZetaSampleGrid) -> Result<f64> {
    if t < 0.0 {
        return Err(Error::Parameter(format!("T = {t} must be nonnegative")));
    }
    if grid.t_start() > 1e-12 {
        return Err(Error::Coverage {
            have_start: grid.t_start(),
            have_end: grid.t_end(),
            requested: 0.0,
        });
    }
    grid.integral(grid.t_start(), t)
}

/// E(T) = ∫₀^T |ζ(½+it)|² dt − T(log(T/2π) + 2γ − 1), by quadrature.
pub fn e_quadrature(t: f64, grid: &ZetaSampleGrid) -> Result<EValue> {
    let value = mean_square_integral(t, grid)? - mean_square_main_term(t);
    Ok(EValue {
        t,
        value,
        route: ERoute::Quadrature,
    })
}

/// E*(t) = E(t) − 2π Δ*(t/2π).
pub fn e_star(t: f64, grid: &ZetaSampleGrid, table: &DivisorTable) -> Result<f64> {
    let e = e_quadrature(t, grid)?.value;
    let dstar = delta_star_combination(t / (2.0 * PI), table)?.value;
    Ok(e - 2.0 * PI * dstar)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    // mpmath, 25 significant digits.
    const ZETA_HALF_RE: f64 = -1.460354508809586812889499;
    const FIRST_ZERO: f64 = 14.13472514173469379045725;

    #[test]
    fn zeta_at_origin_matches_reference() {
        let z = zeta_half(0.0);
        assert_abs_diff_eq!(z.re, ZETA_HALF_RE, epsilon = 1e-11);
        assert!(z.im.abs() < 1e-11);
    }

    #[test]
    fn euler_maclaurin_matches_reference_points() {
        // (t, re, im) from an independent high-precision evaluation.
        let cases = [
            (5.0, 0.70181237116568663, 0.23103800839141993),
            (10.0, 1.5448952202967528, -0.11533646527127338),
            (20.0, 0.42991386043784337, -1.0642914430805891),
            (25.0, 0.0049845933640356754, -0.014012301962583383),
        ];
        for (t, re, im) in cases {
            let z = zeta_half(t);
            assert_abs_diff_eq!(z.re, re, epsilon = 1e-10);
            assert_abs_diff_eq!(z.im, im, epsilon = 1e-10);
        }
    }

    #[test]
    fn riemann_siegel_matches_reference_magnitudes() {
        // |ζ(½+it)| references with tolerances at the size of the first
        // omitted correction term, ~|C₁|(t/2π)^{-3/4}.
        let cases = [
            (35.0, 2.8264786113274225, 8e-3),
            (50.0, 0.34073500595502498, 5e-3),
            (100.0, 2.6926970566644635, 8e-3),
            (250.0, 0.91863341835615243, 2e-3),
            (500.0, 1.4724478510550853, 5e-4),
            (1000.0, 0.99779463752158661, 4e-4),
            (2500.0, 0.7165867299397992, 4e-4),
            (5000.0, 0.80425723635293985, 2e-4),
        ];
        for (t, reference, tol) in cases {
            let got = zeta_half(t).norm();
            assert!(
                (got - reference).abs() < tol,
                "t = {t}: |ζ| = {got}, reference {reference}"
            );
        }
    }

    #[test]
    fn higher_correction_order_improves_accuracy() {
        let cases = [
            (50.0, 0.34073500595502498),
            (100.0, 2.6926970566644635),
            (500.0, 1.4724478510550853),
        ];
        for (t, reference) in cases {
            let e0 = (zeta_half_with_order(t, 0).norm() - reference).abs();
            let e1 = (zeta_half_with_order(t, 1).norm() - reference).abs();
            let e2 = (zeta_half_with_order(t, 2).norm() - reference).abs();
            assert!(e1 < e0, "t = {t}: C0 should improve on the main sum: {e1} vs {e0}");
            assert!(e2 < e1 * 1.5, "t = {t}: C1 should not degrade: {e2} vs {e1}");
        }
    }

    #[test]
    fn vanishes_at_first_zero() {
        assert!(zeta_half(14.134725142).norm() < 1e-5);
    }

    #[test]
    fn hardy_z_locates_first_zero() {
        // Bisection on the sign change of Z(t) around the first zero.
        let (mut lo, mut hi) = (14.0, 14.3);
        assert!(hardy_z(lo) * hardy_z(hi) < 0.0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if hardy_z(lo) * hardy_z(mid) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        assert_abs_diff_eq!(0.5 * (lo + hi), FIRST_ZERO, epsilon = 1e-9);
    }

    #[test]
    fn reflection_symmetry() {
        for t in [3.0, 17.5, 44.0, 321.0] {
            let plus = zeta_half(t);
            let minus = zeta_half(-t);
            assert_abs_diff_eq!(plus.re, minus.re, epsilon = 1e-12);
            assert_abs_diff_eq!(plus.im, -minus.im, epsilon = 1e-12);
            assert_abs_diff_eq!(plus.norm(), minus.norm(), epsilon = 1e-12);
        }
    }

    #[test]
    fn grid_rejects_bad_parameters() {
        assert!(ZetaSampleGrid::build(0.0, 100.0, 0.0).is_err());
        assert!(ZetaSampleGrid::build(0.0, 100.0, 5.0).is_err()); // too coarse
        assert!(ZetaSampleGrid::build(50.0, 10.0, 0.05).is_err());
    }

    #[test]
    fn samples_nonnegative_and_method_tagged() {
        let g = ZetaSampleGrid::build(0.0, 20.0, 0.1).unwrap();
        assert!(g.samples().iter().all(|&v| v >= 0.0));
        assert_eq!(g.method(), GridMethod::EulerMaclaurin);
        let g2 = ZetaSampleGrid::build(0.0, 60.0, 0.1).unwrap();
        assert_eq!(g2.method(), GridMethod::RiemannSiegel);
    }

    #[test]
    fn mean_square_integral_at_zero_is_zero() {
        let g = ZetaSampleGrid::build(0.0, 10.0, 0.05).unwrap();
        assert_eq!(mean_square_integral(0.0, &g).unwrap(), 0.0);
    }

    #[test]
    fn mean_square_integral_monotone() {
        let g = ZetaSampleGrid::build(0.0, 50.0, 0.05).unwrap();
        let mut prev = 0.0;
        let mut t = 0.5;
        while t < 50.0 {
            let v = mean_square_integral(t, &g).unwrap();
            assert!(v >= prev, "integral decreased at t = {t}");
            prev = v;
            t += 0.5;
        }
    }

    #[test]
    fn mean_square_integral_reference_at_100() {
        // ∫₀^100 |ζ|² dt = 295.6350990547191 (independent adaptive
        // quadrature on the high-precision evaluator).
        let g = ZetaSampleGrid::build(0.0, 101.0, 0.05).unwrap();
        let v = mean_square_integral(100.0, &g).unwrap();
        assert!(
            (v - 295.6350990547191).abs() < 0.5,
            "integral to 100: {v}"
        );
        // E(100) = 3.4626541165379698 from the same reference.
        let e = e_quadrature(100.0, &g).unwrap();
        assert!((e.value - 3.4626541165379698).abs() < 0.5, "E(100) = {}", e.value);
        assert_eq!(e.route, ERoute::Quadrature);
    }

    #[test]
    fn step_halving_stability() {
        let coarse = ZetaSampleGrid::build(0.0, 200.0, 0.08).unwrap();
        let fine = ZetaSampleGrid::build(0.0, 200.0, 0.04).unwrap();
        let a = mean_square_integral(200.0, &coarse).unwrap();
        let b = mean_square_integral(200.0, &fine).unwrap();
        assert!((a - b).abs() / b < 1e-3, "step halving moved {a} -> {b}");
    }

    #[test]
    fn integral_additive_against_fresh_subgrid() {
        let g = ZetaSampleGrid::build(0.0, 120.0, 0.05).unwrap();
        let sub = ZetaSampleGrid::build(40.0, 90.0, 0.05).unwrap();
        let whole = g.integral(40.0, 90.0).unwrap();
        let fresh = sub.integral(40.0, 90.0).unwrap();
        assert!(
            (whole - fresh).abs() < 1e-4 * fresh.abs().max(1.0),
            "{whole} vs {fresh}"
        );
    }

    #[test]
    fn coverage_errors() {
        let g = ZetaSampleGrid::build(0.0, 10.0, 0.05).unwrap();
        assert!(matches!(
            mean_square_integral(50.0, &g),
            Err(Error::Coverage { .. })
        ));
        let offset = ZetaSampleGrid::build(5.0, 15.0, 0.05).unwrap();
        assert!(matches!(
            mean_square_integral(10.0, &offset),
            Err(Error::Coverage { .. })
        ));
    }

    #[test]
    fn e_star_definition_and_jump() {
        let table = DivisorTable::sieve(64).unwrap();
        let g = ZetaSampleGrid::build(0.0, 40.0, 0.02).unwrap();
        // Identity: E*(t) + 2πΔ*(t/2π) = E(t), exactly as computed.
        let t = 13.7;
        let es = e_star(t, &g, &table).unwrap();
        let e = e_quadrature(t, &g).unwrap().value;
        let ds = delta_star_combination(t / (2.0 * PI), &table).unwrap().value;
        assert_eq!(es, e - 2.0 * PI * ds);

        // Jump of E* where 2t/π crosses integer m: magnitude π·d(m),
        // sign (−1)^{m+1}.
        for m in [7u64, 8, 12] {
            let t0 = 0.5 * PI * m as f64;
            let eps = 1e-7;
            let jump =
                e_star(t0 + eps, &g, &table).unwrap() - e_star(t0 - eps, &g, &table).unwrap();
            let sign = if m % 2 == 0 { -1.0 } else { 1.0 };
            let expect = sign * PI * table.d(m) as f64;
            assert_abs_diff_eq!(jump, expect, epsilon = 1e-3);
        }
    }
}
