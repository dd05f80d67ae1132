//! Short-interval fourth-power sums over separated point systems, the
//! dyadic large-value bookkeeping over unit-interval maxima, and the
//! twelfth-moment scan.
//!
//! Point systems live in (T, 2T] with separation t_{r+1} − t_r ≥ 5G.
//! Three generators are built in — uniform packing, seeded random
//! admissible, and greedy selection at the integrand's peaks — because
//! the bound being stress-tested quantifies over all admissible systems.

use crate::error::{Error, Result};
use crate::util::KahanSum;
use crate::zeta::ZetaSampleGrid;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::Serialize;

/// ε₀ for the G-range hypothesis and for every T^ε envelope here.
pub const DEFAULT_EPSILON: f64 = 0.05;

/// Default harness bound on sum/envelope; empirical, configurable.
pub const DEFAULT_RATIO_BOUND: f64 = 16.0;

/// Separation multiple required between consecutive points.
pub const SEPARATION_FACTOR: f64 = 5.0;

/// How the points of a [`PointSystem`] were chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PointGenerator {
    #[serde(rename = "uniform")]
    Uniform,
    #[serde(rename = "random")]
    Random,
    #[serde(rename = "greedy-peaks")]
    GreedyPeaks,
}

impl std::fmt::Display for PointGenerator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PointGenerator::Uniform => "uniform",
            PointGenerator::Random => "random",
            PointGenerator::GreedyPeaks => "greedy-peaks",
        })
    }
}

/// Increasing points t_1 < … < t_R in (T, 2T] with separation ≥ 5G.
#[derive(Debug, Clone, Serialize)]
pub struct PointSystem {
    pub t: f64,
    pub g: f64,
    pub generator: PointGenerator,
    pub points: Vec<f64>,
}

impl PointSystem {
    /// Validate separation, range, and the window hypothesis
    /// G ∈ [T^{0.2+ε}, T].
    pub fn validate(&self, epsilon: f64) -> Result<()> {
        let (t, g) = (self.t, self.g);
        let g_low = t.powf(0.2 + epsilon);
        if g < g_low * (1.0 - 1e-9) || g > t {
            return Err(Error::PointSystem(format!(
                "G = {g} outside [T^{{0.2+eps}}, T] = [{g_low}, {t}]"
            )));
        }
        if self.points.is_empty() {
            return Err(Error::PointSystem("empty point system".into()));
        }
        for (i, &p) in self.points.iter().enumerate() {
            if p <= t || p > 2.0 * t {
                return Err(Error::PointSystem(format!(
                    "point t_{} = {p} outside ({t}, {}]",
                    i + 1,
                    2.0 * t
                )));
            }
            if i > 0 {
                let gap = p - self.points[i - 1];
                if gap < SEPARATION_FACTOR * g * (1.0 - 1e-12) {
                    return Err(Error::PointSystem(format!(
                        "separation {gap} below 5G = {}",
                        SEPARATION_FACTOR * g
                    )));
                }
            }
        }
        Ok(())
    }

    /// Maximal packing: points every 5G starting at T + 5G.
    pub fn uniform(t: f64, g: f64) -> Self {
        let step = SEPARATION_FACTOR * g;
        let count = (t / step).floor() as usize;
        PointSystem {
            t,
            g,
            generator: PointGenerator::Uniform,
            points: (1..=count).map(|r| t + r as f64 * step).collect(),
        }
    }

    /// Random admissible system: gaps 5G·(1 + u), u uniform in [0, 1).
    /// Deterministic for a fixed seed.
    pub fn random(t: f64, g: f64, seed: u64) -> Self {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let step = SEPARATION_FACTOR * g;
        let mut points = Vec::new();
        let mut cursor = t + step * (1.0 + rng.random_range(0.0..1.0));
        while cursor <= 2.0 * t {
            points.push(cursor);
            cursor += step * (1.0 + rng.random_range(0.0..1.0));
        }
        if points.is_empty() {
            points.push(t + step);
        }
        PointSystem {
            t,
            g,
            generator: PointGenerator::Random,
            points,
        }
    }

    /// Adversarial system: grid nodes in (T, 2T] visited in decreasing
    /// order of |ζ(½+it)|², greedily accepted under the separation rule.
    pub fn greedy_peaks(t: f64, g: f64, grid: &ZetaSampleGrid) -> Result<Self> {
        let h = grid.step();
        let lo = ((t + h) / h).ceil() as usize;
        let hi = ((2.0 * t) / h).floor() as usize;
        let samples = grid.samples();
        if hi >= samples.len() {
            return Err(Error::Coverage {
                have_start: grid.t_start(),
                have_end: grid.t_end(),
                requested: 2.0 * t,
            });
        }
        let mut order: Vec<usize> = (lo..=hi).collect();
        order.sort_by(|&a, &b| samples[b].partial_cmp(&samples[a]).unwrap());
        let mut accepted: Vec<f64> = Vec::new();
        let min_gap = SEPARATION_FACTOR * g;
        for i in order {
            let cand = i as f64 * h;
            if accepted.iter().all(|&p| (p - cand).abs() >= min_gap) {
                accepted.push(cand);
            }
        }
        accepted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(PointSystem {
            t,
            g,
            generator: PointGenerator::GreedyPeaks,
            points: accepted,
        })
    }
}

/// ∫_{t_r−G}^{t_r+G} |ζ(½+it)|² dt from the shared grid.
pub fn short_integral(t_r: f64, g: f64, grid: &ZetaSampleGrid) -> Result<f64> {
    if !(g > 0.0) {
        return Err(Error::Parameter(format!("window half-width G = {g}")));
    }
    grid.integral(t_r - g, t_r + g)
}

/// The fourth-power sum over a point system together with its envelope.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FourthPowerSumReport {
    pub t: f64,
    pub g: f64,
    pub r: u64,
    pub sum: f64,
    pub envelope: f64,
    pub ratio: f64,
}

/// Σ_r (∫_{t_r−G}^{t_r+G} |ζ|² dt)⁴ against the envelope
/// T^{2+ε}G^{-2} + R·G⁴·T^ε.
pub fn fourth_power_sum(
    system: &PointSystem,
    grid: &ZetaSampleGrid,
    epsilon: f64,
) -> Result<FourthPowerSumReport> {
    system.validate(epsilon)?;
    let mut acc = KahanSum::new();
    for &p in &system.points {
        let v = short_integral(p, system.g, grid)?;
        acc.add(v * v * v * v);
    }
    let (t, g) = (system.t, system.g);
    let r = system.points.len() as f64;
    let envelope = t.powf(2.0 + epsilon) / (g * g) + r * g.powi(4) * t.powf(epsilon);
    Ok(FourthPowerSumReport {
        t,
        g,
        r: system.points.len() as u64,
        sum: acc.value(),
        envelope,
        ratio: acc.value() / envelope,
    })
}

/// ∫₀^T of the p-th power of the grid integrand |ζ(½+it)|², by Simpson
/// over the nodes up to the even node nearest T. All powers share the
/// same quadrature weights, so the discrete Hölder inequalities between
/// them hold exactly.
pub fn power_integral(grid: &ZetaSampleGrid, t: f64, p: u32) -> Result<f64> {
    if grid.t_start() > 1e-12 {
        return Err(Error::Coverage {
            have_start: grid.t_start(),
            have_end: grid.t_end(),
            requested: 0.0,
        });
    }
    if t < 0.0 || t > grid.t_end() + grid.step() {
        return Err(Error::Coverage {
            have_start: grid.t_start(),
            have_end: grid.t_end(),
            requested: t,
        });
    }
    let samples = grid.samples();
    let h = grid.step();
    let mut top = ((t / h).round() as usize) & !1;
    top = top.min(samples.len() - 1);
    let f = |i: usize| samples[i].powi(p as i32);
    let mut acc = KahanSum::new();
    for pair in 0..top / 2 {
        let i = 2 * pair;
        acc.add(h / 3.0 * (f(i) + 4.0 * f(i + 1) + f(i + 2)));
    }
    Ok(acc.value())
}

/// Twelfth-moment value ∫₀^T |ζ(½+it)|¹² dt and its T^{2+ε}-normalized
/// form.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TwelfthMomentReport {
    pub t: f64,
    pub value: f64,
    pub normalized: f64,
}

pub fn twelfth_moment(t: f64, grid: &ZetaSampleGrid, epsilon: f64) -> Result<TwelfthMomentReport> {
    let value = power_integral(grid, t, 6)?;
    Ok(TwelfthMomentReport {
        t,
        value,
        normalized: value / t.powf(2.0 + epsilon),
    })
}

/// One dyadic class: maxima with V ≤ |ζ(½+iτ*)| < 2V.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DyadicClass {
    pub v: f64,
    pub count: u64,
}

/// Classification of unit-interval maxima of |ζ| over [T, 2T].
#[derive(Debug, Clone, Serialize)]
pub struct DyadicReport {
    pub t: f64,
    /// log T, the nominal large-value threshold.
    pub threshold: f64,
    /// Smallest admissible class label: the least power of 2 ≥ log T.
    /// Classes are whole octaves [V, 2V), so the classification boundary
    /// is octave-aligned; maxima in [log T, v_min) count as below.
    pub v_min: f64,
    pub windows: u64,
    pub below_threshold: u64,
    pub classes: Vec<DyadicClass>,
    pub max_abs_zeta: f64,
}

/// Per unit interval [T+r−1, T+r], take the grid maximum of |ζ(½+it)|;
/// maxima are partitioned into dyadic classes V ≤ |ζ| < 2V with V a
/// power of 2 at least log T.
pub fn dyadic_classes(t: f64, grid: &ZetaSampleGrid) -> Result<DyadicReport> {
    if grid.step() > 0.05 + 1e-12 {
        return Err(Error::Parameter(format!(
            "dyadic classification needs grid step <= 0.05, got {}",
            grid.step()
        )));
    }
    let windows = t.floor() as u64;
    if windows == 0 {
        return Err(Error::Parameter(format!("T = {t} below one window")));
    }
    grid.value_near(t + windows as f64)?; // coverage of the last window
    let h = grid.step();
    let samples = grid.samples();
    let threshold = t.ln();
    let v_min = 2f64.powi(threshold.log2().ceil() as i32);
    let mut below = 0u64;
    let mut by_exponent: std::collections::BTreeMap<i32, u64> = std::collections::BTreeMap::new();
    let mut max_abs = 0.0f64;
    for r in 1..=windows {
        let w_lo = t + (r - 1) as f64;
        let w_hi = t + r as f64;
        let i_lo = (w_lo / h).ceil() as usize;
        let i_hi = ((w_hi / h).floor() as usize).min(samples.len() - 1);
        let mut peak = 0.0f64;
        for &sample in &samples[i_lo..=i_hi] {
            peak = peak.max(sample);
        }
        let abs_zeta = peak.sqrt();
        max_abs = max_abs.max(abs_zeta);
        if abs_zeta < v_min {
            below += 1;
        } else {
            *by_exponent.entry(abs_zeta.log2().floor() as i32).or_insert(0) += 1;
        }
    }
    Ok(DyadicReport {
        t,
        threshold,
        v_min,
        windows,
        below_threshold: below,
        classes: by_exponent
            .into_iter()
            .map(|(m, count)| DyadicClass {
                v: 2f64.powi(m),
                count,
            })
            .collect(),
        max_abs_zeta: max_abs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn test_grid() -> ZetaSampleGrid {
        ZetaSampleGrid::build(0.0, 1310.0, 0.05).unwrap()
    }

    #[test]
    fn uniform_system_is_admissible_and_maximal() {
        let t = 600.0f64;
        let g = t.powf(0.25);
        let sys = PointSystem::uniform(t, g);
        sys.validate(DEFAULT_EPSILON).unwrap();
        assert_eq!(sys.points.len(), (t / (5.0 * g)).floor() as usize);
        // Exactly 5G apart, totally within (T, 2T].
        for w in sys.points.windows(2) {
            assert!((w[1] - w[0] - 5.0 * g).abs() < 1e-9);
        }
    }

    #[test]
    fn random_system_deterministic_per_seed() {
        let a = PointSystem::random(600.0, 5.0, 42);
        let b = PointSystem::random(600.0, 5.0, 42);
        let c = PointSystem::random(600.0, 5.0, 43);
        assert_eq!(a.points, b.points);
        assert_ne!(a.points, c.points);
        a.validate(DEFAULT_EPSILON).unwrap();
        c.validate(DEFAULT_EPSILON).unwrap();
    }

    #[test]
    fn greedy_system_admissible_and_peak_seeking() {
        let grid = test_grid();
        let t = 600.0f64;
        let g = t.powf(0.25);
        let sys = PointSystem::greedy_peaks(t, g, &grid).unwrap();
        sys.validate(DEFAULT_EPSILON).unwrap();
        // Its first-accepted point is the global range maximum, so the
        // greedy sum must be at least the uniform system's per-point max.
        assert!(!sys.points.is_empty());
    }

    #[test]
    fn validation_rejects_bad_systems() {
        let t = 600.0f64;
        let g = t.powf(0.25);
        let mut sys = PointSystem::uniform(t, g);
        sys.points[1] = sys.points[0] + 1.0; // separation violation
        assert!(matches!(sys.validate(0.05), Err(Error::PointSystem(_))));

        let mut outside = PointSystem::uniform(t, g);
        outside.points.push(2.0 * t + 1.0);
        assert!(outside.validate(0.05).is_err());

        let narrow = PointSystem::uniform(t, 1.0); // G below T^{0.25}
        assert!(narrow.validate(0.05).is_err());
    }

    #[test]
    fn short_integral_vanishes_with_window() {
        let grid = test_grid();
        let at = |g: f64| short_integral(700.0, g, &grid).unwrap();
        assert!(at(1e-4) < at(0.1));
        assert!(at(0.1) < at(10.0));
        assert!(at(1e-6) < 1e-4);
    }

    #[test]
    fn short_integral_window_additivity() {
        let grid = test_grid();
        let t = 800.0f64;
        let g = 6.0;
        let whole = short_integral(t, g, &grid).unwrap();
        let left = grid.integral(t - g, t).unwrap();
        let right = grid.integral(t, t + g).unwrap();
        assert!((whole - left - right).abs() < 1e-9 * whole.max(1.0));
    }

    #[test]
    fn short_integral_step_halving() {
        let coarse = ZetaSampleGrid::build(900.0, 1100.0, 0.05).unwrap();
        let fine = ZetaSampleGrid::build(900.0, 1100.0, 0.025).unwrap();
        let a = short_integral(1000.0, 10.0, &coarse).unwrap();
        let b = short_integral(1000.0, 10.0, &fine).unwrap();
        assert!((a - b).abs() / b < 0.005, "{a} vs {b}");
    }

    #[test]
    fn single_point_sum_is_fourth_power() {
        let grid = test_grid();
        let t = 600.0f64;
        let g = t.powf(0.25);
        let sys = PointSystem {
            t,
            g,
            generator: PointGenerator::Uniform,
            points: vec![t + 5.0 * g],
        };
        let report = fourth_power_sum(&sys, &grid, DEFAULT_EPSILON).unwrap();
        let single = short_integral(t + 5.0 * g, g, &grid).unwrap();
        assert!((report.sum - single.powi(4)).abs() < 1e-6 * report.sum);
        assert_eq!(report.r, 1);
        assert!(report.envelope > 0.0);
    }

    #[test]
    fn twelfth_moment_monotone_and_normalized() {
        let grid = test_grid();
        let a = twelfth_moment(500.0, &grid, DEFAULT_EPSILON).unwrap();
        let b = twelfth_moment(1000.0, &grid, DEFAULT_EPSILON).unwrap();
        assert!(b.value >= a.value);
        assert!(a.normalized > 0.0);
    }

    #[test]
    fn holder_chain_between_power_integrals() {
        let grid = test_grid();
        let t = 1000.0;
        let m2 = power_integral(&grid, t, 1).unwrap();
        let m4 = power_integral(&grid, t, 2).unwrap();
        let m12 = power_integral(&grid, t, 6).unwrap();
        assert!(m4 >= m2 * m2 / t * (1.0 - 1e-12));
        assert!(m12 >= m4.powi(3) / (t * t) * (1.0 - 1e-12));
    }

    #[test]
    fn dyadic_partition_identity() {
        let grid = test_grid();
        let report = dyadic_classes(600.0, &grid).unwrap();
        let classified: u64 = report.classes.iter().map(|c| c.count).sum();
        assert_eq!(classified + report.below_threshold, report.windows);
        assert_eq!(report.windows, 600);
        // Dyadic labels genuinely partition: each class V is a power of 2.
        for c in &report.classes {
            assert_eq!(c.v.log2().fract(), 0.0);
        }
    }

    #[test]
    fn dyadic_rejects_coarse_grid() {
        let grid = ZetaSampleGrid::build(0.0, 800.0, 0.1).unwrap();
        assert!(dyadic_classes(300.0, &grid).is_err());
    }
}
