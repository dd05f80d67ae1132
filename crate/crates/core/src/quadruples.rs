//! Exact counting of near-coincident k-th-root quadruples: the number
//! of ordered (n₁,n₂,n₃,n₄) in (N, 2N]⁴ with
//! |n₁^{1/k} + n₂^{1/k} − n₃^{1/k} − n₄^{1/k}| < δ·N^{1/k},
//! compared against the envelope N^ε(N⁴δ + N²).
//!
//! All N² pair sums n₁^{1/k} + n₂^{1/k} are formed, sorted once, and
//! near-coincident pairs are counted by a sliding-window sweep:
//! O(N² log N) time, O(N²) memory. The count is exact as a count of
//! floating-point comparisons; ties within 1e-12 of the threshold are
//! counted and flagged separately, since n^{1/k} in f64 cannot resolve
//! exact algebraic coincidences at the boundary.

use crate::error::{Error, Result};
use serde::Serialize;

/// Largest accepted N; N = 1500 already means ~2.25e6 pair sums.
pub const DEFAULT_N_CAP: u64 = 1500;

/// Exponent ε₀ in the reported envelope N^ε(N⁴δ + N²).
pub const DEFAULT_ENVELOPE_EPSILON: f64 = 0.05;

/// Default harness bound on count/envelope; empirical, configurable.
pub const DEFAULT_RATIO_BOUND: f64 = 32.0;

/// Threshold half-width within which a pair difference counts as a tie.
pub const TIE_EPSILON: f64 = 1e-12;

/// One counting experiment: parameters, exact count, tie diagnostics,
/// envelope and their ratio.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct QuadrupleReport {
    pub n: u64,
    pub k: u32,
    pub delta: f64,
    pub count: u64,
    pub ties: u64,
    pub envelope: f64,
    pub ratio: f64,
}

/// Sorted pair sums n₁^{1/k} + n₂^{1/k} over (N, 2N]², reusable across
/// δ values.
#[derive(Debug, Clone)]
pub struct PairSums {
    n: u64,
    k: u32,
    threshold_scale: f64,
    sums: Vec<f64>,
}

impl PairSums {
    pub fn new(n: u64, k: u32) -> Result<Self> {
        Self::with_cap(n, k, DEFAULT_N_CAP)
    }

    pub fn with_cap(n: u64, k: u32, cap: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Parameter("N must be positive".into()));
        }
        if k < 2 {
            return Err(Error::Parameter(format!("k = {k} must be at least 2")));
        }
        if n > cap {
            return Err(Error::Sizing(format!(
                "N = {n} exceeds cap {cap} (pair-sum memory grows as N²)"
            )));
        }
        let roots: Vec<f64> = (n + 1..=2 * n)
            .map(|m| (m as f64).powf(1.0 / f64::from(k)))
            .collect();
        let mut sums = Vec::with_capacity((n * n) as usize);
        for a in &roots {
            for b in &roots {
                sums.push(a + b);
            }
        }
        sums.sort_unstable_by(|x, y| x.partial_cmp(y).unwrap());
        Ok(PairSums {
            n,
            k,
            threshold_scale: (n as f64).powf(1.0 / f64::from(k)),
            sums,
        })
    }

    /// Ordered pairs of pair sums closer than `threshold`, by a sliding
    /// window over the sorted array. Strict inequality on both sides.
    fn pairs_within(&self, threshold: f64) -> u64 {
        if threshold <= 0.0 {
            // |difference| < threshold is unsatisfiable; also keeps the
            // tie sweep at thresholds below TIE_EPSILON well-defined.
            return 0;
        }
        let sums = &self.sums;
        let mut count = 0u64;
        let mut lo = 0usize;
        let mut hi = 0usize;
        for (a, &s) in sums.iter().enumerate() {
            while hi < sums.len() && sums[hi] < s + threshold {
                hi += 1;
            }
            while sums[lo] <= s - threshold {
                lo += 1;
            }
            debug_assert!(lo <= a && a < hi);
            count += (hi - lo) as u64;
        }
        count
    }

    /// Exact quadruple count at a given δ, with tie diagnostics.
    pub fn count(&self, delta: f64) -> Result<(u64, u64)> {
        if !(delta > 0.0) {
            return Err(Error::Parameter(format!("delta = {delta} must be positive")));
        }
        let threshold = delta * self.threshold_scale;
        let count = self.pairs_within(threshold);
        let ties =
            self.pairs_within(threshold + TIE_EPSILON) - self.pairs_within(threshold - TIE_EPSILON);
        Ok((count, ties))
    }

    pub fn report(&self, delta: f64, epsilon: f64) -> Result<QuadrupleReport> {
        let (count, ties) = self.count(delta)?;
        let nf = self.n as f64;
        let envelope = nf.powf(epsilon) * (nf.powi(4) * delta + nf * nf);
        Ok(QuadrupleReport {
            n: self.n,
            k: self.k,
            delta,
            count,
            ties,
            envelope,
            ratio: count as f64 / envelope,
        })
    }
}

/// Count quadruples for a single (N, k, δ) with default cap and ε₀.
pub fn count_quadruples(n: u64, k: u32, delta: f64) -> Result<QuadrupleReport> {
    PairSums::new(n, k)?.report(delta, DEFAULT_ENVELOPE_EPSILON)
}

/// Sweep the bound over grids of N, k and δ; each report's ratio is
/// checked against `ratio_bound`. Returns all reports and whether every
/// ratio stayed within the bound.
pub fn verify_quadruple_bound(
    ns: &[u64],
    ks: &[u32],
    deltas: &[f64],
    epsilon: f64,
    ratio_bound: f64,
) -> Result<(Vec<QuadrupleReport>, bool)> {
    let mut reports = Vec::with_capacity(ns.len() * ks.len() * deltas.len());
    let mut all_ok = true;
    for &n in ns {
        for &k in ks {
            let pairs = PairSums::new(n, k)?;
            for &delta in deltas {
                let report = pairs.report(delta, epsilon)?;
                all_ok &= report.ratio <= ratio_bound;
                reports.push(report);
            }
        }
    }
    Ok((reports, all_ok))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// O(N⁴) reference count, with float operations arranged exactly as
    /// in the pair-sum sweep.
    fn brute_force(n: u64, k: u32, delta: f64) -> u64 {
        let roots: Vec<f64> = (n + 1..=2 * n)
            .map(|m| (m as f64).powf(1.0 / f64::from(k)))
            .collect();
        let threshold = delta * (n as f64).powf(1.0 / f64::from(k));
        let mut count = 0u64;
        for a in &roots {
            for b in &roots {
                let s = a + b;
                for c in &roots {
                    for d in &roots {
                        if (s - (c + d)).abs() < threshold {
                            count += 1;
                        }
                    }
                }
            }
        }
        count
    }

    #[test]
    fn wide_window_counts_everything() {
        // δ·N^{1/k} beyond the whole pair-sum spread ⇒ count = N⁴.
        let n = 9u64;
        for k in [2u32, 3] {
            let report = count_quadruples(n, k, 4.0).unwrap();
            assert_eq!(report.count, n.pow(4));
        }
    }

    #[test]
    fn vanishing_delta_leaves_diagonal() {
        // k = 2: square roots of integers in a dyadic block admit no
        // nontrivial additive coincidences, so only multiset-equal pairs
        // remain: 2N² − N ordered quadruples.
        let n = 12u64;
        let report = count_quadruples(n, 2, 1e-13).unwrap();
        assert_eq!(report.count, 2 * n * n - n);
        assert_eq!(report.count, brute_force(n, 2, 1e-13));
    }

    #[test]
    fn matches_brute_force_at_moderate_size() {
        let (n, k, delta) = (50u64, 2u32, 1e-3);
        let report = count_quadruples(n, k, delta).unwrap();
        assert_eq!(report.count, brute_force(n, k, delta));
    }

    #[test]
    fn exhaustive_small_case_equivalence() {
        // Two-pointer sweep vs brute force for all N ≤ 20 (sampled),
        // k ∈ {2,3}, 12 geometric δ values.
        let deltas: Vec<f64> = (0..12).map(|i| 1e-4 * 10f64.powf(i as f64 / 2.75)).collect();
        for n in [1u64, 2, 3, 5, 8, 13, 17, 20] {
            for k in [2u32, 3] {
                let pairs = PairSums::new(n, k).unwrap();
                for &delta in &deltas {
                    let (count, _) = pairs.count(delta).unwrap();
                    assert_eq!(
                        count,
                        brute_force(n, k, delta),
                        "mismatch at N={n} k={k} delta={delta}"
                    );
                }
            }
        }
    }

    #[test]
    fn parameter_and_sizing_errors() {
        assert!(count_quadruples(0, 2, 0.1).is_err());
        assert!(count_quadruples(10, 1, 0.1).is_err());
        assert!(count_quadruples(10, 2, 0.0).is_err());
        assert!(PairSums::with_cap(100, 2, 50).is_err());
    }

    #[test]
    fn ratio_at_delta_one_dominated_by_fourth_power_branch() {
        let report = count_quadruples(32, 2, 1.0).unwrap();
        assert!(report.count <= 32u64.pow(4));
        assert!(report.ratio <= 1.0, "count/envelope = {}", report.ratio);
    }

    #[test]
    fn swept_bound_holds_on_small_grid() {
        let deltas = [1e-4, 1e-3, 1e-2, 1e-1];
        let (reports, ok) =
            verify_quadruple_bound(&[16, 32, 64], &[2, 3], &deltas, 0.05, DEFAULT_RATIO_BOUND)
                .unwrap();
        assert_eq!(reports.len(), 24);
        assert!(ok, "worst ratio {}", reports.iter().map(|r| r.ratio).fold(0.0, f64::max));
    }

    #[test]
    fn pair_role_symmetry_by_reversed_sweep() {
        // Counting (n1,n2) against (n3,n4) must equal counting with the
        // roles swapped; recompute with the window anchored on the other
        // side of each pair sum.
        let n = 12u64;
        let k = 2u32;
        let roots: Vec<f64> = (n + 1..=2 * n)
            .map(|m| (m as f64).powf(1.0 / f64::from(k)))
            .collect();
        let mut sums: Vec<f64> = Vec::new();
        for a in &roots {
            for b in &roots {
                sums.push(a + b);
            }
        }
        sums.sort_unstable_by(|x, y| x.partial_cmp(y).unwrap());
        for delta in [1e-3, 0.05, 0.4] {
            let threshold = delta * (n as f64).powf(1.0 / f64::from(k));
            let forward: u64 = sums
                .iter()
                .map(|&s| sums.iter().filter(|&&q| (q - s).abs() < threshold).count() as u64)
                .sum();
            let reversed: u64 = sums
                .iter()
                .rev()
                .map(|&s| sums.iter().filter(|&&q| (s - q).abs() < threshold).count() as u64)
                .sum();
            let (swept, _) = PairSums::new(n, k).unwrap().count(delta).unwrap();
            assert_eq!(forward, reversed);
            assert_eq!(forward, swept);
        }
    }

    #[test]
    fn boundary_ties_are_flagged() {
        // A threshold within TIE_EPSILON of the diagonal differences
        // (exact zeros) must flag them as ties.
        let n = 6u64;
        let pairs = PairSums::new(n, 2).unwrap();
        let delta = 0.5 * TIE_EPSILON / (n as f64).powf(0.5);
        let (count, ties) = pairs.count(delta).unwrap();
        assert!(ties > 0, "expected boundary ties, count = {count}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn count_bounds_and_monotonicity(
            n in 2u64..24,
            k in 2u32..4,
            idx in 0usize..6,
        ) {
            let deltas = [1e-4, 1e-3, 1e-2, 0.1, 0.5, 2.0];
            let pairs = PairSums::new(n, k).unwrap();
            let (count, _) = pairs.count(deltas[idx]).unwrap();
            prop_assert!(count >= 2 * n * n - n);
            prop_assert!(count <= n.pow(4));
            if idx > 0 {
                let (smaller, _) = pairs.count(deltas[idx - 1]).unwrap();
                prop_assert!(smaller <= count);
            }
        }
    }
}
