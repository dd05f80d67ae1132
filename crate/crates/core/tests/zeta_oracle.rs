#![allow(clippy::excessive_precision)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Independent verification of the critical-line evaluator.
//!
//! The oracle here is a second Euler–Maclaurin implementation, written
//! against the textbook formula with its own term-count policy and no
//! shared code with the library's evaluator. It is accurate to ~1e-12
//! over the range tested, so it checks both the library's Euler–Maclaurin
//! branch (t < 30) and the Riemann–Siegel branch (t ≥ 30) at the size of
//! their respective truncation errors.

use num_complex::Complex64;
use zdl_core::zeta::{e_quadrature, hardy_z, zeta_half, ZetaSampleGrid};

/// B_{2k}/(2k)! for k = 1..=12.
const BERN: [f64; 12] = [
    8.333333333333333e-2,
    -1.388888888888889e-3,
    3.306878306878307e-5,
    -8.267195767195768e-7,
    2.08767569878681e-8,
    -5.284190138687493e-10,
    1.3382536530684679e-11,
    -3.3896802963225832e-13,
    8.586062056277845e-15,
    -2.1748686985580617e-16,
    5.5090028283602295e-18,
    -1.3954464685812522e-19,
];

/// Euler–Maclaurin ζ(½+it) with a deliberately generous direct sum:
/// N = max(64, 3t). Structured differently from the library routine
/// (explicit polar powers, reversed-order summation).
fn oracle_zeta_half(t: f64) -> Complex64 {
    let s = Complex64::new(0.5, t);
    let n = (3.0 * t.abs()).ceil().max(64.0) as usize;
    let nf = n as f64;
    // Direct terms summed smallest-first.
    let mut direct = Complex64::new(0.0, 0.0);
    for j in (1..n).rev() {
        let jf = j as f64;
        let magnitude = jf.powf(-0.5);
        let phase = -t * jf.ln();
        direct += Complex64::new(magnitude * phase.cos(), magnitude * phase.sin());
    }
    let n_minus_s = Complex64::new(nf.powf(-0.5) * (t * nf.ln()).cos(), -nf.powf(-0.5) * (t * nf.ln()).sin());
    let mut total = direct + n_minus_s * (nf / (s - 1.0) + 0.5);
    let mut pole_product = s;
    let mut n_power = n_minus_s / nf;
    for (k, &coefficient) in BERN.iter().enumerate() {
        total += n_power * pole_product * coefficient;
        let step = 2.0 * (k + 1) as f64;
        pole_product = pole_product * (s + (step - 1.0)) * (s + step);
        n_power /= nf * nf;
    }
    total
}

#[test]
fn oracle_agrees_with_external_references() {
    // (t, re, im) computed with 25-digit arithmetic externally.
    let cases = [
        (0.0, -1.460354508809586812889499, 0.0),
        (10.0, 1.5448952202967528, -0.11533646527127338),
        (25.0, 0.0049845933640356754, -0.014012301962583383),
        (100.0, 2.6926198856813241, -0.020386029602598162),
        (1000.0, 0.35633436719439606, 0.93199783123299367),
    ];
    for (t, re, im) in cases {
        let z = oracle_zeta_half(t);
        assert!(
            (z.re - re).abs() < 1e-10 && (z.im - im).abs() < 1e-10,
            "oracle at t = {t}: {z} vs ({re}, {im})"
        );
    }
}

#[test]
fn euler_maclaurin_branch_matches_oracle() {
    let mut t = 0.25;
    while t < 30.0 {
        let lib = zeta_half(t);
        let oracle = oracle_zeta_half(t);
        assert!(
            (lib - oracle).norm() < 1e-9,
            "t = {t}: library {lib} vs oracle {oracle}"
        );
        t += 0.93;
    }
}

#[test]
fn riemann_siegel_branch_within_correction_error() {
    // The default C0 correction leaves an error of order the next
    // correction term, ~0.07·(t/2π)^{-3/4} at these heights.
    let mut t = 31.0;
    while t < 2000.0 {
        let lib = zeta_half(t).norm();
        let oracle = oracle_zeta_half(t).norm();
        let allowance = 0.07 * (t / (2.0 * std::f64::consts::PI)).powf(-0.75);
        assert!(
            (lib - oracle).abs() < allowance,
            "t = {t}: |ζ| {lib} vs oracle {oracle}, allowance {allowance}"
        );
        t *= 1.37;
    }
}

#[test]
fn hardy_z_magnitude_consistent() {
    for t in [14.0, 33.0, 101.5, 642.0] {
        assert!(
            (hardy_z(t).abs() - zeta_half(t).norm()).abs() < 1e-10,
            "|Z| vs |ζ| at t = {t}"
        );
    }
}

#[test]
fn first_zero_by_oracle_sign_change() {
    let oracle_z = |t: f64| {
        // θ(t) via the asymptotic series; its error near t = 14 is ~1e-12.
        let theta = zdl_core::zeta::riemann_siegel_theta(t);
        (Complex64::from_polar(1.0, theta) * oracle_zeta_half(t)).re
    };
    let (mut lo, mut hi) = (14.0, 14.3);
    assert!(oracle_z(lo) * oracle_z(hi) < 0.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if oracle_z(lo) * oracle_z(mid) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let zero = 0.5 * (lo + hi);
    assert!(
        (zero - 14.13472514173469379045725).abs() < 1e-9,
        "first zero located at {zero}"
    );
    // The library evaluator vanishes there too.
    assert!(zeta_half(zero).norm() < 1e-6);
}

#[test]
fn mean_square_error_term_matches_external_quadrature() {
    // E(500) and E(1500) from adaptive 20-digit quadrature of |ζ|²:
    // 10.839887135426383 and -12.367217048865333. The grid-based E
    // carries the accumulated Riemann–Siegel bias, well under 1.
    let grid = ZetaSampleGrid::build(0.0, 1501.0, 0.05).unwrap();
    let cases = [(500.0, 10.839887135426383), (1500.0, -12.367217048865333)];
    for (t, reference) in cases {
        let e = e_quadrature(t, &grid).unwrap().value;
        assert!(
            (e - reference).abs() < 1.0,
            "E({t}) = {e} vs reference {reference}"
        );
    }
}
