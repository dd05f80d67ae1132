//! Report emission: CSV with comma delimiter and '.' decimal separator,
//! and two-column whitespace plot data with a comment header. Floats are
//! rendered with Rust's shortest-roundtrip formatter, so identical runs
//! produce byte-identical reports.

use crate::divisor::DeltaValue;
use crate::explicit::SeriesResult;
use crate::moments::MomentSuiteRow;
use crate::quadruples::QuadrupleReport;
use crate::short_interval::{DyadicReport, FourthPowerSumReport};
use crate::smoothing::{DeltaStarSmoothingReport, SandwichReport};
use crate::zeta::EValue;

/// Rows of Δ/Δ* evaluations: x, route, value.
pub fn delta_csv(rows: &[DeltaValue]) -> String {
    let mut out = String::from("x,route,value\n");
    for r in rows {
        out.push_str(&format!("{},{},{}\n", r.x, r.route, r.value));
    }
    out
}

/// Rows of E(T) evaluations by any route: T, route, value, N,
/// error_envelope. For quadrature rows N and the envelope are empty.
pub fn e_routes_csv(rows: &[(EValue, Option<(f64, f64)>)]) -> String {
    let mut out = String::from("T,route,value,N,error_envelope\n");
    for (e, extra) in rows {
        match extra {
            Some((n, envelope)) => {
                out.push_str(&format!("{},{},{},{},{}\n", e.t, e.route, e.value, n, envelope))
            }
            None => out.push_str(&format!("{},{},{},,\n", e.t, e.route, e.value)),
        }
    }
    out
}

/// Rows of truncated-series evaluations: x, route, value, N,
/// error_envelope.
pub fn series_csv(rows: &[(f64, &str, SeriesResult)]) -> String {
    let mut out = String::from("x,route,value,N,error_envelope\n");
    for (x, route, s) in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            x, route, s.value, s.truncation, s.error_envelope
        ));
    }
    out
}

/// Smoothing reports: T, G, sign, lhs, rhs_avg, envelope, pass.
pub fn sandwich_csv(rows: &[SandwichReport]) -> String {
    let mut out = String::from("T,G,sign,lhs,rhs_avg,envelope,pass\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},plus,{},{},{},{}\n",
            r.t, r.g, r.e_at_t, r.upper_average, r.envelope, r.holds
        ));
        out.push_str(&format!(
            "{},{},minus,{},{},{},{}\n",
            r.t, r.g, r.e_at_t, r.lower_average, r.envelope, r.holds
        ));
    }
    out
}

pub fn delta_star_smoothing_csv(rows: &[DeltaStarSmoothingReport]) -> String {
    let mut out = String::from("T,G,sign,lhs,rhs_avg,envelope,pass\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},plus,{},{},{},{}\n",
            r.t, r.g, r.delta_star_at_t, r.average_plus, r.envelope, r.residual_plus <= r.envelope
        ));
        out.push_str(&format!(
            "{},{},minus,{},{},{},{}\n",
            r.t,
            r.g,
            r.delta_star_at_t,
            r.average_minus,
            r.envelope,
            r.residual_minus <= r.envelope
        ));
    }
    out
}

/// Moment scan samples: quantity, k, T, integral.
pub fn moment_samples_csv(quantity: &str, k: u32, samples: &[(f64, f64)]) -> String {
    let mut out = String::from("quantity,k,T,integral\n");
    for (t, v) in samples {
        out.push_str(&format!("{quantity},{k},{t},{v}\n"));
    }
    out
}

/// Moment suite summary rows.
pub fn moment_suite_csv(rows: &[MomentSuiteRow]) -> String {
    let mut out = String::from(
        "quantity,k,fitted_slope,expected_slope,slope_low,slope_high,slope_pass,\
         leading_coefficient,coefficient_expected,coefficient_rel_error,coefficient_pass,\
         residual_rms\n",
    );
    for r in rows {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        let optb = |v: Option<bool>| v.map(|x| x.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.quantity,
            r.power,
            r.fitted_slope,
            r.expected_slope,
            r.slope_low,
            r.slope_high,
            r.slope_pass,
            r.leading_coefficient,
            opt(r.coefficient_expected),
            opt(r.coefficient_rel_error),
            optb(r.coefficient_pass),
            r.residual_rms
        ));
    }
    out
}

/// Quadruple reports: N, k, delta, count, envelope, ratio, ties.
pub fn quadruples_csv(rows: &[QuadrupleReport]) -> String {
    let mut out = String::from("N,k,delta,count,envelope,ratio,ties\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.n, r.k, r.delta, r.count, r.envelope, r.ratio, r.ties
        ));
    }
    out
}

/// Fourth-power sum reports: T, G, R, sum, envelope, ratio.
pub fn fourth_power_csv(rows: &[FourthPowerSumReport]) -> String {
    let mut out = String::from("T,G,R,sum,envelope,ratio\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.t, r.g, r.r, r.sum, r.envelope, r.ratio
        ));
    }
    out
}

/// Dyadic classes: T, V, R_V.
pub fn dyadic_csv(report: &DyadicReport) -> String {
    let mut out = String::from("T,V,R_V\n");
    for c in &report.classes {
        out.push_str(&format!("{},{},{}\n", report.t, c.v, c.count));
    }
    out
}

/// Two-column whitespace plot data with a comment header.
pub fn plot_data(comment: &str, samples: &[(f64, f64)]) -> String {
    let mut out = format!("# {comment}\n");
    for (x, y) in samples {
        out.push_str(&format!("{x} {y}\n"));
    }
    out
}
