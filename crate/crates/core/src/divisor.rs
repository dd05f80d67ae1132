//! Exact divisor-function infrastructure: sieved d(n), 64-bit prefix
//! sums, the divisor error term Δ(x) and the alternating variant Δ*(x)
//! by two independent routes.
//!
//! Δ(x) is assembled as (exact integer prefix sum) − (smooth main term)
//! in double precision; the cancellation of size x·log x never passes
//! through floating summation of d(n). The alternating route carries a
//! −1/8 constant so that it agrees identically with the combination
//! route −Δ(x) + 2Δ(2x) − ½Δ(4x); the agreement is the module's core
//! test oracle.

use crate::error::{Error, Result};
use crate::EULER_GAMMA;
use serde::Serialize;

/// Default memory budget for sieve construction (bytes). A table costs
/// 12 bytes per entry (u32 divisor count + u64 prefix sum).
pub const DEFAULT_SIEVE_BUDGET: u64 = 4 << 30;

const BYTES_PER_ENTRY: u64 = 12;

/// Which formula produced a [`DeltaValue`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DeltaRoute {
    /// Prefix-sum definition of Δ(x).
    #[serde(rename = "exact-1.1")]
    Exact,
    /// Δ*(x) as −Δ(x) + 2Δ(2x) − ½Δ(4x).
    #[serde(rename = "combination-1.3")]
    Combination,
    /// Δ*(x) from the alternating divisor sum over n ≤ 4x.
    #[serde(rename = "alternating-1.4")]
    Alternating,
    /// Truncated oscillating-series approximation.
    #[serde(rename = "voronoi")]
    Voronoi,
}

impl std::fmt::Display for DeltaRoute {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            DeltaRoute::Exact => "exact-1.1",
            DeltaRoute::Combination => "combination-1.3",
            DeltaRoute::Alternating => "alternating-1.4",
            DeltaRoute::Voronoi => "voronoi",
        };
        f.write_str(s)
    }
}

/// A divisor error-term evaluation tagged with the route that produced it.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DeltaValue {
    pub x: f64,
    pub value: f64,
    pub route: DeltaRoute,
}

/// Sieved divisor counts d(1..=limit) with exact cumulative sums.
///
/// `prefix[m]` = Σ_{n≤m} d(n) with full weight at n = m (right-continuous
/// prefix; sums over n ≤ x include n = x at integer x).
#[derive(Debug, Clone)]
pub struct DivisorTable {
    limit: u64,
    d: Vec<u32>,
    prefix: Vec<u64>,
}

impl DivisorTable {
    /// Sieve d(n) for n ≤ limit and accumulate prefix sums.
    /// Cost O(limit · log limit); memory 12 bytes per entry.
    pub fn sieve(limit: u64) -> Result<Self> {
        Self::sieve_with_budget(limit, DEFAULT_SIEVE_BUDGET)
    }

    /// As [`DivisorTable::sieve`] with an explicit memory budget in bytes.
    pub fn sieve_with_budget(limit: u64, budget_bytes: u64) -> Result<Self> {
        if limit == 0 {
            return Err(Error::Sizing("limit must be at least 1".into()));
        }
        let needed = (limit + 1) * BYTES_PER_ENTRY;
        if needed > budget_bytes {
            return Err(Error::Sizing(format!(
                "limit {limit} needs {needed} bytes, budget is {budget_bytes} \
                 (max feasible limit {})",
                budget_bytes / BYTES_PER_ENTRY - 1
            )));
        }
        let n = limit as usize;
        let mut d = vec![0u32; n + 1];
        for i in 1..=n {
            let mut j = i;
            while j <= n {
                d[j] += 1;
                j += i;
            }
        }
        Ok(Self::from_divisor_counts(limit, d))
    }

    /// Rebuild a table from raw divisor counts (index 0 unused). Used by
    /// the cache loader, which re-derives and revalidates prefix sums.
    pub(crate) fn from_divisor_counts(limit: u64, d: Vec<u32>) -> Self {
        debug_assert_eq!(d.len() as u64, limit + 1);
        let mut prefix = vec![0u64; d.len()];
        for m in 1..d.len() {
            prefix[m] = prefix[m - 1] + u64::from(d[m]);
        }
        DivisorTable { limit, d, prefix }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// d(n). Panics if n is 0 or beyond the table.
    pub fn d(&self, n: u64) -> u32 {
        assert!(n >= 1 && n <= self.limit, "d({n}) outside table");
        self.d[n as usize]
    }

    pub(crate) fn divisor_counts(&self) -> &[u32] {
        &self.d
    }

    /// Σ_{n≤m} d(n).
    pub fn prefix(&self, m: u64) -> u64 {
        assert!(m <= self.limit, "prefix({m}) outside table");
        self.prefix[m as usize]
    }

    /// Σ_{n≤m} (−1)^n d(n), accumulated exactly in 64-bit integers.
    pub fn alternating_sum(&self, m: u64) -> i64 {
        assert!(m <= self.limit, "alternating_sum({m}) outside table");
        let mut acc: i64 = 0;
        for n in 1..=m as usize {
            let term = i64::from(self.d[n]);
            if n % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    /// Validate the table against the independently computed divisor
    /// summatory function (hyperbola method). Exact integer arithmetic.
    pub fn validate_hyperbola(&self) -> Result<()> {
        let expect = divisor_summatory(self.limit);
        let got = self.prefix[self.limit as usize];
        if got != expect {
            return Err(Error::Data(format!(
                "prefix[{}] = {got}, hyperbola identity gives {expect}",
                self.limit
            )));
        }
        Ok(())
    }

    fn require(&self, x: f64, required: u64) -> Result<()> {
        if required > self.limit {
            return Err(Error::TableUnderflow {
                x,
                required,
                actual: self.limit,
            });
        }
        Ok(())
    }
}

/// Σ_{n≤limit} ⌊limit/n⌋ by the hyperbola method, O(√limit). Serves as
/// the independent check on sieved prefix sums: both equal Σ_{n≤limit} d(n).
pub fn divisor_summatory(limit: u64) -> u64 {
    if limit == 0 {
        return 0;
    }
    let mut root = (limit as f64).sqrt() as u64;
    while (root + 1) * (root + 1) <= limit {
        root += 1;
    }
    while root * root > limit {
        root -= 1;
    }
    let mut sum = 0u64;
    for n in 1..=root {
        sum += limit / n;
    }
    2 * sum - root * root
}

fn main_term(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0; // continuous limit of x·log x
    }
    x * (x.ln() + 2.0 * EULER_GAMMA - 1.0)
}

/// Δ(x) = Σ_{n≤x} d(n) − x(log x + 2γ − 1) − 1/4.
///
/// Defined for all x ≥ 0; below 1 the prefix sum is empty and only the
/// smooth part remains, with the continuous limit −1/4 at x = 0.
pub fn delta(x: f64, table: &DivisorTable) -> Result<DeltaValue> {
    if !(x >= 0.0) {
        return Err(Error::Parameter(format!(
            "delta: x = {x} must be nonnegative"
        )));
    }
    let m = x.floor() as u64;
    table.require(x, m)?;
    let value = table.prefix(m) as f64 - main_term(x) - 0.25;
    Ok(DeltaValue {
        x,
        value,
        route: DeltaRoute::Exact,
    })
}

/// Δ*(x) = −Δ(x) + 2Δ(2x) − ½Δ(4x). Needs the table up to ⌊4x⌋.
pub fn delta_star_combination(x: f64, table: &DivisorTable) -> Result<DeltaValue> {
    if !(x >= 0.0) {
        return Err(Error::Parameter(format!(
            "delta_star: x = {x} must be nonnegative"
        )));
    }
    table.require(x, (4.0 * x).floor() as u64)?;
    let value = -delta(x, table)?.value + 2.0 * delta(2.0 * x, table)?.value
        - 0.5 * delta(4.0 * x, table)?.value;
    Ok(DeltaValue {
        x,
        value,
        route: DeltaRoute::Combination,
    })
}

/// Δ*(x) from the alternating divisor sum:
/// ½ Σ_{n≤4x} (−1)^n d(n) − x(log x + 2γ − 1) − 1/8.
///
/// The −1/8 makes this route agree exactly (in real arithmetic) with
/// [`delta_star_combination`]: expanding the combination route with the
/// −1/4 constant of Δ leaves −1/8 rather than 0.
pub fn delta_star_alternating(x: f64, table: &DivisorTable) -> Result<DeltaValue> {
    if !(x >= 0.0) {
        return Err(Error::Parameter(format!(
            "delta_star: x = {x} must be nonnegative"
        )));
    }
    let m = (4.0 * x).floor() as u64;
    table.require(x, m)?;
    let value = 0.5 * table.alternating_sum(m) as f64 - main_term(x) - 0.125;
    Ok(DeltaValue {
        x,
        value,
        route: DeltaRoute::Alternating,
    })
}
