//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A divisor table does not extend far enough for the requested point.
    #[error("table underflow: x = {x} requires limit >= {required}, table has {actual}")]
    TableUnderflow { x: f64, required: u64, actual: u64 },

    /// A sieve request is empty or exceeds the configured memory budget.
    #[error("sieve sizing: {0}")]
    Sizing(String),

    /// A sample grid does not cover the requested interval.
    #[error("grid covers [{have_start}, {have_end}], requested point {requested}")]
    Coverage {
        have_start: f64,
        have_end: f64,
        requested: f64,
    },

    /// An operation parameter is outside its documented range.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// An argument lies outside a formula's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A point system violates its separation or range conditions.
    #[error("point system error: {0}")]
    PointSystem(String),

    /// Input data contradicts an invariant (e.g. a nonpositive even-power
    /// moment), signalling an upstream bug rather than a user mistake.
    #[error("data error: {0}")]
    Data(String),

    /// A cache file failed its magic/length/consistency validation.
    #[error("corrupt cache file {path}: {reason}")]
    CacheCorrupt { path: String, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
