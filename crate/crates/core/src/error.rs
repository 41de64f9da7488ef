use thiserror::Error;

use crate::uniformity::StatKind;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("a sample needs at least 2 observations, got {len}")]
    EmptyOrSingleton { len: usize },

    #[error("observation {index} is not finite ({value})")]
    NonFiniteValue { index: usize, value: f64 },

    #[error("index {index} outside 1..={n}")]
    IndexOutOfRange { index: i64, n: usize },

    #[error("window size m={m} is invalid for n={n} (need {bound})")]
    WindowTooLarge { m: usize, n: usize, bound: &'static str },

    #[error("tied order statistics give a zero spacing at index {index}")]
    TiedSpacings { index: usize },

    #[error("sample has zero variance")]
    ZeroVariance,

    #[error("scale must be positive and finite, got {0}")]
    NonpositiveScale(f64),

    #[error("need at least {needed} observations, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("grid [{lo}, {hi}] with {points} points is invalid: {reason}")]
    InvalidGrid {
        lo: f64,
        hi: f64,
        points: usize,
        reason: &'static str,
    },

    #[error("grid misses {missing:.3e} of the density mass")]
    GridTooNarrow { missing: f64 },

    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("density estimate is zero or not finite at order statistic {index}")]
    DegenerateDensity { index: usize },

    #[error("observation {index} ({value}) lies outside [0, 1]")]
    OutOfUnitInterval { index: usize, value: f64 },

    #[error("no critical value for {kind} at n={n}")]
    MissingCriticalValue { kind: StatKind, n: usize },

    #[error("value {value} is outside the support of {model}")]
    DomainError { value: f64, model: String },

    #[error("maximum likelihood search did not converge: {0}")]
    NoConvergence(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    /// True for failures of the numerical procedure itself, as opposed to
    /// malformed input or configuration.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::TiedSpacings { .. }
                | Error::ZeroVariance
                | Error::GridTooNarrow { .. }
                | Error::DegenerateDensity { .. }
                | Error::NoConvergence(_)
        )
    }
}
