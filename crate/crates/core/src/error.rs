use thiserror::Error;

/// Errors raised by constructions, checks and parsers in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument is outside the mathematical domain of the operation
    /// (inverse of zero, unreduced residue, zero generating vector, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Dimensions or lengths do not agree.
    #[error("shape error: {0}")]
    Shape(String),

    /// A truncated power series was asked for more coefficients than it holds.
    #[error("precision exceeded: need {needed} coefficients, only {available} available")]
    PrecisionExceeded { needed: usize, available: usize },

    /// The request is well-formed but too large for the exact engines.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// Malformed text input.
    #[error("parse error: {0}")]
    Parse(String),

    /// A structural invariant does not hold for user supplied data.
    #[error("invariant violated: {0}")]
    Invariant(String),

    /// A floor could not be resolved from the available bracketing.
    #[error("ambiguous floor: {0}")]
    Ambiguous(String),

    /// A certificate search cannot be decisive at the given precision.
    #[error("bound too large for precision: {0}")]
    Inconclusive(String),
}

pub type Result<T> = std::result::Result<T, Error>;
