//! Error types shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong when building constellations, evaluating
/// rates or solving allocations.
#[derive(Debug, Error)]
pub enum Error {
    /// The requested constellation cardinality is not supported.
    #[error("invalid cardinality: {0}")]
    Cardinality(String),

    /// An input value lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Numerical-integration or rounding machinery produced a non-finite or
    /// inconsistent intermediate value.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// The dual bisection could not meet the requested tolerance.
    #[error("solver failed to converge: {0}")]
    Convergence(String),

    /// Malformed configuration (quadrature/Monte-Carlo specs, allocation
    /// problem shape).
    #[error("invalid configuration: {0}")]
    Spec(String),
}

impl Error {
    pub(crate) fn cardinality(msg: impl Into<String>) -> Self {
        Error::Cardinality(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }

    pub(crate) fn spec(msg: impl Into<String>) -> Self {
        Error::Spec(msg.into())
    }
}
