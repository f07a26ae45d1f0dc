use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// The 1/z connection formula was requested with `a - b` an integer.
    #[error("degenerate connection: a - b = {0} is an integer (logarithmic case)")]
    DegenerateConnection(f64),

    /// A series or iteration failed to converge within its budget.
    #[error("no convergence: {0}")]
    NoConvergence(String),

    /// A point is not strictly inside the unit ball.
    #[error("invalid ball point: |z|^2 = {0}")]
    InvalidPoint(f64),

    /// A matrix fails to preserve the Hermitian form of signature (n, 1).
    #[error("invalid isometry: {0}")]
    InvalidIsometry(String),

    /// Dimensions of two objects do not match.
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// Numerical differentiation or extrapolation failed.
    #[error("numerical error: {0}")]
    Numerical(String),

    /// Input file could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
