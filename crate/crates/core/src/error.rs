use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("operator is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("operator has a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("operator is not Hermitian: max |M - M^H| = {violation:e}")]
    NotHermitian { violation: f64 },

    #[error("Hermitian eigensolver did not converge within {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("function undefined on spectrum: offending eigenvalue {eigenvalue:e}")]
    Domain { eigenvalue: f64 },

    #[error("not a valid density matrix: {0}")]
    InvalidState(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("consistency check `{check}` failed: {lhs:e} vs {rhs:e}")]
    Consistency { check: &'static str, lhs: f64, rhs: f64 },

    #[error("configuration error in `{field}`: {reason}")]
    Config { field: String, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
