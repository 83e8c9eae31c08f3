use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid basis: {0}")]
    InvalidBasis(String),

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("operands are defined over different bases")]
    BasisMismatch,

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("matrix is not positive semidefinite (pivot {pivot:e} in column {column})")]
    NotPositiveSemidefinite { column: usize, pivot: f64 },

    #[error("weak mode requires a Cholesky factor; assemble the model with one")]
    MissingCholesky,

    #[error("parity relation violated (max deviation {0:e})")]
    ParityViolation(f64),

    #[error("zero denominator in the exponent-shift formula; use the power-spectrum recurrence for integer exponents")]
    ShiftDenominatorZero,

    #[error("convergence rate is undefined for constant error values")]
    DegenerateRate,

    #[error("numeric consistency failure: {0}")]
    Inconsistent(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
