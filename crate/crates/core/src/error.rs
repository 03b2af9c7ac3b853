use num_bigint::BigUint;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A composite cofactor survived trial division and rho. Supply its
    /// factors through the factor cache or as hints.
    #[error("unfactored composite cofactor {cofactor}")]
    UnfactoredCofactor { cofactor: BigUint },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("size budget exceeded: {what} needs {needed} elements, limit is {limit}")]
    SizeBudgetExceeded {
        what: &'static str,
        needed: u128,
        limit: u128,
    },

    #[error("operation undefined at the zero element")]
    ZeroElement,

    #[error("{divisor} does not divide {value}")]
    DivisibilityViolation { divisor: u64, value: u64 },

    #[error("inadmissible quadratic: {0}")]
    InadmissibleQuadratic(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("checkpoint mismatch: {0}")]
    CheckpointMismatch(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
