use thiserror::Error;

/// Errors for the whole crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    BadDegree,
    #[error("field size {0} exceeds the configured bound")]
    FieldTooLarge(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("inversion of zero field element")]
    ZeroInverse,
    #[error("inversion of non-unit ring element")]
    NonUnit,
    #[error("zero polynomial not allowed here")]
    ZeroPolynomial,
    #[error("modulus must be monic of degree >= 1, got {0}")]
    BadModulus(String),
    #[error("ring size {0} exceeds the configured bound")]
    RingTooLarge(u64),
    #[error("level {level} out of range 0..{max}")]
    LevelOutOfRange { level: usize, max: usize },
    #[error("matrix determinant {det} not allowed for variant {variant}")]
    BadDeterminant { det: String, variant: String },
    #[error("matrix is not invertible")]
    Singular,
    #[error("closure exceeded cap of {0} elements")]
    ClosureOverflow(usize),
    #[error("graph build exceeded budget of {0} vertices")]
    BudgetExceeded(usize),
    #[error("isomorphism search exceeded budget")]
    IsoBudgetExceeded,
    #[error("operation requires n >= 2, but deg(g) = {0}")]
    DegreeTooSmall(usize),
    #[error("operation requires a full-mode graph")]
    NeedsFullMode,
    #[error("vertex id {0} out of range")]
    BadVertexId(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("mismatched contexts: {0}")]
    CtxMismatch(String),
    #[error("integrity failure: {0}")]
    Integrity(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
