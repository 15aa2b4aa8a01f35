use thiserror::Error;

use crate::parse::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the engine can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime below 2^32")]
    NotPrime(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("characteristics differ: {0} vs {1}")]
    FieldMismatch(u64, u64),
    #[error("truncation orders differ: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("truncation order must be at least {min}, got {got}")]
    OrderTooSmall { min: usize, got: usize },
    #[error("not a p^{exponent}-th power")]
    NotAPthPower { exponent: u32 },
    #[error("series has a nonzero constant term")]
    NonzeroConstantTerm,
    #[error("series is not compositionally invertible (needs c0 = 0 and c1 != 0)")]
    NotInvertible,
    #[error("generator image must have constant term s")]
    InvalidGenerator,
    #[error("no nonzero component below order {order}; cannot decide whether the element is constant")]
    TruncationInconclusive { order: usize },
    #[error("derivation violates the level pattern at index {index}")]
    NotIterative { index: usize },
    #[error("theta^(1)(t) = 0, cannot normalize")]
    NotNormalizable,
    #[error("witness is constant")]
    ConstantWitness,
    #[error("recovered substitution does not reproduce the target derivation")]
    Inconsistent,
    #[error("derivation is trivial below order {order}")]
    TrivialDerivation { order: usize },
    #[error("module matrix is malformed: {0}")]
    InvalidModule(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("variable `{0}` is not allowed here")]
    UnexpectedVariable(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "NotPrime",
            Error::DivisionByZero => "DivisionByZero",
            Error::FieldMismatch(..) => "FieldMismatch",
            Error::OrderMismatch(..) => "OrderMismatch",
            Error::OrderTooSmall { .. } => "OrderTooSmall",
            Error::NotAPthPower { .. } => "NotAPthPower",
            Error::NonzeroConstantTerm => "NonzeroConstantTerm",
            Error::NotInvertible => "NotInvertible",
            Error::InvalidGenerator => "InvalidGenerator",
            Error::TruncationInconclusive { .. } => "TruncationInconclusive",
            Error::NotIterative { .. } => "NotIterative",
            Error::NotNormalizable => "NotNormalizable",
            Error::ConstantWitness => "ConstantWitness",
            Error::Inconsistent => "Inconsistent",
            Error::TrivialDerivation { .. } => "TrivialDerivation",
            Error::InvalidModule(_) => "InvalidModule",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::UnexpectedVariable(_) => "UnexpectedVariable",
            Error::Parse(_) => "ParseError",
        }
    }
}
