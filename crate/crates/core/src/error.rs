use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid letter {0:?}: words use only '+' and '-'")]
    InvalidLetter(char),

    #[error("word length {len} exceeds the enumeration bound {bound}")]
    SizeExceeded { len: usize, bound: usize },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("basis mismatch: expected {expected}, found {found}")]
    BasisMismatch { expected: crate::exactalg::BasisTag, found: crate::exactalg::BasisTag },

    #[error("change of basis is not unitriangular at word {0}")]
    NotUnitriangular(String),

    #[error("variable tables differ")]
    VarTableMismatch,

    #[error("unknown variable {0:?}")]
    UnknownVariable(String),

    #[error("polynomial division is not exact")]
    NotDivisible,

    #[error("division by zero")]
    DivisionByZero,

    #[error("transition recursion falsified at step {step}: {detail}")]
    RecursionFalsified { step: usize, detail: String },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
