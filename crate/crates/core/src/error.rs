use thiserror::Error;

use crate::arith::FieldSpec;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("field mismatch: expected {expected}, found {found}")]
    FieldMismatch { expected: FieldSpec, found: FieldSpec },

    #[error("element is not a canonical member of {0}")]
    ForeignElement(FieldSpec),

    #[error("unsupported field: {0}")]
    UnsupportedField(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("polynomial is not homogeneous: {0}")]
    NotHomogeneous(String),

    #[error("degree mismatch: {0}")]
    Degree(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("enumeration budget exceeded: {required} points needed, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },

    #[error("search failed: {0}")]
    SearchFailed(String),

    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

impl Error {
    pub fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub fn dimension(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }
}
