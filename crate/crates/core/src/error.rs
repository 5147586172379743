use thiserror::Error;

use crate::Rational;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid reference: {0}")]
    InvalidReference(String),
    #[error("inconsistent configuration: {0}")]
    InconsistentConfiguration(String),
    #[error("curve {id} is not contractible: self-intersection {square}")]
    NotContractible { id: String, square: Rational },
    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("not du Val: {0}")]
    NotDuVal(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
}
