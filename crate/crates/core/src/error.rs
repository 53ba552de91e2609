use thiserror::Error;

use crate::fibers::FiberKind;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("carrier mismatch: expected size {expected}, found {found}")]
    CarrierMismatch { expected: usize, found: usize },

    #[error("fiber kind mismatch: {left} vs {right}")]
    KindMismatch { left: FiberKind, right: FiberKind },

    #[error("invalid fiber object: {0}")]
    InvalidObject(String),

    #[error("invalid map: {0}")]
    InvalidMap(String),

    #[error("invalid system: {0}")]
    InvalidSystem(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("type mismatch: {0}")]
    TypeMismatch(String),

    #[error("enumeration guard exceeded: {what} needs {needed} candidates, limit is {limit}")]
    GuardExceeded { what: String, needed: u128, limit: u128 },

    #[error("unsupported combination: {0}")]
    Unsupported(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("illegal move: {0}")]
    IllegalMove(String),

    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
