//! Rank-1 constraint systems and quadratic arithmetic programs.

mod qap;
mod r1cs;

use thiserror::Error;

pub use qap::{to_qap, to_qap_with, DomainKind, Matrix, QapEvaluation, QAP};
pub use r1cs::{check_satisfaction, to_r1cs, Constraint, LinearCombination, R1CS, R1CS_MAGIC, R1CS_VERSION};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstraintError {
    #[error("assignment does not satisfy the constraint system")]
    NotSatisfying,
    #[error("constraint system has no constraints")]
    Empty,
    #[error("shape: {0}")]
    Shape(String),
    #[error("decode: {0}")]
    Decode(String),
}
