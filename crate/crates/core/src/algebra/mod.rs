//! Scalar field, polynomials, curve groups and the pairing over BN254.
//!
//! Curve and pairing arithmetic are provided by arkworks; this module wraps
//! them in small value types with fixed byte encodings.

mod curve;
mod field;
mod group;
mod poly;

use thiserror::Error;

pub use curve::{validate_curve, BASE_MODULUS_HEX, G1_ORDER_HEX, SCALAR_MODULUS_HEX};
pub use field::FieldElement;
pub use group::{pairing, GroupElement, GroupTag, Gt, G1, G2};
pub use poly::Polynomial;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("inverse of zero")]
    DivisionByZero,
    #[error("division by the zero polynomial")]
    ZeroDivisor,
    #[error("duplicate interpolation point at index {0}")]
    DuplicatePoint(usize),
    #[error("group mismatch: expected {expected}, found {found}")]
    GroupMismatch { expected: GroupTag, found: GroupTag },
    #[error("decode: {0}")]
    Decode(String),
    #[error("curve parameters: {0}")]
    Curve(String),
}
