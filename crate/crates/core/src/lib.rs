//! Cancelable fingerprint templates matched under a Groth16 proof.
//!
//! Minutiae become keyed K-NNS templates; the score matrix between an
//! enrolled and a query template feeds a threshold circuit, which is lowered
//! to R1CS and a QAP and proved over BN254. Templates live in a
//! content-addressed store and registrations in a hash-chained ledger.

pub mod algebra;
pub mod circuit;
pub mod constraint;
pub mod groth16;
pub mod matcher;
pub mod minutiae;
pub mod registry;
pub mod synthetic;
pub mod template;

use thiserror::Error;

pub use algebra::{AlgebraError, FieldElement, Polynomial, G1, G2};
pub use circuit::{build_threshold_circuit, Circuit, CircuitError, ThresholdCircuit, ThresholdCircuitSpec, Witness};
pub use constraint::{to_qap, to_qap_with, to_r1cs, ConstraintError, DomainKind, QAP, R1CS};
pub use groth16::{prove, setup, verify, Groth16Error, Proof, ProofEnvelope, ProvingKey, VerificationKey};
pub use matcher::{FixedPointLSM, MatchError, SimilarityMatrix};
pub use minutiae::{Minutia, MinutiaeError};
pub use registry::{Cid, Ledger, RegistryError, Store, UserKey};
pub use template::{make_template, CancelableTemplate, TemplateError, TemplateParams};

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Minutiae(#[from] MinutiaeError),
    #[error(transparent)]
    Template(#[from] TemplateError),
    #[error(transparent)]
    Match(#[from] MatchError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Constraint(#[from] ConstraintError),
    #[error(transparent)]
    Groth16(#[from] Groth16Error),
    #[error(transparent)]
    Registry(#[from] RegistryError),
}
