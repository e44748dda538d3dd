//! Groth16 over BN254: a simulated powers-of-tau ceremony, circuit-specific
//! key generation, proving, verification and wire encodings.

mod ceremony;
mod envelope;
mod keys;
mod prover;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::constraint::{ConstraintError, DomainKind, QAP};

pub use ceremony::{Ceremony, PowersOfTau};
pub use envelope::{ProofEnvelope, ENVELOPE_HEADER_BYTES, ENVELOPE_MAGIC, ENVELOPE_VERSION};
pub use keys::{setup, setup_from_ceremony, ProvingKey, ToxicParameters, VerificationKey, KEY_VERSION};
pub use prover::{prove, verify, verify_envelope, Proof};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Groth16Error {
    #[error("setup: {0}")]
    Setup(String),
    #[error("circuit needs powers of tau up to degree {needed}, ceremony has {available}")]
    DegreeOverflow { needed: usize, available: usize },
    #[error("witness does not satisfy the constraint system")]
    NotSatisfying,
    #[error("expected {expected} public inputs, found {found}")]
    PublicInputCount { expected: usize, found: usize },
    #[error("key, proof or circuit digests differ")]
    DigestMismatch,
    #[error("decode: {0}")]
    Decode(String),
    #[error(transparent)]
    Constraint(ConstraintError),
}

impl From<ConstraintError> for Groth16Error {
    fn from(e: ConstraintError) -> Self {
        match e {
            ConstraintError::NotSatisfying => Groth16Error::NotSatisfying,
            e => Groth16Error::Constraint(e),
        }
    }
}

impl From<AlgebraError> for Groth16Error {
    fn from(e: AlgebraError) -> Self {
        Groth16Error::Decode(e.to_string())
    }
}

/// Binds keys and proofs to one constraint system and evaluation domain.
pub fn circuit_digest(qap: &QAP) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(b"zkfp/circuit/v1");
    h.update([domain_tag(qap.domain_kind())]);
    h.update(qap.r1cs().to_bytes());
    h.finalize().into()
}

pub(crate) fn domain_tag(kind: DomainKind) -> u8 {
    match kind {
        DomainKind::Consecutive => 0,
        DomainKind::Radix2 => 1,
    }
}

pub(crate) fn domain_from_tag(tag: u8) -> Result<DomainKind, Groth16Error> {
    match tag {
        0 => Ok(DomainKind::Consecutive),
        1 => Ok(DomainKind::Radix2),
        t => Err(Groth16Error::Decode(format!("unknown domain tag {t}"))),
    }
}

/// Cursor over a byte buffer that reports truncation as a decode error.
pub(crate) struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    pub(crate) fn new(buf: &'a [u8]) -> Self {
        Reader { buf, pos: 0 }
    }

    pub(crate) fn take(&mut self, n: usize) -> Result<&'a [u8], Groth16Error> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.buf.len());
        let end = end.ok_or_else(|| Groth16Error::Decode(format!("truncated at byte {}", self.buf.len())))?;
        let s = &self.buf[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    pub(crate) fn u8(&mut self) -> Result<u8, Groth16Error> {
        Ok(self.take(1)?[0])
    }

    pub(crate) fn u16(&mut self) -> Result<u16, Groth16Error> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().expect("2 bytes")))
    }

    pub(crate) fn u32(&mut self) -> Result<usize, Groth16Error> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")) as usize)
    }

    pub(crate) fn array32(&mut self) -> Result<[u8; 32], Groth16Error> {
        Ok(self.take(32)?.try_into().expect("32 bytes"))
    }

    pub(crate) fn expect_magic(&mut self, magic: &[u8], version: u8) -> Result<(), Groth16Error> {
        if self.take(magic.len())? != magic {
            return Err(Groth16Error::Decode(format!("bad magic, expected {}", String::from_utf8_lossy(magic))));
        }
        let v = self.u8()?;
        if v != version {
            return Err(Groth16Error::Decode(format!("unsupported version {v}")));
        }
        Ok(())
    }

    pub(crate) fn finish(&self) -> Result<(), Groth16Error> {
        if self.pos != self.buf.len() {
            return Err(Groth16Error::Decode(format!("{} trailing bytes", self.buf.len() - self.pos)));
        }
        Ok(())
    }
}
