use super::prover::Proof;
use super::{Groth16Error, Reader};
use crate::algebra::FieldElement;

pub const ENVELOPE_MAGIC: &[u8; 4] = b"ZKFP";
pub const ENVELOPE_VERSION: u8 = 1;
/// Magic, version, circuit digest and public-input count.
pub const ENVELOPE_HEADER_BYTES: usize = 4 + 1 + 32 + 2;

/// Wire form of a proof: header, public inputs, then `A ‖ B ‖ C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofEnvelope {
    pub circuit_digest: [u8; 32],
    /// Excludes the constant one.
    pub public_inputs: Vec<FieldElement>,
    pub proof: Proof,
}

impl ProofEnvelope {
    /// Header plus proof, without the public-input values.
    pub const FIXED_BYTES: usize = ENVELOPE_HEADER_BYTES + Proof::BYTES;

    pub fn encoded_len(&self) -> usize {
        Self::FIXED_BYTES + 32 * self.public_inputs.len()
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>, Groth16Error> {
        let count = u16::try_from(self.public_inputs.len())
            .map_err(|_| Groth16Error::PublicInputCount { expected: u16::MAX as usize, found: self.public_inputs.len() })?;
        let mut out = Vec::with_capacity(self.encoded_len());
        out.extend_from_slice(ENVELOPE_MAGIC);
        out.push(ENVELOPE_VERSION);
        out.extend_from_slice(&self.circuit_digest);
        out.extend_from_slice(&count.to_le_bytes());
        for x in &self.public_inputs {
            out.extend_from_slice(&x.to_bytes());
        }
        out.extend_from_slice(&self.proof.to_bytes());
        Ok(out)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, Groth16Error> {
        let mut r = Reader::new(bytes);
        r.expect_magic(ENVELOPE_MAGIC, ENVELOPE_VERSION)?;
        let circuit_digest = r.array32()?;
        let count = r.u16()? as usize;
        let public_inputs = (0..count)
            .map(|_| Ok(FieldElement::from_bytes(&r.array32()?)?))
            .collect::<Result<Vec<_>, Groth16Error>>()?;
        let proof = Proof::from_bytes(r.take(Proof::BYTES)?)?;
        r.finish()?;
        Ok(ProofEnvelope { circuit_digest, public_inputs, proof })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{G1, G2};

    fn sample(n: u64) -> ProofEnvelope {
        let g = FieldElement::from_u64;
        ProofEnvelope {
            circuit_digest: [7; 32],
            public_inputs: (0..n).map(g).collect(),
            proof: Proof { a: G1::generator().mul(g(2)), b: G2::generator().mul(g(3)), c: G1::generator().mul(g(5)) },
        }
    }

    #[test]
    fn layout() {
        let e = sample(2);
        let b = e.to_bytes().unwrap();
        assert_eq!(b.len(), 167 + 64);
        assert_eq!(&b[..4], b"ZKFP");
        assert_eq!(b[4], 1);
        assert_eq!(&b[37..39], &[2, 0]);
        assert_eq!(ProofEnvelope::FIXED_BYTES, 167);
        assert_eq!(e.encoded_len(), b.len());
        assert_eq!(ProofEnvelope::from_bytes(&b).unwrap().to_bytes().unwrap(), b);
    }

    #[test]
    fn truncation_and_trailing_bytes() {
        let b = sample(1).to_bytes().unwrap();
        for cut in [0, 3, 5, 38, 60, b.len() - 1] {
            assert!(matches!(ProofEnvelope::from_bytes(&b[..cut]), Err(Groth16Error::Decode(_))), "cut {cut}");
        }
        let mut long = b.clone();
        long.push(0);
        assert!(ProofEnvelope::from_bytes(&long).is_err());
    }

    #[test]
    fn non_canonical_input_rejected() {
        let mut b = sample(1).to_bytes().unwrap();
        b[39..71].fill(0xff);
        assert!(ProofEnvelope::from_bytes(&b).is_err());
    }
}
