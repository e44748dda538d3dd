use rand::{CryptoRng, RngCore};

use super::envelope::ProofEnvelope;
use super::keys::{ProvingKey, VerificationKey};
use super::{circuit_digest, Groth16Error};
use crate::algebra::{FieldElement, Gt, G1, G2};
use crate::circuit::Witness;
use crate::constraint::{ConstraintError, QAP};

/// `(A, B, C)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Proof {
    pub a: G1,
    pub b: G2,
    pub c: G1,
}

impl Proof {
    pub const BYTES: usize = 2 * G1::BYTES + G2::BYTES;

    /// `A ‖ B ‖ C`, compressed.
    pub fn to_bytes(&self) -> [u8; Self::BYTES] {
        let mut out = [0u8; Self::BYTES];
        out[..32].copy_from_slice(&self.a.to_bytes());
        out[32..96].copy_from_slice(&self.b.to_bytes());
        out[96..].copy_from_slice(&self.c.to_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, Groth16Error> {
        if bytes.len() != Self::BYTES {
            return Err(Groth16Error::Decode(format!("proof needs {} bytes, got {}", Self::BYTES, bytes.len())));
        }
        Ok(Proof { a: G1::from_bytes(&bytes[..32])?, b: G2::from_bytes(&bytes[32..96])?, c: G1::from_bytes(&bytes[96..])? })
    }
}

fn msm_prefix(bases: &[G1], s: &[FieldElement]) -> G1 {
    G1::msm(&G1::batch_affine(&bases[..s.len()]), s)
}

/// Fresh `u, v` are drawn from `rng` on every call.
pub fn prove<R: RngCore + CryptoRng>(pk: &ProvingKey, qap: &QAP, witness: &Witness, rng: &mut R) -> Result<Proof, Groth16Error> {
    if circuit_digest(qap) != pk.circuit_digest {
        return Err(Groth16Error::DigestMismatch);
    }
    let r1cs = qap.r1cs();
    if witness.len() < r1cs.witness_len() {
        return Err(ConstraintError::Shape(format!("witness has {} wires, need {}", witness.len(), r1cs.witness_len())).into());
    }
    let z = r1cs.assignment(witness);
    if !z[0].is_one() {
        return Err(Groth16Error::NotSatisfying);
    }
    let (a, b, h) = qap.prover_polynomials(&z)?;
    let (a, b, h) = (a.into_coeffs(), b.into_coeffs(), h.into_coeffs());
    if a.len() > pk.tau_g1.len() || b.len() > pk.tau_g1.len() || h.len() > pk.h_query.len() {
        return Err(Groth16Error::DegreeOverflow { needed: a.len().max(b.len()).max(h.len() + 1), available: pk.tau_g1.len() });
    }

    let u = FieldElement::random(rng);
    let v = FieldElement::random(rng);
    let tau_g1 = G1::batch_affine(&pk.tau_g1[..a.len().max(b.len())]);
    let tau_g2 = G2::batch_affine(&pk.tau_g2[..b.len()]);

    let proof_a = pk.alpha_g1 + G1::msm(&tau_g1[..a.len()], &a) + pk.delta_g1.mul(u);
    let proof_b = pk.beta_g2 + G2::msm(&tau_g2, &b) + pk.delta_g2.mul(v);
    let b_g1 = pk.beta_g1 + G1::msm(&tau_g1[..b.len()], &b) + pk.delta_g1.mul(v);
    let private = &z[pk.num_public + 1..];
    let proof_c = msm_prefix(&pk.l_query, private) + msm_prefix(&pk.h_query, &h) + proof_a.mul(v) + b_g1.mul(u)
        - pk.delta_g1.mul(u * v);
    Ok(Proof { a: proof_a, b: proof_b, c: proof_c })
}

/// `e(A, B) = e(α, β) · e(L̄, γ) · e(C, δ)` with `L̄ = Σ x_i·[L_i(τ)/γ]G1`, `x_0 = 1`.
///
/// `public` excludes the constant one.
pub fn verify(vk: &VerificationKey, proof: &Proof, public: &[FieldElement]) -> Result<bool, Groth16Error> {
    if public.len() + 1 != vk.ic.len() {
        return Err(Groth16Error::PublicInputCount { expected: vk.ic.len() - 1, found: public.len() });
    }
    if !(proof.a.is_valid() && proof.b.is_valid() && proof.c.is_valid()) {
        return Err(Groth16Error::Decode("proof element outside the prime-order subgroup".into()));
    }
    let l_bar = vk.ic[0] + G1::msm(&G1::batch_affine(&vk.ic[1..]), public);
    let check = Gt::multi_pairing(&[-proof.a, vk.alpha_g1, l_bar, proof.c], &[proof.b, vk.beta_g2, vk.gamma_g2, vk.delta_g2]);
    Ok(check.is_identity())
}

/// Checks the envelope's circuit binding, then verifies.
pub fn verify_envelope(vk: &VerificationKey, env: &ProofEnvelope) -> Result<bool, Groth16Error> {
    if env.circuit_digest != vk.circuit_digest {
        return Err(Groth16Error::DigestMismatch);
    }
    verify(vk, &env.proof, &env.public_inputs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{build_threshold_circuit, CircuitBuilder, ThresholdCircuit, ThresholdCircuitSpec};
    use crate::constraint::{to_qap, to_qap_with, to_r1cs, DomainKind};
    use crate::groth16::setup;
    use crate::matcher::FixedPointLSM;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn threshold(rows: usize, cols: usize, kind: DomainKind) -> (ThresholdCircuit, QAP) {
        let c = build_threshold_circuit(ThresholdCircuitSpec::new(rows, cols)).unwrap();
        let q = to_qap_with(&to_r1cs(&c.circuit), kind).unwrap();
        (c, q)
    }

    fn lsm(entries: &[u64]) -> FixedPointLSM {
        FixedPointLSM { rows: 1, cols: entries.len(), entries: entries.to_vec() }
    }

    #[test]
    fn three_entry_example_round_trips() {
        let mut rng = ChaCha20Rng::seed_from_u64(10);
        let (c, q) = threshold(1, 3, DomainKind::Consecutive);
        let (pk, vk) = setup(&q, 1, &mut rng).unwrap();
        let s = lsm(&[80, 90, 70]);
        let w = c.witness(&s, 75).unwrap();
        let proof = prove(&pk, &q, &w, &mut rng).unwrap();
        let public = c.public_values(&s, 75).unwrap();
        assert!(verify(&vk, &proof, &public).unwrap());
        let raised = c.public_values(&s, 76).unwrap();
        assert!(!verify(&vk, &proof, &raised).unwrap());
    }

    #[test]
    fn contributor_count_does_not_matter() {
        for contributors in [1, 3] {
            let mut rng = ChaCha20Rng::seed_from_u64(contributors as u64);
            let (c, q) = threshold(2, 2, DomainKind::Radix2);
            let (pk, vk) = setup(&q, contributors, &mut rng).unwrap();
            assert_eq!(vk.num_ic(), c.circuit.public_inputs().len());
            let s = FixedPointLSM { rows: 2, cols: 2, entries: vec![40, 60, 55, 45] };
            let proof = prove(&pk, &q, &c.witness(&s, 50).unwrap(), &mut rng).unwrap();
            assert!(verify(&vk, &proof, &c.public_values(&s, 50).unwrap()).unwrap());
        }
    }

    #[test]
    fn proofs_are_randomized() {
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        let (c, q) = threshold(1, 2, DomainKind::Radix2);
        let (pk, vk) = setup(&q, 1, &mut rng).unwrap();
        let s = lsm(&[70, 90]);
        let w = c.witness(&s, 60).unwrap();
        let p1 = prove(&pk, &q, &w, &mut rng).unwrap();
        let p2 = prove(&pk, &q, &w, &mut rng).unwrap();
        assert_ne!(p1.to_bytes(), p2.to_bytes());
        let public = c.public_values(&s, 60).unwrap();
        assert!(verify(&vk, &p1, &public).unwrap() && verify(&vk, &p2, &public).unwrap());
    }

    #[test]
    fn private_inputs_and_flipped_wires() {
        let mut rng = ChaCha20Rng::seed_from_u64(12);
        let mut b = CircuitBuilder::new();
        let x = b.public_input();
        let y = b.private_input();
        let s = b.mul(x, y);
        let t = b.add(s, y);
        b.output(t);
        let circuit = b.build();
        let q = to_qap(&to_r1cs(&circuit)).unwrap();
        let (pk, vk) = setup(&q, 2, &mut rng).unwrap();
        let w = circuit.generate_witness(&[FieldElement::from_u64(3)], &[FieldElement::from_u64(5)]).unwrap();
        let proof = prove(&pk, &q, &w, &mut rng).unwrap();
        assert!(verify(&vk, &proof, &[FieldElement::from_u64(3)]).unwrap());
        assert!(!verify(&vk, &proof, &[FieldElement::from_u64(4)]).unwrap());
        let bad = w.with_value(y, FieldElement::from_u64(6));
        assert_eq!(prove(&pk, &q, &bad, &mut rng), Err(Groth16Error::NotSatisfying));
        assert!(matches!(verify(&vk, &proof, &[]), Err(Groth16Error::PublicInputCount { expected: 1, found: 0 })));
    }

    #[test]
    fn wrong_circuit_is_refused() {
        let mut rng = ChaCha20Rng::seed_from_u64(13);
        let (_, q1) = threshold(1, 1, DomainKind::Radix2);
        let (c2, q2) = threshold(1, 2, DomainKind::Radix2);
        let (pk, _) = setup(&q1, 1, &mut rng).unwrap();
        let w = c2.witness(&lsm(&[50, 50]), 50).unwrap();
        assert_eq!(prove(&pk, &q2, &w, &mut rng), Err(Groth16Error::DigestMismatch));
    }

    #[test]
    fn proof_bytes_round_trip() {
        let mut rng = ChaCha20Rng::seed_from_u64(14);
        let (c, q) = threshold(1, 1, DomainKind::Radix2);
        let (pk, vk) = setup(&q, 1, &mut rng).unwrap();
        let s = lsm(&[90]);
        let proof = prove(&pk, &q, &c.witness(&s, 80).unwrap(), &mut rng).unwrap();
        let bytes = proof.to_bytes();
        assert_eq!(bytes.len(), 128);
        assert_eq!(Proof::from_bytes(&bytes).unwrap().to_bytes(), bytes);
        assert!(Proof::from_bytes(&bytes[..127]).is_err());
        let public = c.public_values(&s, 80).unwrap();
        for bit in [0usize, 7, 300, 777, 1000] {
            let mut flipped = bytes;
            flipped[bit / 8] ^= 1 << (bit % 8);
            match Proof::from_bytes(&flipped) {
                Ok(p) => assert!(!verify(&vk, &p, &public).unwrap(), "bit {bit}"),
                Err(e) => assert!(matches!(e, Groth16Error::Decode(_))),
            }
        }
    }
}
