use rand::{CryptoRng, RngCore};
use sha2::{Digest, Sha256};

use super::ceremony::Ceremony;
use super::{circuit_digest, domain_from_tag, domain_tag, Groth16Error, Reader};
use crate::algebra::{FieldElement, G1, G2};
use crate::constraint::{DomainKind, QAP};

pub const KEY_VERSION: u8 = 1;
const PK_MAGIC: &[u8; 4] = b"ZKPK";
const VK_MAGIC: &[u8; 4] = b"ZKVK";

/// `τ, α, β, γ, δ`. Lives only inside setup and is zeroed on drop.
pub struct ToxicParameters {
    tau: FieldElement,
    alpha: FieldElement,
    beta: FieldElement,
    gamma: FieldElement,
    delta: FieldElement,
}

impl ToxicParameters {
    fn sample<R: RngCore + CryptoRng>(tau: FieldElement, rng: &mut R) -> Self {
        ToxicParameters {
            tau,
            alpha: FieldElement::random_nonzero(rng),
            beta: FieldElement::random_nonzero(rng),
            gamma: FieldElement::random_nonzero(rng),
            delta: FieldElement::random_nonzero(rng),
        }
    }
}

impl Drop for ToxicParameters {
    fn drop(&mut self) {
        for v in [&mut self.tau, &mut self.alpha, &mut self.beta, &mut self.gamma, &mut self.delta] {
            *v = FieldElement::zero();
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProvingKey {
    pub(crate) circuit_digest: [u8; 32],
    pub(crate) domain: DomainKind,
    pub(crate) num_variables: usize,
    pub(crate) num_public: usize,
    pub(crate) alpha_g1: G1,
    pub(crate) beta_g1: G1,
    pub(crate) beta_g2: G2,
    pub(crate) delta_g1: G1,
    pub(crate) delta_g2: G2,
    /// `[τ^k]G1`, `k` below the domain size.
    pub(crate) tau_g1: Vec<G1>,
    pub(crate) tau_g2: Vec<G2>,
    /// `[L_i(τ)/δ]G1` for the private variables `l+1..n`.
    pub(crate) l_query: Vec<G1>,
    /// `[τ^i·Z(τ)/δ]G1`, `i ≤ d − 2`.
    pub(crate) h_query: Vec<G1>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationKey {
    pub(crate) circuit_digest: [u8; 32],
    pub(crate) alpha_g1: G1,
    pub(crate) beta_g2: G2,
    pub(crate) gamma_g2: G2,
    pub(crate) delta_g2: G2,
    /// `[L_i(τ)/γ]G1` for `i = 0..=l`.
    pub(crate) ic: Vec<G1>,
}

/// Runs a fresh ceremony sized to the circuit, then specializes it.
pub fn setup<R: RngCore + CryptoRng>(
    qap: &QAP,
    contributors: usize,
    rng: &mut R,
) -> Result<(ProvingKey, VerificationKey), Groth16Error> {
    let ceremony = Ceremony::run(qap.domain_size(), contributors, rng)?;
    setup_from_ceremony(qap, &ceremony, rng)
}

pub fn setup_from_ceremony<R: RngCore + CryptoRng>(
    qap: &QAP,
    ceremony: &Ceremony,
    rng: &mut R,
) -> Result<(ProvingKey, VerificationKey), Groth16Error> {
    let d = qap.domain_size();
    let powers = ceremony.powers();
    if powers.degree() < d {
        return Err(Groth16Error::DegreeOverflow { needed: d, available: powers.degree() });
    }
    if !powers.check(rng) {
        return Err(Groth16Error::Setup("powers of tau failed the pairing consistency check".into()));
    }
    let toxic = ToxicParameters::sample(ceremony.tau(), rng);
    let ev = qap.evaluate_at(toxic.tau);
    if ev.z.is_zero() {
        return Err(Groth16Error::Setup("tau landed on the evaluation domain".into()));
    }
    let gamma_inv = toxic.gamma.inverse()?;
    let delta_inv = toxic.delta.inverse()?;
    let l = qap.num_public();
    let n = qap.num_variables();

    let lc = |i: usize| toxic.beta * ev.a[i] + toxic.alpha * ev.b[i] + ev.c[i];
    let mut scalars = vec![toxic.alpha, toxic.beta, toxic.delta];
    scalars.extend((0..=l).map(|i| lc(i) * gamma_inv));
    scalars.extend((l + 1..n).map(|i| lc(i) * delta_inv));
    let mut t = ev.z * delta_inv;
    for _ in 0..d.saturating_sub(1) {
        scalars.push(t);
        t *= toxic.tau;
    }
    let g1 = G1::generator_muls(&scalars);
    let g2 = G2::generator_muls(&[toxic.beta, toxic.gamma, toxic.delta]);
    drop(toxic);

    let digest = circuit_digest(qap);
    let ic = g1[3..4 + l].to_vec();
    let pk = ProvingKey {
        circuit_digest: digest,
        domain: qap.domain_kind(),
        num_variables: n,
        num_public: l,
        alpha_g1: g1[0],
        beta_g1: g1[1],
        beta_g2: g2[0],
        delta_g1: g1[2],
        delta_g2: g2[2],
        tau_g1: powers.g1()[..d].to_vec(),
        tau_g2: powers.g2()[..d].to_vec(),
        l_query: g1[4 + l..3 + n].to_vec(),
        h_query: g1[3 + n..].to_vec(),
    };
    let vk = VerificationKey { circuit_digest: digest, alpha_g1: g1[0], beta_g2: g2[0], gamma_g2: g2[1], delta_g2: g2[2], ic };
    Ok((pk, vk))
}

fn read_g1_compressed(r: &mut Reader) -> Result<G1, Groth16Error> {
    Ok(G1::from_bytes(r.take(G1::BYTES)?)?)
}

fn read_g2_compressed(r: &mut Reader) -> Result<G2, Groth16Error> {
    Ok(G2::from_bytes(r.take(G2::BYTES)?)?)
}

fn read_g1_raw(r: &mut Reader) -> Result<G1, Groth16Error> {
    Ok(G1::read_uncompressed(r.take(2 * G1::BYTES)?)?)
}

fn read_g2_raw(r: &mut Reader) -> Result<G2, Groth16Error> {
    Ok(G2::read_uncompressed(r.take(2 * G2::BYTES)?)?)
}

fn read_vec<T>(r: &mut Reader, f: fn(&mut Reader) -> Result<T, Groth16Error>) -> Result<Vec<T>, Groth16Error> {
    let n = r.u32()?;
    (0..n).map(|_| f(r)).collect()
}

impl ProvingKey {
    pub fn circuit_digest(&self) -> [u8; 32] {
        self.circuit_digest
    }

    pub fn domain_kind(&self) -> DomainKind {
        self.domain
    }

    pub fn domain_size(&self) -> usize {
        self.tau_g1.len()
    }

    /// `l`, excluding the constant-one variable.
    pub fn num_public(&self) -> usize {
        self.num_public
    }

    pub fn num_variables(&self) -> usize {
        self.num_variables
    }

    pub fn h_query_len(&self) -> usize {
        self.h_query.len()
    }

    pub fn l_query_len(&self) -> usize {
        self.l_query.len()
    }

    /// Points are stored uncompressed and only curve-checked on load; the
    /// file is the prover's own and a bad point can only yield proofs that
    /// fail verification.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(PK_MAGIC);
        out.push(KEY_VERSION);
        out.extend_from_slice(&self.circuit_digest);
        out.push(domain_tag(self.domain));
        for v in [self.num_variables, self.num_public] {
            out.extend_from_slice(&(v as u32).to_le_bytes());
        }
        for p in [self.alpha_g1, self.beta_g1, self.delta_g1] {
            p.write_uncompressed(&mut out);
        }
        for p in [self.beta_g2, self.delta_g2] {
            p.write_uncompressed(&mut out);
        }
        for v in [&self.tau_g1, &self.l_query, &self.h_query] {
            out.extend_from_slice(&(v.len() as u32).to_le_bytes());
            v.iter().for_each(|p| p.write_uncompressed(&mut out));
        }
        out.extend_from_slice(&(self.tau_g2.len() as u32).to_le_bytes());
        self.tau_g2.iter().for_each(|p| p.write_uncompressed(&mut out));
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, Groth16Error> {
        let mut r = Reader::new(bytes);
        r.expect_magic(PK_MAGIC, KEY_VERSION)?;
        let circuit_digest = r.array32()?;
        let domain = domain_from_tag(r.u8()?)?;
        let num_variables = r.u32()?;
        let num_public = r.u32()?;
        let alpha_g1 = read_g1_raw(&mut r)?;
        let beta_g1 = read_g1_raw(&mut r)?;
        let delta_g1 = read_g1_raw(&mut r)?;
        let beta_g2 = read_g2_raw(&mut r)?;
        let delta_g2 = read_g2_raw(&mut r)?;
        let tau_g1 = read_vec(&mut r, read_g1_raw)?;
        let l_query = read_vec(&mut r, read_g1_raw)?;
        let h_query = read_vec(&mut r, read_g1_raw)?;
        let tau_g2 = read_vec(&mut r, read_g2_raw)?;
        r.finish()?;
        if num_public >= num_variables
            || l_query.len() + num_public + 1 != num_variables
            || tau_g2.len() != tau_g1.len()
            || h_query.len() + 1 != tau_g1.len().max(1)
        {
            return Err(Groth16Error::Decode("proving key lengths are inconsistent".into()));
        }
        Ok(ProvingKey {
            circuit_digest,
            domain,
            num_variables,
            num_public,
            alpha_g1,
            beta_g1,
            beta_g2,
            delta_g1,
            delta_g2,
            tau_g1,
            tau_g2,
            l_query,
            h_query,
        })
    }
}

impl VerificationKey {
    pub fn circuit_digest(&self) -> [u8; 32] {
        self.circuit_digest
    }

    /// `l`; the key holds `l + 1` input elements.
    pub fn num_public(&self) -> usize {
        self.ic.len() - 1
    }

    pub fn num_ic(&self) -> usize {
        self.ic.len()
    }

    /// SHA-256 of the encoded key.
    pub fn digest(&self) -> [u8; 32] {
        Sha256::digest(self.to_bytes()).into()
    }

    /// Compressed points, fully validated on load.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(VK_MAGIC);
        out.push(KEY_VERSION);
        out.extend_from_slice(&self.circuit_digest);
        out.extend_from_slice(&self.alpha_g1.to_bytes());
        for p in [self.beta_g2, self.gamma_g2, self.delta_g2] {
            out.extend_from_slice(&p.to_bytes());
        }
        out.extend_from_slice(&(self.ic.len() as u32).to_le_bytes());
        for p in &self.ic {
            out.extend_from_slice(&p.to_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, Groth16Error> {
        let mut r = Reader::new(bytes);
        r.expect_magic(VK_MAGIC, KEY_VERSION)?;
        let circuit_digest = r.array32()?;
        let alpha_g1 = read_g1_compressed(&mut r)?;
        let beta_g2 = read_g2_compressed(&mut r)?;
        let gamma_g2 = read_g2_compressed(&mut r)?;
        let delta_g2 = read_g2_compressed(&mut r)?;
        let ic = read_vec(&mut r, read_g1_compressed)?;
        r.finish()?;
        if ic.is_empty() {
            return Err(Groth16Error::Decode("verification key has no input elements".into()));
        }
        Ok(VerificationKey { circuit_digest, alpha_g1, beta_g2, gamma_g2, delta_g2, ic })
    }
}
