use rand::{CryptoRng, RngCore};
use sha2::{Digest, Sha256, Sha512};

use super::Groth16Error;
use crate::algebra::{FieldElement, Gt, G1, G2};

/// Phase-1 accumulator: `[τ^k]G1` and `[τ^k]G2` for `k = 0..=degree`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowersOfTau {
    g1: Vec<G1>,
    g2: Vec<G2>,
    transcript: [u8; 32],
    contributions: usize,
}

fn powers(s: FieldElement, n: usize) -> Vec<FieldElement> {
    let mut out = Vec::with_capacity(n);
    let mut acc = FieldElement::one();
    for _ in 0..n {
        out.push(acc);
        acc *= s;
    }
    out
}

impl PowersOfTau {
    /// The `τ = 1` starting point.
    pub fn new(degree: usize) -> Self {
        let mut h = Sha256::new();
        h.update(b"zkfp/powers-of-tau/v1");
        h.update((degree as u64).to_le_bytes());
        PowersOfTau {
            g1: vec![G1::generator(); degree + 1],
            g2: vec![G2::generator(); degree + 1],
            transcript: h.finalize().into(),
            contributions: 0,
        }
    }

    /// Accepts externally produced powers; run [`Self::check`] before trusting them.
    pub fn from_powers(g1: Vec<G1>, g2: Vec<G2>) -> Result<Self, Groth16Error> {
        if g1.len() != g2.len() || g1.len() < 2 {
            return Err(Groth16Error::Setup(format!("{} G1 and {} G2 powers", g1.len(), g2.len())));
        }
        let mut h = Sha256::new();
        h.update(b"zkfp/powers-of-tau/imported");
        for p in &g1 {
            h.update(p.to_bytes());
        }
        for p in &g2 {
            h.update(p.to_bytes());
        }
        Ok(PowersOfTau { g1, g2, transcript: h.finalize().into(), contributions: 0 })
    }

    pub fn degree(&self) -> usize {
        self.g1.len() - 1
    }

    pub fn g1(&self) -> &[G1] {
        &self.g1
    }

    pub fn g2(&self) -> &[G2] {
        &self.g2
    }

    pub fn transcript(&self) -> [u8; 32] {
        self.transcript
    }

    pub fn contributions(&self) -> usize {
        self.contributions
    }

    /// One contributor's turn: derives `s` from the transcript and fresh
    /// entropy, then replaces every `[τ^k]` by `[(τs)^k]`. Returns `s`.
    pub(crate) fn contribute<R: RngCore + CryptoRng>(&mut self, rng: &mut R) -> FieldElement {
        let mut entropy = [0u8; 32];
        let s = loop {
            rng.fill_bytes(&mut entropy);
            let mut h = Sha512::new();
            h.update(b"zkfp/powers-of-tau/contribution");
            h.update(self.transcript);
            h.update(entropy);
            let s = FieldElement::from_bytes_wide(&h.finalize().into());
            if !s.is_zero() {
                break s;
            }
        };
        let sk = powers(s, self.g1.len());
        if self.contributions == 0 && self.g1.iter().all(|p| *p == G1::generator()) {
            self.g1 = G1::generator_muls(&sk);
            self.g2 = G2::generator_muls(&sk);
        } else {
            for ((p, q), &k) in self.g1.iter_mut().zip(self.g2.iter_mut()).zip(&sk) {
                *p = p.mul(k);
                *q = q.mul(k);
            }
        }
        let mut h = Sha256::new();
        h.update(self.transcript);
        h.update(self.g1[1].to_bytes());
        h.update(self.g2[1].to_bytes());
        self.transcript = h.finalize().into();
        self.contributions += 1;
        s
    }

    /// Randomized batch form of `e([τ^{k+1}]G1, G2) = e([τ^k]G1, [τ]G2)` and
    /// `e([τ]G1, [τ^k]G2) = e(G1, [τ^{k+1}]G2)` over all `k`.
    pub fn check<R: RngCore + ?Sized>(&self, rng: &mut R) -> bool {
        if self.g1[0] != G1::generator() || self.g2[0] != G2::generator() || self.g1[1].is_identity() {
            return false;
        }
        let n = self.g1.len() - 1;
        let rho: Vec<FieldElement> = (0..n).map(|_| FieldElement::random_nonzero(rng)).collect();
        let a1 = G1::batch_affine(&self.g1);
        let a2 = G2::batch_affine(&self.g2);
        let lo1 = G1::msm(&a1[..n], &rho);
        let hi1 = G1::msm(&a1[1..], &rho);
        let lo2 = G2::msm(&a2[..n], &rho);
        let hi2 = G2::msm(&a2[1..], &rho);
        let g1_chain = Gt::multi_pairing(&[hi1, -lo1], &[G2::generator(), self.g2[1]]);
        let g2_chain = Gt::multi_pairing(&[self.g1[1], -G1::generator()], &[lo2, hi2]);
        g1_chain.is_identity() && g2_chain.is_identity()
    }
}

/// A finished phase 1 together with its combined secret.
///
/// Every contributor runs in this process, so the product of their secrets
/// is known here and phase 2 uses it directly. It is wiped on drop.
pub struct Ceremony {
    powers: PowersOfTau,
    tau: FieldElement,
}

impl Ceremony {
    pub fn run<R: RngCore + CryptoRng>(degree: usize, contributors: usize, rng: &mut R) -> Result<Self, Groth16Error> {
        if contributors == 0 {
            return Err(Groth16Error::Setup("at least one contributor is required".into()));
        }
        if degree == 0 {
            return Err(Groth16Error::Setup("degree must be positive".into()));
        }
        let mut powers = PowersOfTau::new(degree);
        let mut tau = FieldElement::one();
        for _ in 0..contributors {
            tau *= powers.contribute(rng);
            log::debug!("ceremony contribution {} of {contributors}", powers.contributions());
        }
        Ok(Ceremony { powers, tau })
    }

    pub fn powers(&self) -> &PowersOfTau {
        &self.powers
    }

    pub(crate) fn tau(&self) -> FieldElement {
        self.tau
    }
}

impl Drop for Ceremony {
    fn drop(&mut self) {
        self.tau = FieldElement::zero();
    }
}

impl std::fmt::Debug for Ceremony {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Ceremony").field("degree", &self.powers.degree()).field("tau", &"<redacted>").finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn powers_follow_the_combined_secret() {
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let c = Ceremony::run(6, 3, &mut rng).unwrap();
        let p = c.powers();
        assert_eq!(p.contributions(), 3);
        for (k, (a, b)) in p.g1().iter().zip(p.g2()).enumerate() {
            assert_eq!(*a, G1::generator().mul(c.tau().pow(k as u64)));
            assert_eq!(*b, G2::generator().mul(c.tau().pow(k as u64)));
        }
        assert!(p.check(&mut rng));
    }

    #[test]
    fn seeded_runs_repeat() {
        let a = Ceremony::run(4, 2, &mut ChaCha20Rng::seed_from_u64(5)).unwrap();
        let b = Ceremony::run(4, 2, &mut ChaCha20Rng::seed_from_u64(5)).unwrap();
        let c = Ceremony::run(4, 2, &mut ChaCha20Rng::seed_from_u64(6)).unwrap();
        assert_eq!(a.powers(), b.powers());
        assert_ne!(a.powers().transcript(), c.powers().transcript());
    }

    #[test]
    fn zero_tau_rejected() {
        let g1 = vec![G1::generator(), G1::identity(), G1::identity()];
        let g2 = vec![G2::generator(), G2::identity(), G2::identity()];
        let p = PowersOfTau::from_powers(g1, g2).unwrap();
        assert!(!p.check(&mut ChaCha20Rng::seed_from_u64(0)));
        assert!(PowersOfTau::new(3).check(&mut ChaCha20Rng::seed_from_u64(0)));
    }

    #[test]
    fn tampering_is_caught() {
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        let c = Ceremony::run(8, 1, &mut rng).unwrap();
        for k in [1usize, 4, 8] {
            let mut g1 = c.powers().g1().to_vec();
            g1[k] = g1[k].double();
            let bad = PowersOfTau::from_powers(g1, c.powers().g2().to_vec()).unwrap();
            assert!(!bad.check(&mut rng), "G1 power {k}");
            let mut g2 = c.powers().g2().to_vec();
            g2[k] = g2[k] + G2::generator();
            let bad = PowersOfTau::from_powers(c.powers().g1().to_vec(), g2).unwrap();
            assert!(!bad.check(&mut rng), "G2 power {k}");
        }
    }

    #[test]
    fn zero_contributors_rejected() {
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        assert!(matches!(Ceremony::run(4, 0, &mut rng), Err(Groth16Error::Setup(_))));
    }
}
