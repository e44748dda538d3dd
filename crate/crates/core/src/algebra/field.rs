use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use ark_bn254::Fr;
use ark_ff::{BigInteger, Field, PrimeField, UniformRand, Zero, One};
use rand::RngCore;

use super::AlgebraError;

/// Element of the BN254 scalar field.
///
/// Encoded as 32 little-endian bytes of the canonical representative.
/// Arithmetic is not constant time.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct FieldElement(pub(crate) Fr);

impl FieldElement {
    pub const BYTES: usize = 32;

    pub fn zero() -> Self {
        FieldElement(Fr::zero())
    }

    pub fn one() -> Self {
        FieldElement(Fr::one())
    }

    pub fn from_u64(v: u64) -> Self {
        FieldElement(Fr::from(v))
    }

    pub fn from_i64(v: i64) -> Self {
        let abs = FieldElement::from_u64(v.unsigned_abs());
        if v < 0 { -abs } else { abs }
    }

    pub fn random<R: RngCore + ?Sized>(rng: &mut R) -> Self {
        FieldElement(Fr::rand(rng))
    }

    /// Uniform non-zero element.
    pub fn random_nonzero<R: RngCore + ?Sized>(rng: &mut R) -> Self {
        loop {
            let x = FieldElement::random(rng);
            if !x.is_zero() {
                return x;
            }
        }
    }

    /// Reduces a 64-byte wide value; used for hash-to-field.
    pub fn from_bytes_wide(bytes: &[u8; 64]) -> Self {
        FieldElement(Fr::from_le_bytes_mod_order(bytes))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn inverse(&self) -> Result<Self, AlgebraError> {
        self.0.inverse().map(FieldElement).ok_or(AlgebraError::DivisionByZero)
    }

    pub fn square(&self) -> Self {
        FieldElement(self.0.square())
    }

    pub fn pow(&self, exp: u64) -> Self {
        FieldElement(self.0.pow([exp]))
    }

    /// Bit `i` of the canonical representative, least significant first.
    pub fn bit(&self, i: usize) -> bool {
        let big = self.0.into_bigint();
        i < 256 && big.get_bit(i)
    }

    /// Number of significant bits of the canonical representative.
    pub fn num_bits(&self) -> u32 {
        self.0.into_bigint().num_bits()
    }

    /// The value as `u64` when it fits.
    pub fn to_u64(&self) -> Option<u64> {
        let limbs = self.0.into_bigint().0;
        if limbs[1..].iter().all(|&l| l == 0) {
            Some(limbs[0])
        } else {
            None
        }
    }

    pub fn to_bytes(&self) -> [u8; 32] {
        let mut out = [0u8; 32];
        out.copy_from_slice(&self.0.into_bigint().to_bytes_le());
        out
    }

    /// Rejects non-canonical encodings (value ≥ modulus).
    pub fn from_bytes(bytes: &[u8; 32]) -> Result<Self, AlgebraError> {
        let x = Fr::from_le_bytes_mod_order(bytes);
        if x.into_bigint().to_bytes_le() != bytes[..] {
            return Err(AlgebraError::Decode("field element not canonical".into()));
        }
        Ok(FieldElement(x))
    }

    /// Montgomery's trick; zeros are left in place.
    pub fn batch_inverse(values: &mut [FieldElement]) {
        let mut raw: Vec<Fr> = values.iter().map(|v| v.0).collect();
        ark_ff::batch_inversion(&mut raw);
        for (v, r) in values.iter_mut().zip(raw) {
            v.0 = r;
        }
    }
}

impl From<u64> for FieldElement {
    fn from(v: u64) -> Self {
        FieldElement::from_u64(v)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.into_bigint())
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fe({self})")
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $tra:ident, $ma:ident, $op:tt) => {
        impl $tr for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement {
                FieldElement(self.0 $op rhs.0)
            }
        }
        impl $tr<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: &FieldElement) -> FieldElement {
                FieldElement(self.0 $op rhs.0)
            }
        }
        impl $tra for FieldElement {
            fn $ma(&mut self, rhs: FieldElement) {
                self.0 = self.0 $op rhs.0;
            }
        }
    };
}

binop!(Add, add, AddAssign, add_assign, +);
binop!(Sub, sub, SubAssign, sub_assign, -);
binop!(Mul, mul, MulAssign, mul_assign, *);

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement(-self.0)
    }
}

impl Sum for FieldElement {
    fn sum<I: Iterator<Item = FieldElement>>(iter: I) -> Self {
        iter.fold(FieldElement::zero(), |a, b| a + b)
    }
}

impl Product for FieldElement {
    fn product<I: Iterator<Item = FieldElement>>(iter: I) -> Self {
        iter.fold(FieldElement::one(), |a, b| a * b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn fe(seed: u64) -> FieldElement {
        FieldElement::random(&mut ChaCha20Rng::seed_from_u64(seed))
    }

    #[test]
    fn identities() {
        let x = fe(1);
        assert_eq!(x + FieldElement::zero(), x);
        assert_eq!(x * x.inverse().unwrap(), FieldElement::one());
        assert_eq!(FieldElement::zero().inverse(), Err(AlgebraError::DivisionByZero));
        assert_eq!(FieldElement::from_i64(-3) + FieldElement::from_u64(3), FieldElement::zero());
    }

    #[test]
    fn bits_and_small_values() {
        let x = FieldElement::from_u64(0b1011);
        assert_eq!((0..5).map(|i| x.bit(i)).collect::<Vec<_>>(), [true, true, false, true, false]);
        assert_eq!(x.num_bits(), 4);
        assert_eq!(x.to_u64(), Some(11));
        assert_eq!(FieldElement::from_i64(-1).to_u64(), None);
    }

    #[test]
    fn non_canonical_bytes_rejected() {
        assert!(FieldElement::from_bytes(&[0xff; 32]).is_err());
    }

    #[test]
    fn batch_inverse_matches_single() {
        let mut v = vec![fe(2), FieldElement::zero(), fe(3)];
        let expect = [v[0].inverse().unwrap(), FieldElement::zero(), v[2].inverse().unwrap()];
        FieldElement::batch_inverse(&mut v);
        assert_eq!(v, expect);
    }

    proptest! {
        #[test]
        fn field_axioms(a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
            let (a, b, c) = (fe(a), fe(b), fe(c));
            prop_assert_eq!((a + b) + c, a + (b + c));
            prop_assert_eq!((a * b) * c, a * (b * c));
            prop_assert_eq!(a * (b + c), a * b + a * c);
            prop_assert_eq!(a + b, b + a);
            prop_assert_eq!(a - a, FieldElement::zero());
            if !a.is_zero() {
                prop_assert_eq!(a * a.inverse().unwrap(), FieldElement::one());
            }
        }

        #[test]
        fn bytes_round_trip(seed in any::<u64>()) {
            let x = fe(seed);
            prop_assert_eq!(FieldElement::from_bytes(&x.to_bytes()).unwrap(), x);
        }
    }
}
