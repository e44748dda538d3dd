use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};

use ark_bn254::{Bn254, Fr, G1Affine, G1Projective, G2Affine, G2Projective};
use ark_ec::pairing::{Pairing, PairingOutput};
use ark_ec::scalar_mul::fixed_base::FixedBase;
use ark_ec::{CurveGroup, Group, VariableBaseMSM};
use ark_ff::PrimeField;
use ark_serialize::{CanonicalDeserialize, CanonicalSerialize};

use super::{AlgebraError, FieldElement};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupTag {
    G1,
    G2,
    Gt,
}

impl fmt::Display for GroupTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupTag::G1 => "G1",
            GroupTag::G2 => "G2",
            GroupTag::Gt => "GT",
        })
    }
}

fn decode<T: CanonicalDeserialize>(bytes: &[u8], what: &str) -> Result<T, AlgebraError> {
    T::deserialize_compressed(bytes).map_err(|e| AlgebraError::Decode(format!("{what}: {e}")))
}

fn encode<T: CanonicalSerialize>(v: &T) -> Vec<u8> {
    let mut out = Vec::with_capacity(v.compressed_size());
    v.serialize_compressed(&mut out).expect("in-memory serialization");
    out
}

fn scalars(s: &[FieldElement]) -> Vec<Fr> {
    s.iter().map(|x| x.0).collect()
}

macro_rules! curve_group {
    ($name:ident, $proj:ty, $aff:ty, $len:expr, $tag:expr) => {
        #[derive(Clone, Copy, PartialEq, Eq, Hash)]
        pub struct $name(pub(crate) $proj);

        impl $name {
            /// Compressed encoding length in bytes.
            pub const BYTES: usize = $len;

            pub fn generator() -> Self {
                $name(<$proj>::generator())
            }

            pub fn identity() -> Self {
                $name(<$proj>::default())
            }

            pub fn is_identity(&self) -> bool {
                self.0 == <$proj>::default()
            }

            pub fn mul(&self, s: FieldElement) -> Self {
                $name(self.0 * s.0)
            }

            pub fn double(&self) -> Self {
                $name(self.0.double())
            }

            pub(crate) fn affine(&self) -> $aff {
                self.0.into_affine()
            }

            pub(crate) fn batch_affine(points: &[$name]) -> Vec<$aff> {
                let raw: Vec<$proj> = points.iter().map(|p| p.0).collect();
                <$proj>::normalize_batch(&raw)
            }

            /// `Σ s_i·P_i`; panics when the slices differ in length.
            pub(crate) fn msm(bases: &[$aff], s: &[FieldElement]) -> Self {
                assert_eq!(bases.len(), s.len(), "msm length mismatch");
                $name(<$proj>::msm(bases, &scalars(s)).expect("msm lengths"))
            }

            /// `s_i · generator` for every scalar, sharing one window table.
            pub fn generator_muls(s: &[FieldElement]) -> Vec<Self> {
                if s.is_empty() {
                    return Vec::new();
                }
                let bits = <Fr as PrimeField>::MODULUS_BIT_SIZE as usize;
                let window = FixedBase::get_mul_window_size(s.len());
                let table = FixedBase::get_window_table(bits, window, <$proj>::generator());
                FixedBase::msm::<$proj>(bits, window, &table, &scalars(s)).into_iter().map($name).collect()
            }

            /// On the curve and in the prime-order subgroup.
            pub fn is_valid(&self) -> bool {
                let a = self.affine();
                a.is_on_curve() && a.is_in_correct_subgroup_assuming_on_curve()
            }

            /// Uncompressed affine coordinates, twice the compressed size.
            pub(crate) fn write_uncompressed(&self, out: &mut Vec<u8>) {
                self.affine().serialize_uncompressed(out).expect("in-memory serialization");
            }

            /// Reads an uncompressed point, checking only the curve equation.
            pub(crate) fn read_uncompressed(bytes: &[u8]) -> Result<Self, AlgebraError> {
                let p = <$aff>::deserialize_uncompressed_unchecked(bytes)
                    .map_err(|e| AlgebraError::Decode(format!("{}: {e}", $tag)))?;
                if !p.is_on_curve() {
                    return Err(AlgebraError::Decode(format!("{} point off the curve", $tag)));
                }
                Ok($name(p.into()))
            }

            /// Compressed little-endian x coordinate with flag bits in the top byte.
            pub fn to_bytes(&self) -> [u8; $len] {
                let mut out = [0u8; $len];
                out.copy_from_slice(&encode(&self.affine()));
                out
            }

            /// Validates the curve equation and prime-order subgroup membership.
            pub fn from_bytes(bytes: &[u8]) -> Result<Self, AlgebraError> {
                if bytes.len() != $len {
                    return Err(AlgebraError::Decode(format!("{} needs {} bytes, got {}", $tag, $len, bytes.len())));
                }
                let p: $aff = decode(bytes, &$tag.to_string())?;
                Ok($name(p.into()))
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}({})", $tag, hex::encode(self.to_bytes()))
            }
        }

        impl Add for $name {
            type Output = $name;
            fn add(self, rhs: $name) -> $name {
                $name(self.0 + rhs.0)
            }
        }

        impl AddAssign for $name {
            fn add_assign(&mut self, rhs: $name) {
                self.0 += rhs.0;
            }
        }

        impl Sub for $name {
            type Output = $name;
            fn sub(self, rhs: $name) -> $name {
                $name(self.0 - rhs.0)
            }
        }

        impl Neg for $name {
            type Output = $name;
            fn neg(self) -> $name {
                $name(-self.0)
            }
        }
    };
}

curve_group!(G1, G1Projective, G1Affine, 32, GroupTag::G1);
curve_group!(G2, G2Projective, G2Affine, 64, GroupTag::G2);

/// Element of the pairing target group, written multiplicatively.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Gt(pub(crate) PairingOutput<Bn254>);

impl Gt {
    pub fn identity() -> Self {
        Gt(<PairingOutput<Bn254> as ark_ff::Zero>::zero())
    }

    pub fn is_identity(&self) -> bool {
        *self == Gt::identity()
    }

    pub fn pairing(p: &G1, q: &G2) -> Self {
        Gt(Bn254::pairing(p.0, q.0))
    }

    /// `Π e(p_i, q_i)` with a single final exponentiation.
    pub fn multi_pairing(p: &[G1], q: &[G2]) -> Self {
        let a: Vec<G1Affine> = G1::batch_affine(p);
        let b: Vec<G2Affine> = G2::batch_affine(q);
        Gt(Bn254::multi_pairing(a, b))
    }

    pub fn mul(&self, other: &Gt) -> Self {
        Gt(self.0 + other.0)
    }

    pub fn pow(&self, s: FieldElement) -> Self {
        Gt(self.0 * s.0)
    }

    pub fn inverse(&self) -> Self {
        Gt(-self.0)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        encode(&self.0)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, AlgebraError> {
        decode(bytes, "GT").map(Gt)
    }
}

impl fmt::Debug for Gt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = self.to_bytes();
        write!(f, "GT({}…)", hex::encode(&b[..8]))
    }
}

/// Tagged element of G1, G2 or GT.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupElement {
    G1(G1),
    G2(G2),
    Gt(Gt),
}

impl GroupElement {
    pub fn tag(&self) -> GroupTag {
        match self {
            GroupElement::G1(_) => GroupTag::G1,
            GroupElement::G2(_) => GroupTag::G2,
            GroupElement::Gt(_) => GroupTag::Gt,
        }
    }

    pub fn identity(tag: GroupTag) -> Self {
        match tag {
            GroupTag::G1 => GroupElement::G1(G1::identity()),
            GroupTag::G2 => GroupElement::G2(G2::identity()),
            GroupTag::Gt => GroupElement::Gt(Gt::identity()),
        }
    }

    /// For GT, the pairing of the two source generators.
    pub fn generator(tag: GroupTag) -> Self {
        match tag {
            GroupTag::G1 => GroupElement::G1(G1::generator()),
            GroupTag::G2 => GroupElement::G2(G2::generator()),
            GroupTag::Gt => GroupElement::Gt(Gt::pairing(&G1::generator(), &G2::generator())),
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            GroupElement::G1(p) => p.is_identity(),
            GroupElement::G2(p) => p.is_identity(),
            GroupElement::Gt(p) => p.is_identity(),
        }
    }

    pub fn scalar_mul(&self, s: FieldElement) -> Self {
        match self {
            GroupElement::G1(p) => GroupElement::G1(p.mul(s)),
            GroupElement::G2(p) => GroupElement::G2(p.mul(s)),
            GroupElement::Gt(p) => GroupElement::Gt(p.pow(s)),
        }
    }

    pub fn add(&self, other: &GroupElement) -> Result<Self, AlgebraError> {
        match (self, other) {
            (GroupElement::G1(a), GroupElement::G1(b)) => Ok(GroupElement::G1(*a + *b)),
            (GroupElement::G2(a), GroupElement::G2(b)) => Ok(GroupElement::G2(*a + *b)),
            (GroupElement::Gt(a), GroupElement::Gt(b)) => Ok(GroupElement::Gt(a.mul(b))),
            _ => Err(AlgebraError::GroupMismatch { expected: self.tag(), found: other.tag() }),
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        match self {
            GroupElement::G1(p) => p.to_bytes().to_vec(),
            GroupElement::G2(p) => p.to_bytes().to_vec(),
            GroupElement::Gt(p) => p.to_bytes(),
        }
    }

    pub fn from_bytes(tag: GroupTag, bytes: &[u8]) -> Result<Self, AlgebraError> {
        Ok(match tag {
            GroupTag::G1 => GroupElement::G1(G1::from_bytes(bytes)?),
            GroupTag::G2 => GroupElement::G2(G2::from_bytes(bytes)?),
            GroupTag::Gt => GroupElement::Gt(Gt::from_bytes(bytes)?),
        })
    }
}

/// `e: G1 × G2 → GT`.
pub fn pairing(p: &GroupElement, q: &GroupElement) -> Result<GroupElement, AlgebraError> {
    match (p, q) {
        (GroupElement::G1(a), GroupElement::G2(b)) => Ok(GroupElement::Gt(Gt::pairing(a, b))),
        (GroupElement::G1(_), other) => Err(AlgebraError::GroupMismatch { expected: GroupTag::G2, found: other.tag() }),
        (other, _) => Err(AlgebraError::GroupMismatch { expected: GroupTag::G1, found: other.tag() }),
    }
}
