use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use zkfp_core::algebra::{pairing, FieldElement, GroupElement, GroupTag, Gt, Polynomial, G1, G2, SCALAR_MODULUS_HEX};

/// Big-endian bits of a hex string, most significant first.
fn hex_bits(h: &str) -> Vec<bool> {
    hex::decode(h).unwrap().iter().flat_map(|b| (0..8).rev().map(move |i| (b >> i) & 1 == 1)).collect()
}

fn square_and_multiply(a: FieldElement, bits: &[bool]) -> FieldElement {
    let mut acc = FieldElement::one();
    for &bit in bits {
        acc = acc * acc;
        if bit {
            acc = acc * a;
        }
    }
    acc
}

fn double_and_add(p: &GroupElement, bits: &[bool]) -> GroupElement {
    let mut acc = GroupElement::identity(p.tag());
    for &bit in bits {
        acc = acc.add(&acc).unwrap();
        if bit {
            acc = acc.add(p).unwrap();
        }
    }
    acc
}

fn gt_pow(g: &Gt, bits: &[bool]) -> Gt {
    let mut acc = Gt::identity();
    for &bit in bits {
        acc = acc.mul(&acc);
        if bit {
            acc = acc.mul(g);
        }
    }
    acc
}

fn field_bits(x: FieldElement) -> Vec<bool> {
    let mut le = x.to_bytes();
    le.reverse();
    hex_bits(&hex::encode(le))
}

#[test]
fn fermat_little_theorem() {
    let bits = hex_bits(SCALAR_MODULUS_HEX);
    let mut rng = ChaCha20Rng::seed_from_u64(100);
    for _ in 0..100 {
        let a = FieldElement::random(&mut rng);
        assert_eq!(square_and_multiply(a, &bits), a);
    }
}

#[test]
fn group_order_annihilates() {
    let bits = hex_bits(SCALAR_MODULUS_HEX);
    let mut rng = ChaCha20Rng::seed_from_u64(101);
    for tag in [GroupTag::G1, GroupTag::G2] {
        let p = GroupElement::generator(tag).scalar_mul(FieldElement::random(&mut rng));
        assert!(!p.is_identity());
        assert!(double_and_add(&p, &bits).is_identity());
    }
}

#[test]
fn scalar_mul_agrees_with_double_and_add() {
    let mut rng = ChaCha20Rng::seed_from_u64(102);
    for tag in [GroupTag::G1, GroupTag::G2] {
        let s = FieldElement::random(&mut rng);
        let g = GroupElement::generator(tag);
        assert_eq!(g.scalar_mul(s), double_and_add(&g, &field_bits(s)));
    }
}

#[test]
fn pairing_bilinearity_against_gt_exponentiation() {
    let mut rng = ChaCha20Rng::seed_from_u64(103);
    let base = Gt::pairing(&G1::generator(), &G2::generator());
    for _ in 0..20 {
        let a = FieldElement::random(&mut rng);
        let b = FieldElement::random(&mut rng);
        let lhs = pairing(&GroupElement::G1(G1::generator().mul(a)), &GroupElement::G2(G2::generator().mul(b))).unwrap();
        assert_eq!(lhs, GroupElement::Gt(gt_pow(&base, &field_bits(a * b))));
    }
}

#[test]
fn random_division_recomposes() {
    let mut rng = ChaCha20Rng::seed_from_u64(104);
    for _ in 0..20 {
        let n = Polynomial::new((0..9).map(|_| FieldElement::random(&mut rng)).collect());
        let d = Polynomial::new((0..4).map(|_| FieldElement::random(&mut rng)).collect());
        let (q, r) = n.divide(&d).unwrap();
        assert!(r.degree().map_or(true, |x| x < 3));
        // recompose coefficient-by-coefficient without the library's multiply
        let mut prod = vec![FieldElement::zero(); 12];
        for (i, &qc) in q.coeffs().iter().enumerate() {
            for (j, &dc) in d.coeffs().iter().enumerate() {
                prod[i + j] += qc * dc;
            }
        }
        for (i, &rc) in r.coeffs().iter().enumerate() {
            prod[i] += rc;
        }
        assert_eq!(Polynomial::new(prod), n);
    }
}
