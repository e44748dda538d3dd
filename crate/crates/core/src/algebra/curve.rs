//! BN254 (alt_bn128) public parameters, as published in EIP-196/EIP-197.

use ark_bn254::{Fq, Fr, G1Affine, G2Affine};
use ark_ec::AffineRepr;
use ark_ff::{BigInteger, PrimeField};

use super::AlgebraError;

/// Scalar field modulus r; also the order of G1 and G2.
pub const SCALAR_MODULUS_HEX: &str = "30644e72e131a029b85045b68181585d2833e84879b9709143e1f593f0000001";
pub const G1_ORDER_HEX: &str = SCALAR_MODULUS_HEX;
/// Base field modulus q.
pub const BASE_MODULUS_HEX: &str = "30644e72e131a029b85045b68181585d97816a916871ca8d3c208c16d87cfd47";

const G1_GEN: (&str, &str) = ("1", "2");
// (c0, c1) pairs of Fq2 coordinates
const G2_GEN_X: (&str, &str) = (
    "10857046999023057135944570762232829481370756359578518086990519993285655852781",
    "11559732032986387107991004021392285783925812861821192530917403151452391805634",
);
const G2_GEN_Y: (&str, &str) = (
    "8495653923123431417604973247489272438418190587263600148770280649306958101930",
    "4082367875863433681332203403145435568316851327593401208105741076214120093531",
);

fn be_hex<F: PrimeField>() -> String {
    hex::encode(F::MODULUS.to_bytes_be())
}

fn fq(s: &str) -> Result<Fq, AlgebraError> {
    s.parse::<Fq>().map_err(|_| AlgebraError::Curve(format!("bad constant {s}")))
}

/// Checks the arithmetic backend against the published constants: moduli,
/// generator coordinates, on-curve and prime-order subgroup membership.
pub fn validate_curve() -> Result<(), AlgebraError> {
    if be_hex::<Fr>() != SCALAR_MODULUS_HEX {
        return Err(AlgebraError::Curve("scalar modulus".into()));
    }
    if be_hex::<Fq>() != BASE_MODULUS_HEX {
        return Err(AlgebraError::Curve("base modulus".into()));
    }
    let g1 = G1Affine::generator();
    if (g1.x, g1.y) != (fq(G1_GEN.0)?, fq(G1_GEN.1)?) {
        return Err(AlgebraError::Curve("G1 generator".into()));
    }
    let g2 = G2Affine::generator();
    let expect_x = (fq(G2_GEN_X.0)?, fq(G2_GEN_X.1)?);
    let expect_y = (fq(G2_GEN_Y.0)?, fq(G2_GEN_Y.1)?);
    if (g2.x.c0, g2.x.c1) != expect_x || (g2.y.c0, g2.y.c1) != expect_y {
        return Err(AlgebraError::Curve("G2 generator".into()));
    }
    if !g1.is_on_curve() || !g2.is_on_curve() {
        return Err(AlgebraError::Curve("generator off curve".into()));
    }
    if !g1.is_in_correct_subgroup_assuming_on_curve() || !g2.is_in_correct_subgroup_assuming_on_curve() {
        return Err(AlgebraError::Curve("generator outside prime-order subgroup".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn backend_matches_published_parameters() {
        validate_curve().unwrap();
    }

    #[test]
    fn decimal_and_hex_moduli_agree() {
        let r = "21888242871839275222246405745257275088548364400416034343698204186575808495617";
        let q = "21888242871839275222246405745257275088696311157297823662689037894645226208583";
        assert_eq!(Fr::MODULUS.to_string(), r);
        assert_eq!(Fq::MODULUS.to_string(), q);
    }
}
