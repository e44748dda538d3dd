use num_complex::Complex64;
use rustfft::FftPlanner;

use super::BitString;

/// `t`-point DFT of a bit string, `V[i] = Σ_s B[s]·e^{−j2πis/t}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralVector {
    pub values: Vec<Complex64>,
}

impl SpectralVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

pub fn dft(b: &BitString) -> SpectralVector {
    let mut values: Vec<Complex64> = b.bits.iter().map(|&x| Complex64::new(x as u8 as f64, 0.0)).collect();
    if !values.is_empty() {
        FftPlanner::new().plan_fft_forward(values.len()).process(&mut values);
    }
    SpectralVector { values }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    /// O(t²) direct summation.
    pub(crate) fn naive_dft(bits: &[bool]) -> Vec<Complex64> {
        let t = bits.len();
        (0..t)
            .map(|i| {
                bits.iter()
                    .enumerate()
                    .filter(|(_, &b)| b)
                    .map(|(s, _)| {
                        let angle = -2.0 * PI * ((i * s) % t) as f64 / t as f64;
                        Complex64::new(angle.cos(), angle.sin())
                    })
                    .sum()
            })
            .collect()
    }

    #[test]
    fn zeros_transform_to_zeros() {
        let v = dft(&BitString { bits: vec![false; 16] });
        assert!(v.values.iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn delta_transforms_to_ones() {
        let mut bits = vec![false; 12];
        bits[0] = true;
        for c in dft(&BitString { bits }).values {
            assert!((c - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn sixteen_bit_string_matches_direct_sum() {
        let bits: Vec<bool> = [1, 0, 1, 1, 0, 0, 1, 0, 0, 1, 1, 1, 0, 1, 0, 0].iter().map(|&b| b == 1).collect();
        let fast = dft(&BitString { bits: bits.clone() });
        for (a, b) in fast.values.iter().zip(naive_dft(&bits)) {
            assert!((a - b).norm() < 1e-9);
        }
    }

    proptest! {
        #[test]
        fn dc_term_and_parseval(bits in proptest::collection::vec(any::<bool>(), 1..200)) {
            let b = BitString { bits };
            let v = dft(&b);
            let ones = b.ones() as f64;
            prop_assert!((v.values[0].re - ones).abs() < 1e-9);
            prop_assert!(v.values[0].im.abs() < 1e-9);
            let energy: f64 = v.values.iter().map(|c| c.norm_sqr()).sum();
            let expected = b.len() as f64 * ones;
            prop_assert!((energy - expected).abs() <= 1e-6 * expected.max(1.0));
        }
    }
}
