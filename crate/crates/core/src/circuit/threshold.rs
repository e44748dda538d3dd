use sha2::{Digest, Sha256};

use super::{CircuitBuilder, CircuitError, Circuit, Comparators, Wire, Witness, ONE};
use crate::algebra::FieldElement;
use crate::matcher::FixedPointLSM;

/// Largest valid fixed-point local score.
pub const SCORE_MAX: u64 = 100;
/// Width of the final sum comparison; covers sums up to 2^20 − 1.
pub const DEFAULT_BIT_WIDTH: u32 = 20;
/// Width of the per-entry range comparison; scores need 7 bits.
pub const DEFAULT_ENTRY_BITS: u32 = 7;

/// Shape of the threshold statement: an `rows × cols` fixed-point score
/// matrix whose sum reaches `threshold × rows × cols`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ThresholdCircuitSpec {
    pub rows: usize,
    pub cols: usize,
    pub bit_width: u32,
    pub entry_bits: u32,
}

impl ThresholdCircuitSpec {
    pub fn new(rows: usize, cols: usize) -> Self {
        ThresholdCircuitSpec { rows, cols, bit_width: DEFAULT_BIT_WIDTH, entry_bits: DEFAULT_ENTRY_BITS }
    }

    pub fn num(&self) -> usize {
        self.rows * self.cols
    }

    pub fn validate(&self) -> Result<(), CircuitError> {
        if self.num() == 0 {
            return Err(CircuitError::Spec("empty score matrix".into()));
        }
        Comparators::new(self.bit_width)?;
        Comparators::new(self.entry_bits)?;
        if SCORE_MAX >= 1 << self.entry_bits {
            return Err(CircuitError::Spec(format!("{} entry bits cannot hold {SCORE_MAX}", self.entry_bits)));
        }
        let max_sum = SCORE_MAX as u128 * self.num() as u128;
        if max_sum >= 1 << self.bit_width {
            return Err(CircuitError::Spec(format!("sum up to {max_sum} needs more than {} bits", self.bit_width)));
        }
        Ok(())
    }

    pub fn digest(&self) -> [u8; 32] {
        let mut h = Sha256::new();
        h.update(b"zkfp/threshold-circuit/v1");
        h.update((self.rows as u64).to_le_bytes());
        h.update((self.cols as u64).to_le_bytes());
        h.update(self.bit_width.to_le_bytes());
        h.update(self.entry_bits.to_le_bytes());
        h.finalize().into()
    }
}

/// The built circuit plus the named wires of the statement.
#[derive(Debug, Clone)]
pub struct ThresholdCircuit {
    pub circuit: Circuit,
    pub spec: ThresholdCircuitSpec,
    /// `t`, public.
    pub threshold: Wire,
    /// Score entries, public, row-major.
    pub lsm: Vec<Wire>,
    /// Per-entry `entry ≤ 100` flags.
    pub local: Vec<Wire>,
    /// `𝕊`, the sum of all entries.
    pub sum: Wire,
    /// `𝕊′`, the count of in-range entries.
    pub in_range: Wire,
    /// `t′ = t · num`.
    pub scaled_threshold: Wire,
    /// `ℤ = 𝕊 ≥ t′`.
    pub verdict: Wire,
}

pub fn build_threshold_circuit(spec: ThresholdCircuitSpec) -> Result<ThresholdCircuit, CircuitError> {
    spec.validate()?;
    let entry_cmp = Comparators::new(spec.entry_bits)?;
    let sum_cmp = Comparators::new(spec.bit_width)?;
    let num = FieldElement::from_u64(spec.num() as u64);

    let mut b = CircuitBuilder::new();
    let threshold = b.public_input();
    let lsm: Vec<Wire> = (0..spec.num()).map(|_| b.public_input()).collect();
    let max = b.constant(FieldElement::from_u64(SCORE_MAX));

    let mut sum = lsm[0];
    let mut local = Vec::with_capacity(lsm.len());
    let mut in_range = None;
    for (k, &entry) in lsm.iter().enumerate() {
        if k > 0 {
            sum = b.add(sum, entry);
        }
        let lc = entry_cmp.less_eq_than(&mut b, entry, max);
        local.push(lc);
        in_range = Some(match in_range {
            None => lc,
            Some(acc) => b.add(acc, lc),
        });
    }
    let in_range = in_range.expect("non-empty");
    b.assert_constant(in_range, num);

    let scaled_threshold = b.const_mul(num, threshold);
    let over = sum_cmp.greater_than(&mut b, scaled_threshold, sum);
    let verdict = b.not(over);
    b.assert_constant(verdict, FieldElement::one());
    b.output(verdict);
    debug_assert_ne!(verdict, ONE);

    Ok(ThresholdCircuit { circuit: b.build(), spec, threshold, lsm, local, sum, in_range, scaled_threshold, verdict })
}

impl ThresholdCircuit {
    /// Public inputs in circuit order: `t`, then the scores row-major.
    pub fn public_values(&self, lsm: &FixedPointLSM, threshold: u64) -> Result<Vec<FieldElement>, CircuitError> {
        if (lsm.rows, lsm.cols) != (self.spec.rows, self.spec.cols) {
            return Err(CircuitError::Spec(format!(
                "score matrix is {}×{}, circuit expects {}×{}",
                lsm.rows, lsm.cols, self.spec.rows, self.spec.cols
            )));
        }
        let mut v = Vec::with_capacity(1 + lsm.entries.len());
        v.push(FieldElement::from_u64(threshold));
        v.extend(lsm.entries.iter().map(|&e| FieldElement::from_u64(e)));
        Ok(v)
    }

    pub fn witness(&self, lsm: &FixedPointLSM, threshold: u64) -> Result<Witness, CircuitError> {
        self.circuit.generate_witness(&self.public_values(lsm, threshold)?, &[])
    }
}
