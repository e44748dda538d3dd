use super::{CircuitBuilder, CircuitError, Wire, ONE};
use crate::algebra::FieldElement;

fn pow2(n: u32) -> FieldElement {
    FieldElement::from_u64(2).pow(n as u64)
}

impl CircuitBuilder {
    /// Little-endian bit wires of `x`, each constrained boolean and
    /// recombined to `x`. Unsatisfiable unless `x < 2^n`.
    pub fn num2bits(&mut self, x: Wire, n: u32) -> Vec<Wire> {
        assert!((1..254).contains(&n), "bit width {n} out of range");
        let bits: Vec<Wire> = (0..n).map(|i| self.hint_bit(x, i)).collect();
        for &b in &bits {
            self.assert_boolean(b);
        }
        let mut acc = bits[0];
        for (i, &b) in bits.iter().enumerate().skip(1) {
            let term = self.const_mul(pow2(i as u32), b);
            acc = self.add(acc, term);
        }
        self.assert_equal(acc, x);
        self.range_checked.entry(x).and_modify(|m| *m = (*m).min(n)).or_insert(n);
        bits
    }

    /// Constrains `x < 2^n`, skipping wires already checked at least as tightly.
    pub fn range_check(&mut self, x: Wire, n: u32) {
        if self.range_checked.get(&x).is_some_and(|&m| m <= n) {
            return;
        }
        self.num2bits(x, n);
    }

    /// `a < b` for inputs already known to fit in `n` bits: the top bit of
    /// `a + 2^n − b` is set exactly when `a ≥ b`.
    fn lt_unchecked(&mut self, a: Wire, b: Wire, n: u32) -> Wire {
        let offset = self.constant(pow2(n));
        let shifted = self.add(a, offset);
        let diff = self.sub(shifted, b);
        let bits = self.num2bits(diff, n + 1);
        self.not(bits[n as usize])
    }

    pub fn less_than(&mut self, a: Wire, b: Wire, n: u32) -> Wire {
        self.range_check(a, n);
        self.range_check(b, n);
        self.lt_unchecked(a, b, n)
    }

    pub fn less_eq_than(&mut self, a: Wire, b: Wire, n: u32) -> Wire {
        self.range_check(a, n);
        self.range_check(b, n);
        let b1 = self.add(b, ONE);
        self.lt_unchecked(a, b1, n)
    }

    pub fn greater_than(&mut self, a: Wire, b: Wire, n: u32) -> Wire {
        self.less_than(b, a, n)
    }

    /// `a ≥ b` as `¬(b > a)`.
    pub fn greater_eq_than(&mut self, a: Wire, b: Wire, n: u32) -> Wire {
        let gt = self.greater_than(b, a, n);
        self.not(gt)
    }
}

/// Comparator gadgets for operands of a fixed bit width.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Comparators {
    bit_width: u32,
}

impl Comparators {
    pub const MAX_BITS: u32 = 32;

    pub fn new(bit_width: u32) -> Result<Self, CircuitError> {
        if !(1..=Self::MAX_BITS).contains(&bit_width) {
            return Err(CircuitError::Spec(format!("comparator width {bit_width} outside 1..={}", Self::MAX_BITS)));
        }
        Ok(Comparators { bit_width })
    }

    pub fn bit_width(&self) -> u32 {
        self.bit_width
    }

    pub fn less_eq_than(&self, b: &mut CircuitBuilder, x: Wire, y: Wire) -> Wire {
        b.less_eq_than(x, y, self.bit_width)
    }

    pub fn greater_than(&self, b: &mut CircuitBuilder, x: Wire, y: Wire) -> Wire {
        b.greater_than(x, y, self.bit_width)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Circuit;

    fn fe(v: u64) -> FieldElement {
        FieldElement::from_u64(v)
    }

    fn comparator(n: u32, le: bool) -> (Circuit, Wire) {
        let cmp = Comparators::new(n).unwrap();
        let mut b = CircuitBuilder::new();
        let x = b.public_input();
        let y = b.public_input();
        let out = if le { cmp.less_eq_than(&mut b, x, y) } else { cmp.greater_than(&mut b, x, y) };
        b.output(out);
        (b.build(), out)
    }

    fn run(c: &(Circuit, Wire), x: u64, y: u64) -> Option<u64> {
        c.0.generate_witness(&[fe(x), fe(y)], &[]).ok().map(|w| w.get(c.1).to_u64().unwrap())
    }

    #[test]
    fn basic_cases() {
        let le = comparator(8, true);
        let gt = comparator(8, false);
        assert_eq!(run(&le, 5, 100), Some(1));
        assert_eq!(run(&le, 100, 100), Some(1));
        assert_eq!(run(&le, 101, 100), Some(0));
        assert_eq!(run(&gt, 100, 100), Some(0));
        assert_eq!(run(&gt, 101, 100), Some(1));
        assert_eq!(run(&gt, 0, 255), Some(0));
        assert_eq!(run(&le, 255, 0), Some(0));
    }

    #[test]
    fn out_of_range_inputs_are_unsatisfiable() {
        let le = comparator(8, true);
        assert_eq!(run(&le, 256, 3), None);
        assert_eq!(run(&le, 3, 256), None);
        let neg = le.0.generate_witness(&[-fe(1), fe(3)], &[]);
        assert!(neg.is_err());
    }

    #[test]
    fn width_bounds() {
        assert!(Comparators::new(0).is_err());
        assert!(Comparators::new(33).is_err());
        assert!(Comparators::new(32).is_ok());
    }

    #[test]
    fn range_checks_are_memoized() {
        let mut b = CircuitBuilder::new();
        let x = b.public_input();
        b.range_check(x, 8);
        let after_first = b.gates.len();
        b.range_check(x, 8);
        b.range_check(x, 10);
        assert_eq!(b.gates.len(), after_first);
        b.range_check(x, 4);
        assert!(b.gates.len() > after_first);
    }

    #[test]
    fn greater_eq_than_matches() {
        let mut b = CircuitBuilder::new();
        let x = b.public_input();
        let y = b.public_input();
        let ge = b.greater_eq_than(x, y, 6);
        let c = b.build();
        for (p, q) in [(0, 0), (5, 4), (4, 5), (63, 63), (0, 63)] {
            let w = c.generate_witness(&[fe(p), fe(q)], &[]).unwrap();
            assert_eq!(w.get(ge), fe((p >= q) as u64));
        }
    }
}
