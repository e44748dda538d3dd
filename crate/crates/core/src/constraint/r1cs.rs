use crate::algebra::FieldElement;
use crate::circuit::{Circuit, GateKind, Witness, ONE};

use super::ConstraintError;

pub const R1CS_MAGIC: &[u8; 4] = b"R1CS";
pub const R1CS_VERSION: u8 = 1;

/// Sparse `(variable, coefficient)` pairs.
pub type LinearCombination = Vec<(usize, FieldElement)>;

fn lc_eval(lc: &LinearCombination, z: &[FieldElement]) -> FieldElement {
    lc.iter().map(|&(i, c)| c * z[i]).sum()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub a: LinearCombination,
    pub b: LinearCombination,
    pub c: LinearCombination,
}

impl Constraint {
    pub fn is_satisfied(&self, z: &[FieldElement]) -> bool {
        lc_eval(&self.a, z) * lc_eval(&self.b, z) == lc_eval(&self.c, z)
    }

    pub(crate) fn eval(&self, z: &[FieldElement]) -> (FieldElement, FieldElement, FieldElement) {
        (lc_eval(&self.a, z), lc_eval(&self.b, z), lc_eval(&self.c, z))
    }
}

/// Rank-1 constraint system over variables `z = (1, public…, private…)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct R1CS {
    num_variables: usize,
    num_public: usize,
    constraints: Vec<Constraint>,
    /// Circuit wire held by each variable.
    wires: Vec<usize>,
}

fn single(i: usize) -> LinearCombination {
    vec![(i, FieldElement::one())]
}

/// Lowers a circuit: one `z_k · 1 = z_k` row per public variable, then one
/// row per gate. Add gates use `1 · (l + r) = out`.
pub fn to_r1cs(circuit: &Circuit) -> R1CS {
    let n = circuit.num_wires();
    let mut wires: Vec<usize> = circuit.public_inputs().to_vec();
    debug_assert_eq!(wires[0], ONE);
    let mut is_public = vec![false; n];
    for &w in &wires {
        is_public[w] = true;
    }
    wires.extend((0..n).filter(|&w| !is_public[w]));
    let mut var = vec![0usize; n];
    for (v, &w) in wires.iter().enumerate() {
        var[w] = v;
    }

    let num_public = circuit.public_inputs().len() - 1;
    let mut constraints = Vec::with_capacity(num_public + 1 + circuit.gates().len());
    for k in 0..=num_public {
        constraints.push(Constraint { a: single(k), b: single(0), c: single(k) });
    }
    for g in circuit.gates() {
        let (l, r, o) = (var[g.left], var[g.right], var[g.out]);
        let row = match g.kind {
            GateKind::Add => {
                let b = if l == r { vec![(l, FieldElement::from_u64(2))] } else { vec![(l, FieldElement::one()), (r, FieldElement::one())] };
                Constraint { a: single(0), b, c: single(o) }
            }
            GateKind::Mul => Constraint { a: single(l), b: single(r), c: single(o) },
            GateKind::ConstMul(c) => {
                let a = if c.is_zero() { Vec::new() } else { vec![(l, c)] };
                Constraint { a, b: single(r), c: single(o) }
            }
        };
        constraints.push(row);
    }
    R1CS { num_variables: n, num_public, constraints, wires }
}

impl R1CS {
    pub fn new(num_variables: usize, num_public: usize, constraints: Vec<Constraint>) -> Result<Self, ConstraintError> {
        let r = R1CS { num_variables, num_public, constraints, wires: (0..num_variables).collect() };
        r.check_shape()?;
        Ok(r)
    }

    fn check_shape(&self) -> Result<(), ConstraintError> {
        if self.num_variables == 0 || self.num_public >= self.num_variables {
            return Err(ConstraintError::Shape(format!("{} variables with {} public", self.num_variables, self.num_public)));
        }
        let bad = self.constraints.iter().flat_map(|c| c.a.iter().chain(&c.b).chain(&c.c)).any(|&(i, _)| i >= self.num_variables);
        if bad {
            return Err(ConstraintError::Shape("variable index out of range".into()));
        }
        Ok(())
    }

    /// `m`.
    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    /// Including the constant-one variable.
    pub fn num_variables(&self) -> usize {
        self.num_variables
    }

    /// `l`, excluding the constant-one variable.
    pub fn num_public(&self) -> usize {
        self.num_public
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// Smallest witness length that covers every mapped wire.
    pub fn witness_len(&self) -> usize {
        self.wires.iter().max().map_or(0, |&w| w + 1)
    }

    /// Reorders a wire-indexed witness into variable order.
    pub fn assignment(&self, witness: &Witness) -> Vec<FieldElement> {
        self.wires.iter().map(|&w| witness.get(w)).collect()
    }

    pub fn is_satisfied(&self, z: &[FieldElement]) -> bool {
        z.len() == self.num_variables && z[0].is_one() && self.constraints.iter().all(|c| c.is_satisfied(z))
    }

    /// First unsatisfied row, if any.
    pub fn first_violation(&self, z: &[FieldElement]) -> Option<usize> {
        self.constraints.iter().position(|c| !c.is_satisfied(z))
    }

    /// Layout: magic, version u8, `m`, `n`, `l` as u32 LE; per row the A, B
    /// and C combinations as a u32 count of `(u32 index, 32-byte coefficient)`
    /// pairs; then the u32 wire index of each variable.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(R1CS_MAGIC);
        out.push(R1CS_VERSION);
        for v in [self.constraints.len(), self.num_variables, self.num_public] {
            out.extend_from_slice(&(v as u32).to_le_bytes());
        }
        for row in &self.constraints {
            for lc in [&row.a, &row.b, &row.c] {
                out.extend_from_slice(&(lc.len() as u32).to_le_bytes());
                for &(i, c) in lc {
                    out.extend_from_slice(&(i as u32).to_le_bytes());
                    out.extend_from_slice(&c.to_bytes());
                }
            }
        }
        for &w in &self.wires {
            out.extend_from_slice(&(w as u32).to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, ConstraintError> {
        let mut r = Reader { bytes, pos: 0 };
        if r.take(4)? != R1CS_MAGIC {
            return Err(ConstraintError::Decode("bad magic".into()));
        }
        let version = r.take(1)?[0];
        if version != R1CS_VERSION {
            return Err(ConstraintError::Decode(format!("unsupported version {version}")));
        }
        let m = r.u32()? as usize;
        let n = r.u32()? as usize;
        let l = r.u32()? as usize;
        let mut constraints = Vec::with_capacity(m.min(1 << 20));
        for _ in 0..m {
            let mut lcs = Vec::with_capacity(3);
            for _ in 0..3 {
                let len = r.u32()? as usize;
                let mut lc = Vec::with_capacity(len.min(1 << 16));
                for _ in 0..len {
                    let i = r.u32()? as usize;
                    let c: [u8; 32] = r.take(32)?.try_into().expect("32 bytes");
                    lc.push((i, FieldElement::from_bytes(&c).map_err(|e| ConstraintError::Decode(e.to_string()))?));
                }
                lcs.push(lc);
            }
            let c = lcs.pop().unwrap();
            let b = lcs.pop().unwrap();
            let a = lcs.pop().unwrap();
            constraints.push(Constraint { a, b, c });
        }
        let wires = (0..n).map(|_| r.u32().map(|w| w as usize)).collect::<Result<Vec<_>, _>>()?;
        if r.pos != bytes.len() {
            return Err(ConstraintError::Decode("trailing bytes".into()));
        }
        let out = R1CS { num_variables: n, num_public: l, constraints, wires };
        out.check_shape()?;
        Ok(out)
    }
}

/// Brute-force row-by-row check of `(z·A_k)(z·B_k) = z·C_k`.
pub fn check_satisfaction(r1cs: &R1CS, witness: &Witness) -> bool {
    witness.len() == r1cs.num_variables() && r1cs.is_satisfied(&r1cs.assignment(witness))
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], ConstraintError> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.bytes.len()).ok_or_else(|| ConstraintError::Decode("truncated".into()))?;
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32, ConstraintError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{build_threshold_circuit, CircuitBuilder, ThresholdCircuitSpec};
    use crate::matcher::FixedPointLSM;

    fn fe(v: u64) -> FieldElement {
        FieldElement::from_u64(v)
    }

    fn mul_circuit() -> Circuit {
        let mut b = CircuitBuilder::new();
        let x = b.private_input();
        let y = b.private_input();
        let z = b.mul(x, y);
        b.output(z);
        b.build()
    }

    #[test]
    fn single_mul_gate() {
        let r = to_r1cs(&mul_circuit());
        assert_eq!(r.num_constraints(), 2);
        assert_eq!(r.num_public(), 0);
        assert!(r.is_satisfied(&[fe(1), fe(3), fe(4), fe(12)]));
        assert!(!r.is_satisfied(&[fe(1), fe(3), fe(4), fe(13)]));
        assert_eq!(r.first_violation(&[fe(1), fe(3), fe(4), fe(13)]), Some(1));
    }

    #[test]
    fn add_gate_uses_constant_selector() {
        let mut b = CircuitBuilder::new();
        let x = b.private_input();
        let y = b.private_input();
        b.add(x, y);
        let r = to_r1cs(&b.build());
        let row = &r.constraints()[1];
        assert_eq!(row.a, vec![(0, fe(1))]);
        assert_eq!(row.b, vec![(1, fe(1)), (2, fe(1))]);
        assert_eq!(row.c, vec![(3, fe(1))]);
        assert!(r.is_satisfied(&[fe(1), fe(3), fe(4), fe(7)]));
    }

    #[test]
    fn public_wires_come_first() {
        let mut b = CircuitBuilder::new();
        let x = b.private_input();
        let y = b.public_input();
        let z = b.mul(x, y);
        let c = b.build();
        let r = to_r1cs(&c);
        assert_eq!(r.num_public(), 1);
        let w = c.generate_witness(&[fe(5)], &[fe(2)]).unwrap();
        assert_eq!(r.assignment(&w), vec![fe(1), fe(5), fe(2), fe(10)]);
        assert!(check_satisfaction(&r, &w));
        assert!(!check_satisfaction(&r, &w.with_value(z, fe(11))));
    }

    #[test]
    fn threshold_witness_satisfies() {
        let t = build_threshold_circuit(ThresholdCircuitSpec::new(2, 2)).unwrap();
        let r = to_r1cs(&t.circuit);
        let lsm = FixedPointLSM { rows: 2, cols: 2, entries: vec![40, 35, 90, 12] };
        let w = t.witness(&lsm, 30).unwrap();
        assert!(check_satisfaction(&r, &w));
        assert_eq!(r.num_public(), 5);
        // flipping any single non-constant wire must break some row
        for wire in 1..w.len() {
            let bad = w.with_value(wire, w.get(wire) + fe(1));
            assert!(!check_satisfaction(&r, &bad), "wire {wire}");
        }
    }

    #[test]
    fn row_sparsity() {
        let t = build_threshold_circuit(ThresholdCircuitSpec::new(3, 3)).unwrap();
        let r = to_r1cs(&t.circuit);
        assert!(r.constraints().iter().all(|c| c.a.len() + c.b.len() + c.c.len() <= 4));
    }

    #[test]
    fn binary_round_trip() {
        let t = build_threshold_circuit(ThresholdCircuitSpec::new(1, 2)).unwrap();
        let r = to_r1cs(&t.circuit);
        let bytes = r.to_bytes();
        assert_eq!(&bytes[..4], b"R1CS");
        assert_eq!(R1CS::from_bytes(&bytes).unwrap(), r);
        assert!(R1CS::from_bytes(&bytes[..bytes.len() - 1]).is_err());
        let mut extra = bytes.clone();
        extra.push(0);
        assert!(R1CS::from_bytes(&extra).is_err());
    }

    #[test]
    fn golden_header() {
        let r = to_r1cs(&mul_circuit());
        let bytes = r.to_bytes();
        assert_eq!(hex::encode(&bytes[..17]), "5231435301020000000400000000000000");
    }
}
