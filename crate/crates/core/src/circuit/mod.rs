//! Arithmetic circuits over the scalar field, comparator gadgets and the
//! threshold-match circuit.

mod gadgets;
mod threshold;

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::algebra::FieldElement;

pub use gadgets::Comparators;
pub use threshold::{build_threshold_circuit, ThresholdCircuit, ThresholdCircuitSpec, DEFAULT_BIT_WIDTH, DEFAULT_ENTRY_BITS, SCORE_MAX};

pub type Wire = usize;

/// Wire 0 always carries the constant 1.
pub const ONE: Wire = 0;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CircuitError {
    #[error("expected {expected} {what} inputs, got {found}")]
    InputCount { what: &'static str, expected: usize, found: usize },
    #[error("gate {gate} unsatisfied: {line}")]
    Unsatisfied { gate: usize, line: String },
    #[error("wire {0} read before assignment")]
    Undefined(Wire),
    #[error("invalid circuit spec: {0}")]
    Spec(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateKind {
    Add,
    Mul,
    /// `out = c · left · right`; builders pass [`ONE`] as `right`.
    ConstMul(FieldElement),
}

/// A gate whose `out` is already assigned when it is reached acts as an
/// equality constraint rather than a definition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Gate {
    pub kind: GateKind,
    pub left: Wire,
    pub right: Wire,
    pub out: Wire,
}

impl Gate {
    fn apply(&self, l: FieldElement, r: FieldElement) -> FieldElement {
        match self.kind {
            GateKind::Add => l + r,
            GateKind::Mul => l * r,
            GateKind::ConstMul(c) => c * l * r,
        }
    }
}

/// Non-deterministic advice computed during witness generation and pinned
/// down by later gates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HintKind {
    Bit { source: Wire, index: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Hint {
    pub out: Wire,
    pub kind: HintKind,
    /// Evaluated once this many gates have been processed.
    pub after_gates: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    gates: Vec<Gate>,
    hints: Vec<Hint>,
    num_wires: usize,
    public_inputs: Vec<Wire>,
    private_inputs: Vec<Wire>,
    outputs: Vec<Wire>,
}

impl Circuit {
    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn hints(&self) -> &[Hint] {
        &self.hints
    }

    pub fn num_wires(&self) -> usize {
        self.num_wires
    }

    /// Includes wire 0.
    pub fn public_inputs(&self) -> &[Wire] {
        &self.public_inputs
    }

    pub fn private_inputs(&self) -> &[Wire] {
        &self.private_inputs
    }

    pub fn outputs(&self) -> &[Wire] {
        &self.outputs
    }

    /// One line per gate or hint in evaluation order. `==` marks a gate
    /// that checks an existing wire instead of defining one.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let list = |ws: &[Wire]| ws.iter().map(|w| format!("w{w}")).collect::<Vec<_>>().join(" ");
        let _ = writeln!(out, "wires {} gates {} hints {}", self.num_wires, self.gates.len(), self.hints.len());
        let _ = writeln!(out, "public {}", list(&self.public_inputs));
        let _ = writeln!(out, "private {}", list(&self.private_inputs));
        let _ = writeln!(out, "outputs {}", list(&self.outputs));
        let mut defined = vec![false; self.num_wires];
        for &w in self.public_inputs.iter().chain(&self.private_inputs) {
            defined[w] = true;
        }
        let mut hints = self.hints.iter().peekable();
        for (i, g) in self.gates.iter().enumerate() {
            while let Some(h) = hints.next_if(|h| h.after_gates == i) {
                defined[h.out] = true;
                let _ = writeln!(out, "{}", hint_line(h));
            }
            let _ = writeln!(out, "g{i} {}", gate_line(g, defined[g.out]));
            defined[g.out] = true;
        }
        for h in hints {
            let _ = writeln!(out, "{}", hint_line(h));
        }
        out
    }

    /// Forward evaluation. `public` excludes the constant-one wire.
    pub fn generate_witness(&self, public: &[FieldElement], private: &[FieldElement]) -> Result<Witness, CircuitError> {
        let expected = self.public_inputs.len() - 1;
        if public.len() != expected {
            return Err(CircuitError::InputCount { what: "public", expected, found: public.len() });
        }
        if private.len() != self.private_inputs.len() {
            return Err(CircuitError::InputCount { what: "private", expected: self.private_inputs.len(), found: private.len() });
        }
        let mut values: Vec<Option<FieldElement>> = vec![None; self.num_wires];
        values[ONE] = Some(FieldElement::one());
        for (&w, &v) in self.public_inputs[1..].iter().zip(public) {
            values[w] = Some(v);
        }
        for (&w, &v) in self.private_inputs.iter().zip(private) {
            values[w] = Some(v);
        }
        let read = |values: &[Option<FieldElement>], w: Wire| values[w].ok_or(CircuitError::Undefined(w));
        let mut hints = self.hints.iter().peekable();
        for (i, g) in self.gates.iter().enumerate() {
            while let Some(h) = hints.next_if(|h| h.after_gates == i) {
                values[h.out] = Some(eval_hint(h, &values)?);
            }
            let v = g.apply(read(&values, g.left)?, read(&values, g.right)?);
            match values[g.out] {
                Some(existing) if existing != v => {
                    return Err(CircuitError::Unsatisfied { gate: i, line: gate_line(g, true) });
                }
                Some(_) => {}
                None => values[g.out] = Some(v),
            }
        }
        for h in hints {
            values[h.out] = Some(eval_hint(h, &values)?);
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(w, v)| v.ok_or(CircuitError::Undefined(w)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Witness { values })
    }
}

fn eval_hint(h: &Hint, values: &[Option<FieldElement>]) -> Result<FieldElement, CircuitError> {
    match h.kind {
        HintKind::Bit { source, index } => {
            let v = values[source].ok_or(CircuitError::Undefined(source))?;
            Ok(FieldElement::from_u64(v.bit(index as usize) as u64))
        }
    }
}

fn gate_line(g: &Gate, check: bool) -> String {
    let arrow = if check { "==" } else { "->" };
    match g.kind {
        GateKind::Add => format!("add w{} w{} {arrow} w{}", g.left, g.right, g.out),
        GateKind::Mul => format!("mul w{} w{} {arrow} w{}", g.left, g.right, g.out),
        GateKind::ConstMul(c) => {
            let shown = match (c.to_u64(), (-c).to_u64()) {
                (None, Some(n)) => format!("-{n}"),
                _ => c.to_string(),
            };
            format!("cmul {shown} w{} w{} {arrow} w{}", g.left, g.right, g.out)
        }
    }
}

fn hint_line(h: &Hint) -> String {
    match h.kind {
        HintKind::Bit { source, index } => format!("hint w{} = bit {index} of w{source}", h.out),
    }
}

/// Full wire assignment, index-aligned with circuit wires.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    values: Vec<FieldElement>,
}

impl Witness {
    pub fn new(values: Vec<FieldElement>) -> Self {
        Witness { values }
    }

    pub fn values(&self) -> &[FieldElement] {
        &self.values
    }

    pub fn get(&self, w: Wire) -> FieldElement {
        self.values[w]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Copy with wire `w` replaced; used to probe soundness.
    pub fn with_value(&self, w: Wire, v: FieldElement) -> Witness {
        let mut values = self.values.clone();
        values[w] = v;
        Witness { values }
    }
}

/// Incremental, topologically ordered circuit construction.
#[derive(Debug, Clone)]
pub struct CircuitBuilder {
    gates: Vec<Gate>,
    hints: Vec<Hint>,
    num_wires: usize,
    public_inputs: Vec<Wire>,
    private_inputs: Vec<Wire>,
    outputs: Vec<Wire>,
    constants: HashMap<[u8; 32], Wire>,
    range_checked: HashMap<Wire, u32>,
}

impl Default for CircuitBuilder {
    fn default() -> Self {
        Self::new()
    }
}

impl CircuitBuilder {
    pub fn new() -> Self {
        CircuitBuilder {
            gates: Vec::new(),
            hints: Vec::new(),
            num_wires: 1,
            public_inputs: vec![ONE],
            private_inputs: Vec::new(),
            outputs: Vec::new(),
            constants: HashMap::new(),
            range_checked: HashMap::new(),
        }
    }

    fn fresh(&mut self) -> Wire {
        self.num_wires += 1;
        self.num_wires - 1
    }

    pub fn public_input(&mut self) -> Wire {
        let w = self.fresh();
        self.public_inputs.push(w);
        w
    }

    pub fn private_input(&mut self) -> Wire {
        let w = self.fresh();
        self.private_inputs.push(w);
        w
    }

    pub fn output(&mut self, w: Wire) {
        self.outputs.push(w);
    }

    fn gate(&mut self, kind: GateKind, left: Wire, right: Wire, out: Wire) {
        debug_assert!(left < self.num_wires && right < self.num_wires && out < self.num_wires);
        self.gates.push(Gate { kind, left, right, out });
    }

    pub fn add(&mut self, a: Wire, b: Wire) -> Wire {
        let out = self.fresh();
        self.gate(GateKind::Add, a, b, out);
        out
    }

    pub fn mul(&mut self, a: Wire, b: Wire) -> Wire {
        let out = self.fresh();
        self.gate(GateKind::Mul, a, b, out);
        out
    }

    pub fn const_mul(&mut self, c: FieldElement, a: Wire) -> Wire {
        let out = self.fresh();
        self.gate(GateKind::ConstMul(c), a, ONE, out);
        out
    }

    pub fn sub(&mut self, a: Wire, b: Wire) -> Wire {
        let neg = self.const_mul(-FieldElement::one(), b);
        self.add(a, neg)
    }

    /// Memoized wire carrying `c`.
    pub fn constant(&mut self, c: FieldElement) -> Wire {
        if c.is_one() {
            return ONE;
        }
        if let Some(&w) = self.constants.get(&c.to_bytes()) {
            return w;
        }
        let w = self.const_mul(c, ONE);
        self.constants.insert(c.to_bytes(), w);
        w
    }

    /// `1 − x` for a boolean `x`.
    pub fn not(&mut self, x: Wire) -> Wire {
        self.sub(ONE, x)
    }

    pub fn assert_equal(&mut self, a: Wire, b: Wire) {
        self.gate(GateKind::ConstMul(FieldElement::one()), a, ONE, b);
    }

    /// `w = c` as a single constraint.
    pub fn assert_constant(&mut self, w: Wire, c: FieldElement) {
        self.gate(GateKind::ConstMul(c), ONE, ONE, w);
    }

    /// `b · b = b`.
    pub fn assert_boolean(&mut self, b: Wire) {
        self.gate(GateKind::Mul, b, b, b);
    }

    pub fn hint_bit(&mut self, source: Wire, index: u32) -> Wire {
        let out = self.fresh();
        self.hints.push(Hint { out, kind: HintKind::Bit { source, index }, after_gates: self.gates.len() });
        out
    }

    pub fn build(self) -> Circuit {
        Circuit {
            gates: self.gates,
            hints: self.hints,
            num_wires: self.num_wires,
            public_inputs: self.public_inputs,
            private_inputs: self.private_inputs,
            outputs: self.outputs,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fe(v: u64) -> FieldElement {
        FieldElement::from_u64(v)
    }

    fn product_circuit() -> (Circuit, Wire) {
        let mut b = CircuitBuilder::new();
        let x = b.public_input();
        let y = b.private_input();
        let z = b.mul(x, y);
        b.output(z);
        (b.build(), z)
    }

    #[test]
    fn product_witness() {
        let (c, z) = product_circuit();
        let w = c.generate_witness(&[fe(3)], &[fe(4)]).unwrap();
        assert_eq!(w.get(z), fe(12));
        assert_eq!(w.get(ONE), fe(1));
        assert_eq!(w.values(), &[fe(1), fe(3), fe(4), fe(12)]);
    }

    #[test]
    fn input_counts_checked() {
        let (c, _) = product_circuit();
        assert!(matches!(c.generate_witness(&[], &[fe(4)]), Err(CircuitError::InputCount { what: "public", .. })));
        assert!(matches!(c.generate_witness(&[fe(1)], &[]), Err(CircuitError::InputCount { what: "private", .. })));
    }

    #[test]
    fn failing_check_names_gate() {
        let mut b = CircuitBuilder::new();
        let x = b.private_input();
        b.assert_boolean(x);
        let c = b.build();
        assert!(c.generate_witness(&[], &[fe(1)]).is_ok());
        let err = c.generate_witness(&[], &[fe(2)]).unwrap_err();
        assert_eq!(err, CircuitError::Unsatisfied { gate: 0, line: "mul w1 w1 == w1".into() });
    }

    #[test]
    fn constants_are_shared() {
        let mut b = CircuitBuilder::new();
        let a = b.constant(fe(7));
        let c = b.constant(fe(7));
        assert_eq!(a, c);
        assert_eq!(b.constant(fe(1)), ONE);
        assert_eq!(b.build().gates().len(), 1);
    }

    #[test]
    fn dump_is_stable() {
        let mut b = CircuitBuilder::new();
        let x = b.public_input();
        let y = b.private_input();
        let s = b.sub(x, y);
        let bit = b.hint_bit(s, 0);
        b.assert_boolean(bit);
        b.output(s);
        let expected = "\
wires 6 gates 3 hints 1
public w0 w1
private w2
outputs w4
g0 cmul -1 w2 w0 -> w3
g1 add w1 w3 -> w4
hint w5 = bit 0 of w4
g2 mul w5 w5 == w5
";
        assert_eq!(b.build().dump(), expected);
    }
}
