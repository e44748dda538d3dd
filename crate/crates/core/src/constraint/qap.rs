use std::sync::OnceLock;

use ark_bn254::Fr;
use ark_ff::FftField;
use ark_poly::{EvaluationDomain, Radix2EvaluationDomain};

use crate::algebra::{FieldElement, Polynomial};

use super::r1cs::R1CS;
use super::ConstraintError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Matrix {
    A,
    B,
    C,
}

/// Interpolation points of a QAP.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DomainKind {
    /// `x_j = j` for `j = 1..=m`; quadratic-time arithmetic.
    Consecutive,
    /// The `2^k ≥ m` roots of unity; rows past `m` are all-zero padding.
    Radix2,
}

#[derive(Debug, Clone)]
enum Domain {
    Consecutive {
        points: Vec<FieldElement>,
        /// `1 / Π_{k≠j} (x_j − x_k)`.
        inv_weights: Vec<FieldElement>,
    },
    Radix2(Radix2EvaluationDomain<Fr>),
}

fn to_fr(v: &[FieldElement]) -> Vec<Fr> {
    v.iter().map(|x| x.0).collect()
}

fn from_fr(v: Vec<Fr>) -> Vec<FieldElement> {
    v.into_iter().map(FieldElement).collect()
}

/// Quadratic arithmetic program: each variable's A/B/C column interpolated
/// over the domain, with target `Z(X) = Π (X − x_j)`.
///
/// Per-variable polynomials are materialized on request; the prover and
/// setup work from the sparse rows directly.
#[derive(Debug, Clone)]
pub struct QAP {
    r1cs: R1CS,
    domain: Domain,
    target: OnceLock<Polynomial>,
}

/// Per-variable column values `A_i(τ), B_i(τ), C_i(τ)` and `Z(τ)`.
#[derive(Debug, Clone)]
pub struct QapEvaluation {
    pub a: Vec<FieldElement>,
    pub b: Vec<FieldElement>,
    pub c: Vec<FieldElement>,
    pub z: FieldElement,
}

/// QAP over `1..=m`.
pub fn to_qap(r1cs: &R1CS) -> Result<QAP, ConstraintError> {
    to_qap_with(r1cs, DomainKind::Consecutive)
}

pub fn to_qap_with(r1cs: &R1CS, kind: DomainKind) -> Result<QAP, ConstraintError> {
    let m = r1cs.num_constraints();
    if m == 0 {
        return Err(ConstraintError::Empty);
    }
    let domain = match kind {
        DomainKind::Consecutive => {
            let points: Vec<FieldElement> = (1..=m as u64).map(FieldElement::from_u64).collect();
            // w_j = (j−1)! · (m−j)! · (−1)^(m−j)
            let mut fact = vec![FieldElement::one(); m];
            for i in 1..m {
                fact[i] = fact[i - 1] * FieldElement::from_u64(i as u64);
            }
            let mut inv_weights: Vec<FieldElement> = (1..=m)
                .map(|j| {
                    let w = fact[j - 1] * fact[m - j];
                    if (m - j) % 2 == 1 { -w } else { w }
                })
                .collect();
            FieldElement::batch_inverse(&mut inv_weights);
            Domain::Consecutive { points, inv_weights }
        }
        DomainKind::Radix2 => Domain::Radix2(
            Radix2EvaluationDomain::new(m).ok_or_else(|| ConstraintError::Shape(format!("no radix-2 domain of size {m}")))?,
        ),
    };
    Ok(QAP { r1cs: r1cs.clone(), domain, target: OnceLock::new() })
}

impl QAP {
    pub fn r1cs(&self) -> &R1CS {
        &self.r1cs
    }

    pub fn domain_kind(&self) -> DomainKind {
        match self.domain {
            Domain::Consecutive { .. } => DomainKind::Consecutive,
            Domain::Radix2(_) => DomainKind::Radix2,
        }
    }

    /// Number of interpolation points; equals `m` for the consecutive domain.
    pub fn domain_size(&self) -> usize {
        match &self.domain {
            Domain::Consecutive { points, .. } => points.len(),
            Domain::Radix2(d) => d.size(),
        }
    }

    pub fn num_constraints(&self) -> usize {
        self.r1cs.num_constraints()
    }

    pub fn num_variables(&self) -> usize {
        self.r1cs.num_variables()
    }

    pub fn num_public(&self) -> usize {
        self.r1cs.num_public()
    }

    pub fn domain(&self) -> Vec<FieldElement> {
        match &self.domain {
            Domain::Consecutive { points, .. } => points.clone(),
            Domain::Radix2(d) => d.elements().map(FieldElement).collect(),
        }
    }

    /// `Z(X) = Π (X − x_j)`.
    pub fn target(&self) -> &Polynomial {
        self.target.get_or_init(|| match &self.domain {
            Domain::Consecutive { points, .. } => Polynomial::vanishing(points),
            Domain::Radix2(d) => {
                let mut c = vec![FieldElement::zero(); d.size() + 1];
                c[0] = -FieldElement::one();
                c[d.size()] = FieldElement::one();
                Polynomial::new(c)
            }
        })
    }

    pub fn target_at(&self, tau: FieldElement) -> FieldElement {
        match &self.domain {
            Domain::Consecutive { points, .. } => points.iter().map(|&x| tau - x).product(),
            Domain::Radix2(d) => FieldElement(d.evaluate_vanishing_polynomial(tau.0)),
        }
    }

    /// Polynomial through `values[j]` at the `j`-th domain point.
    fn interpolate(&self, values: &[FieldElement]) -> Polynomial {
        match &self.domain {
            Domain::Consecutive { points, inv_weights } => Polynomial::interpolate_with(points, values, inv_weights, self.target()),
            Domain::Radix2(d) => Polynomial::new(from_fr(d.ifft(&to_fr(values)))),
        }
    }

    /// Row combinations evaluated on an assignment, padded to the domain size.
    fn row_values(&self, which: impl Fn(&super::Constraint) -> FieldElement) -> Vec<FieldElement> {
        let mut v: Vec<FieldElement> = self.r1cs.constraints().iter().map(which).collect();
        v.resize(self.domain_size(), FieldElement::zero());
        v
    }

    /// Column `i` of the chosen matrix, interpolated over the domain.
    pub fn variable_polynomial(&self, which: Matrix, i: usize) -> Polynomial {
        let values = self.row_values(|row| {
            let lc = match which {
                Matrix::A => &row.a,
                Matrix::B => &row.b,
                Matrix::C => &row.c,
            };
            lc.iter().filter(|&&(k, _)| k == i).map(|&(_, c)| c).sum()
        });
        self.interpolate(&values)
    }

    /// Lagrange basis values `ℓ_j(τ)`, linear time.
    pub fn lagrange_at(&self, tau: FieldElement) -> Vec<FieldElement> {
        match &self.domain {
            Domain::Consecutive { points, inv_weights } => {
                if let Some(j) = points.iter().position(|&x| x == tau) {
                    let mut out = vec![FieldElement::zero(); points.len()];
                    out[j] = FieldElement::one();
                    return out;
                }
                let z = self.target_at(tau);
                let mut denom: Vec<FieldElement> = points.iter().map(|&x| tau - x).collect();
                FieldElement::batch_inverse(&mut denom);
                denom.iter().zip(inv_weights).map(|(&d, &w)| z * d * w).collect()
            }
            Domain::Radix2(d) => from_fr(d.evaluate_all_lagrange_coefficients(tau.0)),
        }
    }

    pub fn evaluate_at(&self, tau: FieldElement) -> QapEvaluation {
        let basis = self.lagrange_at(tau);
        let n = self.num_variables();
        let mut ev = QapEvaluation {
            a: vec![FieldElement::zero(); n],
            b: vec![FieldElement::zero(); n],
            c: vec![FieldElement::zero(); n],
            z: self.target_at(tau),
        };
        for (row, &l) in self.r1cs.constraints().iter().zip(&basis) {
            for &(i, c) in &row.a {
                ev.a[i] += c * l;
            }
            for &(i, c) in &row.b {
                ev.b[i] += c * l;
            }
            for &(i, c) in &row.c {
                ev.c[i] += c * l;
            }
        }
        ev
    }

    fn check_len(&self, z: &[FieldElement]) -> Result<(), ConstraintError> {
        if z.len() != self.num_variables() {
            return Err(ConstraintError::Shape(format!("assignment has {} values, expected {}", z.len(), self.num_variables())));
        }
        Ok(())
    }

    fn row_evaluations(&self, z: &[FieldElement]) -> [Vec<FieldElement>; 3] {
        let d = self.domain_size();
        let mut out = [Vec::with_capacity(d), Vec::with_capacity(d), Vec::with_capacity(d)];
        for row in self.r1cs.constraints() {
            let (x, y, w) = row.eval(z);
            out[0].push(x);
            out[1].push(y);
            out[2].push(w);
        }
        for v in &mut out {
            v.resize(d, FieldElement::zero());
        }
        out
    }

    /// `A(X), B(X), C(X)` for an assignment in variable order.
    pub fn witness_polynomials(&self, z: &[FieldElement]) -> Result<(Polynomial, Polynomial, Polynomial), ConstraintError> {
        self.check_len(z)?;
        let [a, b, c] = self.row_evaluations(z);
        Ok((self.interpolate(&a), self.interpolate(&b), self.interpolate(&c)))
    }

    /// `H = (A·B − C) / Z`, failing when the division leaves a remainder.
    pub fn compute_h(&self, z: &[FieldElement]) -> Result<Polynomial, ConstraintError> {
        self.prover_polynomials(z).map(|(_, _, h)| h)
    }

    /// `A(X)`, `B(X)` and `H(X)` for an assignment, sharing the interpolation work.
    pub fn prover_polynomials(&self, z: &[FieldElement]) -> Result<(Polynomial, Polynomial, Polynomial), ConstraintError> {
        self.check_len(z)?;
        match &self.domain {
            Domain::Consecutive { .. } => {
                let (a, b, c) = self.witness_polynomials(z)?;
                let p = &(&a * &b) - &c;
                let (h, r) = p.divide(self.target()).expect("target is non-zero");
                if !r.is_zero() {
                    return Err(ConstraintError::NotSatisfying);
                }
                Ok((a, b, h))
            }
            Domain::Radix2(d) => {
                let [a, b, c] = self.row_evaluations(z);
                // A·B − C vanishes on the domain exactly when every row holds
                if a.iter().zip(&b).zip(&c).any(|((&x, &y), &w)| x * y != w) {
                    return Err(ConstraintError::NotSatisfying);
                }
                // evaluate on a coset, where Z is the non-zero constant g^N − 1
                let coset = d.get_coset(Fr::GENERATOR).expect("coset of a radix-2 domain");
                let coefficients = |v: Vec<FieldElement>| {
                    let mut f = to_fr(&v);
                    d.ifft_in_place(&mut f);
                    f
                };
                let (a, b, c) = (coefficients(a), coefficients(b), coefficients(c));
                let on_coset = |f: &[Fr]| coset.fft(f);
                let (ac, bc, cc) = (on_coset(&a), on_coset(&b), on_coset(&c));
                let z_inv = ark_ff::Field::inverse(&d.evaluate_vanishing_polynomial(Fr::GENERATOR)).expect("g outside the domain");
                let mut h: Vec<Fr> = ac.iter().zip(&bc).zip(&cc).map(|((&x, &y), &w)| (x * y - w) * z_inv).collect();
                coset.ifft_in_place(&mut h);
                Ok((Polynomial::new(from_fr(a)), Polynomial::new(from_fr(b)), Polynomial::new(from_fr(h))))
            }
        }
    }
}
