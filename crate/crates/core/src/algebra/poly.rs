use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{AlgebraError, FieldElement};

/// Dense polynomial, coefficients in ascending degree.
///
/// Trailing zeros are trimmed so the zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Polynomial {
    coeffs: Vec<FieldElement>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: FieldElement) -> Self {
        Polynomial::new(vec![c])
    }

    pub fn from_u64s(coeffs: &[u64]) -> Self {
        Polynomial::new(coeffs.iter().map(|&c| FieldElement::from_u64(c)).collect())
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<FieldElement> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: FieldElement) -> FieldElement {
        self.coeffs.iter().rev().fold(FieldElement::zero(), |acc, &c| acc * x + c)
    }

    pub fn scale(&self, s: FieldElement) -> Self {
        Polynomial::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// `Π (X − x)` over the given roots.
    pub fn vanishing(roots: &[FieldElement]) -> Self {
        let mut c = Vec::with_capacity(roots.len() + 1);
        c.push(FieldElement::one());
        for &r in roots {
            c.push(FieldElement::zero());
            for i in (1..c.len()).rev() {
                c[i] = c[i - 1] - r * c[i];
            }
            c[0] = -r * c[0];
        }
        Polynomial::new(c)
    }

    /// Long division: `self = q·d + r`, `deg r < deg d`.
    pub fn divide(&self, d: &Polynomial) -> Result<(Polynomial, Polynomial), AlgebraError> {
        let dd = d.degree().ok_or(AlgebraError::ZeroDivisor)?;
        let Some(nd) = self.degree() else {
            return Ok((Polynomial::zero(), Polynomial::zero()));
        };
        if nd < dd {
            return Ok((Polynomial::zero(), self.clone()));
        }
        let lead_inv = d.coeffs[dd].inverse()?;
        let mut rem = self.coeffs.clone();
        let mut q = vec![FieldElement::zero(); nd - dd + 1];
        for i in (0..=nd - dd).rev() {
            let c = rem[i + dd] * lead_inv;
            q[i] = c;
            if c.is_zero() {
                continue;
            }
            for (j, &dc) in d.coeffs.iter().enumerate() {
                rem[i + j] -= c * dc;
            }
        }
        rem.truncate(dd);
        Ok((Polynomial::new(q), Polynomial::new(rem)))
    }

    /// Divides by `X − r`, returning the quotient and remainder `self(r)`.
    pub fn divide_linear(&self, r: FieldElement) -> (Polynomial, FieldElement) {
        if self.coeffs.is_empty() {
            return (Polynomial::zero(), FieldElement::zero());
        }
        let n = self.coeffs.len();
        let mut q = vec![FieldElement::zero(); n - 1];
        let mut carry = FieldElement::zero();
        for i in (0..n).rev() {
            let v = self.coeffs[i] + carry * r;
            if i == 0 {
                return (Polynomial::new(q), v);
            }
            q[i - 1] = v;
            carry = v;
        }
        unreachable!()
    }

    /// Lagrange interpolation through `(x, y)` pairs with distinct `x`.
    pub fn interpolate(points: &[(FieldElement, FieldElement)]) -> Result<Self, AlgebraError> {
        let xs: Vec<FieldElement> = points.iter().map(|p| p.0).collect();
        let ys: Vec<FieldElement> = points.iter().map(|p| p.1).collect();
        let mut weights = vec![FieldElement::one(); xs.len()];
        for (j, w) in weights.iter_mut().enumerate() {
            for (k, &xk) in xs.iter().enumerate() {
                if k != j {
                    *w *= xs[j] - xk;
                }
            }
            if w.is_zero() {
                let dup = (0..xs.len()).filter(|&k| k != j && xs[k] == xs[j]).max().unwrap_or(j);
                return Err(AlgebraError::DuplicatePoint(dup.max(j)));
            }
        }
        FieldElement::batch_inverse(&mut weights);
        Ok(Self::interpolate_with(&xs, &ys, &weights, &Polynomial::vanishing(&xs)))
    }

    /// `Σ y_j·w_j·Z(X)/(X − x_j)` given inverse barycentric weights and `Z`.
    pub(crate) fn interpolate_with(xs: &[FieldElement], ys: &[FieldElement], inv_weights: &[FieldElement], z: &Polynomial) -> Self {
        let n = xs.len();
        let mut acc = vec![FieldElement::zero(); n];
        for j in 0..n {
            let c = ys[j] * inv_weights[j];
            if c.is_zero() {
                continue;
            }
            // synthetic division of Z by (X − x_j), folded into the sum
            let mut carry = FieldElement::zero();
            for i in (1..=n).rev() {
                carry = z.coeffs[i] + carry * xs[j];
                acc[i - 1] += c * carry;
            }
        }
        Polynomial::new(acc)
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}·X"),
                _ => format!("{c}·X^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let get = |p: &Polynomial, i: usize| p.coeffs.get(i).copied().unwrap_or_default();
        Polynomial::new((0..n).map(|i| get(self, i) + get(rhs, i)).collect())
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|&c| -c).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![FieldElement::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn f(v: u64) -> FieldElement {
        FieldElement::from_u64(v)
    }

    fn random_poly(rng: &mut ChaCha20Rng, len: usize) -> Polynomial {
        Polynomial::new((0..len).map(|_| FieldElement::random(rng)).collect())
    }

    #[test]
    fn single_point_is_constant() {
        let p = Polynomial::interpolate(&[(f(5), f(7))]).unwrap();
        assert_eq!(p, Polynomial::constant(f(7)));
    }

    #[test]
    fn three_points_give_square() {
        let p = Polynomial::interpolate(&[(f(0), f(0)), (f(1), f(1)), (f(2), f(4))]).unwrap();
        assert_eq!(p, Polynomial::from_u64s(&[0, 0, 1]));
    }

    #[test]
    fn duplicate_x_rejected() {
        let r = Polynomial::interpolate(&[(f(1), f(2)), (f(3), f(4)), (f(1), f(5))]);
        assert_eq!(r, Err(AlgebraError::DuplicatePoint(2)));
    }

    #[test]
    fn interpolation_evaluates_back() {
        let mut rng = ChaCha20Rng::seed_from_u64(6);
        let pts: Vec<_> = (0..6).map(|_| (FieldElement::random(&mut rng), FieldElement::random(&mut rng))).collect();
        let p = Polynomial::interpolate(&pts).unwrap();
        assert!(p.degree().unwrap() < 6);
        for (x, y) in pts {
            assert_eq!(p.eval(x), y);
        }
    }

    #[test]
    fn difference_of_squares() {
        let n = &Polynomial::from_u64s(&[0, 0, 1]) - &Polynomial::constant(f(1));
        let d = Polynomial::new(vec![-f(1), f(1)]);
        let (q, r) = n.divide(&d).unwrap();
        assert_eq!(q, Polynomial::from_u64s(&[1, 1]));
        assert!(r.is_zero());
    }

    #[test]
    fn x_over_x_plus_one() {
        let (q, r) = Polynomial::from_u64s(&[0, 1]).divide(&Polynomial::from_u64s(&[1, 1])).unwrap();
        assert_eq!(q, Polynomial::constant(f(1)));
        assert_eq!(r, Polynomial::constant(-f(1)));
    }

    #[test]
    fn zero_divisor_rejected() {
        assert_eq!(Polynomial::from_u64s(&[1]).divide(&Polynomial::zero()), Err(AlgebraError::ZeroDivisor));
    }

    #[test]
    fn divide_multiplies_back() {
        let mut rng = ChaCha20Rng::seed_from_u64(8);
        let n = random_poly(&mut rng, 9);
        let d = random_poly(&mut rng, 4);
        let (q, r) = n.divide(&d).unwrap();
        assert!(r.degree().map_or(true, |dr| dr < 3));
        assert_eq!(&(&q * &d) + &r, n);
    }

    #[test]
    fn vanishing_has_roots() {
        let roots = [f(1), f(2), f(3)];
        let z = Polynomial::vanishing(&roots);
        assert_eq!(z.degree(), Some(3));
        assert!(roots.iter().all(|&r| z.eval(r).is_zero()));
        assert_eq!(z.eval(f(4)), f(6));
    }

    #[test]
    fn divide_linear_matches_long_division() {
        let mut rng = ChaCha20Rng::seed_from_u64(9);
        let n = random_poly(&mut rng, 7);
        let r = FieldElement::random(&mut rng);
        let (q, rem) = n.divide_linear(r);
        let (q2, rem2) = n.divide(&Polynomial::new(vec![-r, FieldElement::one()])).unwrap();
        assert_eq!(q, q2);
        assert_eq!(Polynomial::constant(rem), rem2);
        assert_eq!(rem, n.eval(r));
    }

    proptest! {
        #[test]
        fn exact_division_iff_divisible(seed in any::<u64>(), a in 1usize..6, b in 1usize..5) {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            let d = random_poly(&mut rng, b + 1);
            let q = random_poly(&mut rng, a);
            let n = &q * &d;
            let (q2, r) = n.divide(&d).unwrap();
            prop_assert!(r.is_zero());
            prop_assert_eq!(q2, q);
            let bumped = &n + &Polynomial::constant(FieldElement::one());
            if d.degree().unwrap() > 0 {
                prop_assert!(!bumped.divide(&d).unwrap().1.is_zero());
            }
        }
    }
}
