//! Finite Fourier series on the torus with coefficients in the exact field.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::exact::ExactComplex;
use crate::operator::DiffOperator;

/// `sum c(m, n) z1^m z2^n` with no stored zeros.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TrigPoly {
    coeffs: BTreeMap<(i64, i64), ExactComplex>,
}

impl TrigPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `c z1^m z2^n`.
    pub fn monomial(m: i64, n: i64, c: ExactComplex) -> Self {
        let mut f = Self::zero();
        f.add_term(m, n, c);
        f
    }

    pub fn from_terms<I: IntoIterator<Item = ((i64, i64), ExactComplex)>>(it: I) -> Self {
        let mut f = Self::zero();
        for ((m, n), c) in it {
            f.add_term(m, n, c);
        }
        f
    }

    pub fn add_term(&mut self, m: i64, n: i64, c: ExactComplex) {
        let v = match self.coeffs.remove(&(m, n)) {
            Some(old) => &old + &c,
            None => c,
        };
        if !v.is_zero() {
            self.coeffs.insert((m, n), v);
        }
    }

    pub fn coefficient(&self, m: i64, n: i64) -> ExactComplex {
        self.coeffs.get(&(m, n)).cloned().unwrap_or_else(ExactComplex::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i64, i64), &ExactComplex)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.coeffs.values().all(|c| c.is_exact())
    }

    /// No coefficient on either axis.
    pub fn is_proper(&self) -> bool {
        self.coeffs.keys().all(|&(m, n)| m != 0 && n != 0)
    }

    pub fn proper_part(&self) -> Self {
        TrigPoly {
            coeffs: self
                .coeffs
                .iter()
                .filter(|((m, n), _)| *m != 0 && *n != 0)
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
        }
    }

    /// Largest `max(|m|, |n|)` over the support.
    pub fn bandwidth(&self) -> i64 {
        self.coeffs.keys().map(|(m, n)| m.abs().max(n.abs())).max().unwrap_or(0)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut f = self.clone();
        for ((m, n), c) in &o.coeffs {
            f.add_term(*m, *n, c.clone());
        }
        f
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&ExactComplex::from_int(-1))
    }

    pub fn scale(&self, c: &ExactComplex) -> Self {
        Self::from_terms(self.coeffs.iter().map(|(k, v)| (*k, v * c)))
    }

    /// Coefficients as floats.
    pub fn to_complex(&self) -> BTreeMap<(i64, i64), Complex64> {
        self.coeffs.iter().map(|(k, v)| (*k, v.to_complex64())).collect()
    }
}

/// Fourier action of a constant-coefficient operator.
pub fn apply_operator(op: &DiffOperator, f: &TrigPoly) -> TrigPoly {
    if op.is_zero() {
        return TrigPoly::zero();
    }
    TrigPoly::from_terms(f.coeffs.iter().map(|(&(m, n), c)| {
        let s = op.eval_charpoly_exact(m, n).expect("nonzero operator");
        ((m, n), c * &s)
    }))
}

pub fn proper_part(f: &TrigPoly) -> TrigPoly {
    f.proper_part()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(m: i64, n: i64) -> TrigPoly {
        TrigPoly::monomial(m, n, ExactComplex::one())
    }

    #[test]
    fn derivative_action() {
        let g = apply_operator(&DiffOperator::d1(), &z(1, 1));
        assert_eq!(g, TrigPoly::monomial(1, 1, ExactComplex::two_pi_i()));
        let g = apply_operator(&DiffOperator::dmono(3, 0), &z(2, 5));
        assert_eq!(g.coefficient(2, 5), ExactComplex::two_pi_i_pow(2, 3));
        let f = z(1, 1).add(&z(-2, 3).scale(&ExactComplex::from_int(7)));
        assert_eq!(apply_operator(&DiffOperator::identity(), &f), f);
    }

    #[test]
    fn projection() {
        let f = z(1, 0).add(&z(1, 1));
        assert_eq!(f.proper_part(), z(1, 1));
        assert_eq!(z(1, 1).proper_part(), z(1, 1));
        assert!(z(0, 0).proper_part().is_zero());
        assert_eq!(f.proper_part().proper_part(), f.proper_part());
    }

    #[test]
    fn no_stored_zeros() {
        let f = z(1, 1).sub(&z(1, 1));
        assert!(f.is_zero());
        assert_eq!(f.len(), 0);
    }
}
