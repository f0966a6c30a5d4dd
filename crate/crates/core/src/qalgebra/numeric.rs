//! Float-coefficient polynomials at a fixed numeric q.
//!
//! Used for searched (inexact) certificates and residual bookkeeping.

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::poly::{commutation_exponent, Monomial, QPolynomial};

#[derive(Clone, Debug, PartialEq)]
pub struct NumericPoly {
    q_val: f64,
    terms: BTreeMap<Monomial, Complex64>,
}

impl NumericPoly {
    pub fn zero(q_val: f64) -> Self {
        NumericPoly { q_val, terms: BTreeMap::new() }
    }

    pub fn from_poly(f: &QPolynomial, q_val: f64) -> Self {
        let mut out = NumericPoly::zero(q_val);
        for (mono, c) in f.terms() {
            out.add_term(*mono, c.eval(q_val));
        }
        out
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Complex64)>>(q_val: f64, iter: I) -> Self {
        let mut out = NumericPoly::zero(q_val);
        for (mono, c) in iter {
            out.add_term(mono, c);
        }
        out
    }

    pub fn q_val(&self) -> f64 {
        self.q_val
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Complex64)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mono: &Monomial) -> Complex64 {
        self.terms.get(mono).copied().unwrap_or_default()
    }

    pub fn add_term(&mut self, mono: Monomial, c: Complex64) {
        if c == Complex64::new(0.0, 0.0) {
            return;
        }
        *self.terms.entry(mono).or_default() += c;
    }

    pub fn mul(&self, other: &NumericPoly) -> NumericPoly {
        let mut out = NumericPoly::zero(self.q_val);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let w = self.q_val.powi(commutation_exponent(*a, *b) as i32);
                out.add_term(Monomial::new(a.m + b.m, a.n + b.n), ca * cb * w);
            }
        }
        out
    }

    pub fn adjoint(&self) -> NumericPoly {
        NumericPoly {
            q_val: self.q_val,
            terms: self.terms.iter().map(|(mono, c)| (mono.adjoint(), c.conj())).collect(),
        }
    }

    pub fn add(&self, other: &NumericPoly) -> NumericPoly {
        let mut out = self.clone();
        for (mono, c) in &other.terms {
            out.add_term(*mono, *c);
        }
        out
    }

    pub fn sub(&self, other: &NumericPoly) -> NumericPoly {
        let mut out = self.clone();
        for (mono, c) in &other.terms {
            out.add_term(*mono, -c);
        }
        out
    }

    pub fn scale(&self, w: f64) -> NumericPoly {
        NumericPoly {
            q_val: self.q_val,
            terms: self.terms.iter().map(|(mono, c)| (*mono, c * w)).collect(),
        }
    }

    /// `f^* f`.
    pub fn hermitian_square(&self) -> NumericPoly {
        self.adjoint().mul(self)
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qalgebra::poly::normal_mul;
    use crate::qalgebra::scalar::Scalar;

    #[test]
    fn agrees_with_exact_product() {
        let f = QPolynomial::x() + QPolynomial::x_star().scale(&Scalar::s_pow(1));
        let g = QPolynomial::monomial(1, 2) + QPolynomial::one().scale(&Scalar::i());
        for q in [0.5, 2.0, 3.0] {
            let exact = NumericPoly::from_poly(&normal_mul(&f, &g), q);
            let num = NumericPoly::from_poly(&f, q).mul(&NumericPoly::from_poly(&g, q));
            assert!(exact.sub(&num).max_abs() < 1e-13);
        }
    }

    #[test]
    fn hermitian_square_is_hermitian() {
        let f = NumericPoly::from_terms(
            2.0,
            [(Monomial::new(0, 1), Complex64::new(1.0, 2.0)), (Monomial::ONE, Complex64::new(-0.5, 0.0))],
        );
        let sq = f.hermitian_square();
        assert!(sq.sub(&sq.adjoint()).max_abs() < 1e-15);
    }
}
