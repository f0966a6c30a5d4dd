//! Normal-form polynomials `Σ α_{mn} x*^m x^n` in A(q).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::scalar::{Rational, Scalar};
use super::AlgebraError;

/// The basis element `x*^m x^n`.
///
/// Ordered by total degree, then by `m`, which is the canonical term order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub m: u32,
    pub n: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { m: 0, n: 0 };

    pub fn new(m: u32, n: u32) -> Self {
        Monomial { m, n }
    }

    pub fn degree(&self) -> u32 {
        self.m + self.n
    }

    pub fn adjoint(&self) -> Self {
        Monomial { m: self.n, n: self.m }
    }

    pub fn is_diagonal(&self) -> bool {
        self.m == self.n
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.degree(), self.m).cmp(&(other.degree(), other.m))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Exponent of q picked up by `(x*^a x^b)(x*^c x^d) = q^{bc} x*^{a+c} x^{b+d}`.
pub fn commutation_exponent(left: Monomial, right: Monomial) -> u32 {
    left.n * right.m
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QPolynomial {
    terms: BTreeMap<Monomial, Scalar>,
}

impl QPolynomial {
    pub fn zero() -> Self {
        QPolynomial::default()
    }

    pub fn one() -> Self {
        QPolynomial::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        QPolynomial::term(Monomial::ONE, c)
    }

    pub fn term(mono: Monomial, c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(mono, c);
        }
        QPolynomial { terms }
    }

    pub fn monomial(m: u32, n: u32) -> Self {
        QPolynomial::term(Monomial::new(m, n), Scalar::one())
    }

    pub fn x() -> Self {
        QPolynomial::monomial(0, 1)
    }

    pub fn x_star() -> Self {
        QPolynomial::monomial(1, 0)
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Scalar)>>(iter: I) -> Self {
        let mut out = QPolynomial::zero();
        for (mono, c) in iter {
            out.add_term(mono, c);
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mono: &Monomial) -> Scalar {
        self.terms.get(mono).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree, `-1` for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.terms
            .keys()
            .map(|mono| mono.degree() as i64)
            .max()
            .unwrap_or(-1)
    }

    pub fn is_hermitian(&self) -> bool {
        self.terms
            .iter()
            .all(|(mono, c)| self.coeff(&mono.adjoint()) == c.conj())
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(Monomial::degree);
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|e| e == d),
        }
    }

    /// The homogeneous part of top degree.
    pub fn top_part(&self) -> QPolynomial {
        let d = self.degree();
        QPolynomial {
            terms: self
                .terms
                .iter()
                .filter(|(mono, _)| mono.degree() as i64 == d)
                .map(|(mono, c)| (*mono, c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> QPolynomial {
        QPolynomial::from_terms(self.terms.iter().map(|(mono, a)| (*mono, a * c)))
    }

    pub fn map_coeffs<F: FnMut(&Scalar) -> Scalar>(&self, mut f: F) -> QPolynomial {
        QPolynomial::from_terms(self.terms.iter().map(|(mono, a)| (*mono, f(a))))
    }

    pub fn pow(&self, e: u32) -> QPolynomial {
        let mut acc = QPolynomial::one();
        for _ in 0..e {
            acc = normal_mul(&acc, self);
        }
        acc
    }

    pub fn adjoint(&self) -> QPolynomial {
        involution(self)
    }

    /// Coefficients reduced at a rational q (see [`Scalar::specialize`]).
    pub fn specialize(&self, q: &Rational) -> QPolynomial {
        self.map_coeffs(|c| c.specialize(q))
    }

    pub fn add_term(&mut self, mono: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&mono) {
            Some(slot) => {
                *slot += c;
                if slot.is_zero() {
                    self.terms.remove(&mono);
                }
            }
            None => {
                self.terms.insert(mono, c);
            }
        }
    }
}

/// Product in A(q), in normal form.
pub fn normal_mul(f: &QPolynomial, g: &QPolynomial) -> QPolynomial {
    let mut out = QPolynomial::zero();
    for (a, ca) in &f.terms {
        for (b, cb) in &g.terms {
            let e = commutation_exponent(*a, *b) as i32;
            let c = &(ca * cb) * &Scalar::q_pow(e);
            out.add_term(Monomial::new(a.m + b.m, a.n + b.n), c);
        }
    }
    out
}

/// `(x*^m x^n)* = x*^n x^m`, coefficients conjugated.
pub fn involution(f: &QPolynomial) -> QPolynomial {
    QPolynomial {
        terms: f
            .terms
            .iter()
            .map(|(mono, c)| (mono.adjoint(), c.conj()))
            .collect(),
    }
}

/// Conditional expectation onto the diagonal `Σ α_nn x*^n x^n`.
pub fn cexp(f: &QPolynomial) -> QPolynomial {
    QPolynomial {
        terms: f
            .terms
            .iter()
            .filter(|(mono, _)| mono.is_diagonal())
            .map(|(mono, c)| (*mono, c.clone()))
            .collect(),
    }
}

/// `x*^n x^n = q^{-n(n-1)/2} (x*x)^n`: exponent of q in that relation.
pub fn radial_exponent(n: u32) -> i32 {
    -((n as i32) * (n as i32 - 1) / 2)
}

/// Coefficients of `cexp(f)` as a polynomial in `t = x*x`: entry `n` multiplies `t^n`.
pub fn cexp_radial(f: &QPolynomial) -> Vec<Scalar> {
    let diag = cexp(f);
    let top = diag.terms.keys().map(|mono| mono.m).max();
    let Some(top) = top else {
        return Vec::new();
    };
    let mut out = vec![Scalar::zero(); top as usize + 1];
    for (mono, c) in &diag.terms {
        out[mono.m as usize] = c * &Scalar::q_pow(radial_exponent(mono.m));
    }
    out
}

/// Inverse of [`cexp_radial`]: `Σ p_n t^n ↦ Σ p_n (x*x)^n` in normal form.
pub fn from_radial(coeffs: &[Scalar]) -> QPolynomial {
    QPolynomial::from_terms(coeffs.iter().enumerate().map(|(n, c)| {
        let n = n as u32;
        (Monomial::new(n, n), c * &Scalar::q_pow(-radial_exponent(n)))
    }))
}

/// Entry of the radial table: the coefficient of `(x*x)^r x^k` for `k ≥ 0`,
/// or of `x*^{|k|} (x*x)^r` for `k < 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadialTerm {
    pub r: u32,
    pub k: i32,
    pub coeff: Scalar,
}

/// Rewrite a homogeneous polynomial in the radial basis.
pub fn to_radial(f: &QPolynomial) -> Result<Vec<RadialTerm>, AlgebraError> {
    if !f.is_homogeneous() {
        return Err(AlgebraError::NotHomogeneous);
    }
    let mut out = Vec::with_capacity(f.len());
    for (mono, c) in &f.terms {
        let (i, j) = (mono.m, mono.n);
        let r = i.min(j);
        // x*^i x^j = x*^{i-r} (x*^r x^r) x^{j-r} and x*^r x^r = q^{-r(r-1)/2} (x*x)^r;
        // the leftover x* / x power commutes past nothing, so no further q-factors.
        let coeff = c * &Scalar::q_pow(radial_exponent(r));
        out.push(RadialTerm {
            r,
            k: j as i32 - i as i32,
            coeff,
        });
    }
    Ok(out)
}

impl Add for &QPolynomial {
    type Output = QPolynomial;
    fn add(self, rhs: &QPolynomial) -> QPolynomial {
        let mut out = self.clone();
        for (mono, c) in &rhs.terms {
            out.add_term(*mono, c.clone());
        }
        out
    }
}

impl Sub for &QPolynomial {
    type Output = QPolynomial;
    fn sub(self, rhs: &QPolynomial) -> QPolynomial {
        let mut out = self.clone();
        for (mono, c) in &rhs.terms {
            out.add_term(*mono, -c);
        }
        out
    }
}

impl Mul for &QPolynomial {
    type Output = QPolynomial;
    fn mul(self, rhs: &QPolynomial) -> QPolynomial {
        normal_mul(self, rhs)
    }
}

impl Neg for &QPolynomial {
    type Output = QPolynomial;
    fn neg(self) -> QPolynomial {
        self.map_coeffs(|c| -c)
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $f:ident),*) => {$(
        impl $tr<QPolynomial> for QPolynomial {
            type Output = QPolynomial;
            fn $f(self, rhs: QPolynomial) -> QPolynomial { (&self).$f(&rhs) }
        }
        impl<'a> $tr<&'a QPolynomial> for QPolynomial {
            type Output = QPolynomial;
            fn $f(self, rhs: &QPolynomial) -> QPolynomial { (&self).$f(rhs) }
        }
        impl<'a> $tr<QPolynomial> for &'a QPolynomial {
            type Output = QPolynomial;
            fn $f(self, rhs: QPolynomial) -> QPolynomial { self.$f(&rhs) }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

impl Neg for QPolynomial {
    type Output = QPolynomial;
    fn neg(self) -> QPolynomial {
        -&self
    }
}

impl From<Scalar> for QPolynomial {
    fn from(c: Scalar) -> Self {
        QPolynomial::constant(c)
    }
}

impl fmt::Display for QPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::expr::print(self))
    }
}

impl fmt::Debug for QPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QPolynomial({self})")
    }
}
