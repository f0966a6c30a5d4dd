//! Laurent polynomials in `s = √q` with Gaussian-rational coefficients.
//!
//! `q` is never a float here: it is `s²`, so identities involving `q^{1/2}`
//! (shift weights, Eq.-(14)-style factors) can be checked exactly.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;
pub type GaussRational = Complex<BigRational>;

/// Exact scalar `Σ_p c_p s^p`; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    coeffs: BTreeMap<i32, GaussRational>,
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn rat_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

fn gauss_is_zero(c: &GaussRational) -> bool {
    c.re.is_zero() && c.im.is_zero()
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Scalar::from_rational(Rational::one())
    }

    /// `c · s^p`.
    pub fn term(p: i32, c: GaussRational) -> Self {
        let mut coeffs = BTreeMap::new();
        if !gauss_is_zero(&c) {
            coeffs.insert(p, c);
        }
        Scalar { coeffs }
    }

    pub fn from_rational(r: Rational) -> Self {
        Scalar::term(0, Complex::new(r, Rational::zero()))
    }

    pub fn from_int(v: i64) -> Self {
        Scalar::from_rational(rat_int(v))
    }

    pub fn from_gauss(c: GaussRational) -> Self {
        Scalar::term(0, c)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Scalar::term(0, Complex::new(Rational::zero(), Rational::one()))
    }

    pub fn s_pow(p: i32) -> Self {
        Scalar::term(p, Complex::new(Rational::one(), Rational::zero()))
    }

    pub fn q_pow(k: i32) -> Self {
        Scalar::s_pow(2 * k)
    }

    /// Rational polynomial in q with integer exponents, e.g. from `[(0, 1), (1, 1)]` ↦ 1 + q.
    pub fn from_q_terms(terms: &[(i32, Rational)]) -> Self {
        let mut out = Scalar::zero();
        for (k, c) in terms {
            out += Scalar::q_pow(*k) * Scalar::from_rational(c.clone());
        }
        out
    }

    pub fn coeffs(&self) -> &BTreeMap<i32, GaussRational> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        *self == Scalar::one()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// True when every coefficient is real (s itself is real).
    pub fn is_real(&self) -> bool {
        self.coeffs.values().all(|c| c.im.is_zero())
    }

    /// Complex conjugate; `s` is real so only coefficients are conjugated.
    pub fn conj(&self) -> Self {
        Scalar {
            coeffs: self
                .coeffs
                .iter()
                .map(|(p, c)| (*p, Complex::new(c.re.clone(), -c.im.clone())))
                .collect(),
        }
    }

    /// Value as a plain real rational, if the scalar has no `s` and no imaginary part.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.coeffs.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (p, c) = self.coeffs.iter().next()?;
                (*p == 0 && c.im.is_zero()).then(|| c.re.clone())
            }
            _ => None,
        }
    }

    /// Single term `c·s^p`, if the scalar is a monomial in s.
    pub fn as_monomial(&self) -> Option<(i32, &GaussRational)> {
        if self.coeffs.len() == 1 {
            self.coeffs.iter().next().map(|(p, c)| (*p, c))
        } else {
            None
        }
    }

    /// Multiplicative inverse; only monomials `c·s^p` are units of the ring.
    pub fn inverse(&self) -> Option<Self> {
        let (p, c) = self.as_monomial()?;
        let norm = &c.re * &c.re + &c.im * &c.im;
        let inv = Complex::new(&c.re / &norm, -(&c.im / &norm));
        Some(Scalar::term(-p, inv))
    }

    /// Integer power; negative exponents need a unit.
    pub fn pow(&self, e: i64) -> Option<Self> {
        if e < 0 {
            return self.inverse()?.pow(-e);
        }
        let mut base = self.clone();
        let mut acc = Scalar::one();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Some(acc)
    }

    /// Substitute `s = √q_val` and sum.
    pub fn eval(&self, q_val: f64) -> Complex64 {
        let s = q_val.sqrt();
        self.coeffs
            .iter()
            .map(|(p, c)| {
                let (k, r) = (p.div_euclid(2), p.rem_euclid(2));
                let w = q_val.powi(k) * if r == 1 { s } else { 1.0 };
                Complex64::new(rat_to_f64(&c.re), rat_to_f64(&c.im)) * w
            })
            .sum()
    }

    /// Reduce at a rational `q`: `s^{2k+r} ↦ q^k s^r` with `r ∈ {0, 1}`.
    ///
    /// Two scalars agree at `q` iff their specializations are equal (`√q` is
    /// either rational, in which case `s` stays symbolic and the residual `s`
    /// terms must match separately, or irrational and linearly independent).
    pub fn specialize(&self, q: &Rational) -> Self {
        let mut out = Scalar::zero();
        for (p, c) in &self.coeffs {
            let k = p.div_euclid(2);
            let r = p.rem_euclid(2);
            let factor = pow_rational(q, k);
            let c = Complex::new(&c.re * &factor, &c.im * &factor);
            out += Scalar::term(r, c);
        }
        out
    }

    pub fn min_power(&self) -> Option<i32> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_power(&self) -> Option<i32> {
        self.coeffs.keys().next_back().copied()
    }

    fn add_term(&mut self, p: i32, c: GaussRational) {
        if gauss_is_zero(&c) {
            return;
        }
        let slot = self
            .coeffs
            .entry(p)
            .or_insert_with(|| Complex::new(Rational::zero(), Rational::zero()));
        *slot = &*slot + c;
        if gauss_is_zero(slot) {
            self.coeffs.remove(&p);
        }
    }
}

pub fn pow_rational(q: &Rational, k: i32) -> Rational {
    let base = if k < 0 { q.recip() } else { q.clone() };
    num_traits::pow(base, k.unsigned_abs() as usize)
}

/// `scalar_eval` under its contract name.
pub fn scalar_eval(a: &Scalar, q_val: f64) -> Complex64 {
    a.eval(q_val)
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::from_rational(r)
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::from_int(v)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<'a> AddAssign<&'a Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        for (p, c) in &rhs.coeffs {
            self.add_term(*p, c.clone());
        }
    }
}

impl AddAssign for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        for (p, c) in rhs.coeffs {
            self.add_term(p, c);
        }
    }
}

impl<'a> SubAssign<&'a Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        for (p, c) in &rhs.coeffs {
            self.add_term(*p, -c.clone());
        }
    }
}

impl SubAssign for Scalar {
    fn sub_assign(&mut self, rhs: Scalar) {
        *self -= &rhs;
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let mut out = Scalar::zero();
        for (p, a) in &self.coeffs {
            for (r, b) in &rhs.coeffs {
                out.add_term(p + r, a * b);
            }
        }
        out
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            coeffs: self.coeffs.iter().map(|(p, c)| (*p, -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $f:ident),*) => {$(
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $f(self, rhs: Scalar) -> Scalar { (&self).$f(&rhs) }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $f(self, rhs: &Scalar) -> Scalar { (&self).$f(rhs) }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $f(self, rhs: Scalar) -> Scalar { self.$f(&rhs) }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::expr::print_scalar(self))
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}
