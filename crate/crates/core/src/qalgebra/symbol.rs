//! Trigonometric symbol of the top-degree part.
//!
//! With top degree `2M` the top part is written as
//! `Σ_k b_k (x*x)^{M-k} x^{2k}` (and `x*^{2|k|} (x*x)^{M-|k|}` for `k < 0`),
//! and the symbol is `S(θ) = Σ_k b_k q^{-|k|(M-|k|)} q^{|k|/2} e^{ikθ}`.
//! Coefficients are stored with these weights already applied, as exact scalars.

use num_complex::Complex64;

use super::poly::{to_radial, QPolynomial};
use super::scalar::Scalar;
use super::AlgebraError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolSeries {
    pub m_half: u32,
    /// Coefficient of `e^{ikθ}`, `k = 0..=m_half`.
    pub pos: Vec<Scalar>,
    /// Coefficient of `e^{-ikθ}`, `k = 1..=m_half` (index `k-1`).
    pub neg: Vec<Scalar>,
}

/// Which weight formula to use when building the series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SymbolConvention {
    /// Weights `q^{-k(M-k)} q^{k/2}` indexed by the x-power `2k`.
    #[default]
    ProofDerived,
    /// Weights `|ω|^{-r(D-2r)} ω^{D/2-r}` indexed by the radial power `r`, `|ω| = √q`.
    Printed,
}

impl SymbolSeries {
    pub fn constant(c: Scalar) -> Self {
        SymbolSeries { m_half: 0, pos: vec![c], neg: Vec::new() }
    }

    pub fn is_hermitian(&self) -> bool {
        self.pos.first().is_none_or(Scalar::is_real)
            && self.neg.len() + 1 == self.pos.len().max(1)
            && self.neg.iter().zip(self.pos.iter().skip(1)).all(|(n, p)| *n == p.conj())
    }

    pub fn eval(&self, theta: f64, q_val: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, c) in self.pos.iter().enumerate() {
            acc += c.eval(q_val) * Complex64::from_polar(1.0, k as f64 * theta);
        }
        for (k, c) in self.neg.iter().enumerate() {
            acc += c.eval(q_val) * Complex64::from_polar(1.0, -((k + 1) as f64) * theta);
        }
        acc
    }
}

pub fn symbol(f: &QPolynomial) -> Result<SymbolSeries, AlgebraError> {
    symbol_with(f, SymbolConvention::ProofDerived)
}

pub fn symbol_with(f: &QPolynomial, convention: SymbolConvention) -> Result<SymbolSeries, AlgebraError> {
    let deg = f.degree();
    if deg < 0 {
        return Err(AlgebraError::ZeroPolynomial);
    }
    if deg % 2 != 0 {
        return Err(AlgebraError::OddDegree(deg));
    }
    let top_deg = deg as i32;
    let m_half = (deg / 2) as u32;
    let mut pos = vec![Scalar::zero(); m_half as usize + 1];
    let mut neg = vec![Scalar::zero(); m_half as usize];
    for entry in to_radial(&f.top_part())? {
        // top-degree monomials of even total degree have even x-power
        debug_assert!(entry.k % 2 == 0);
        let k = entry.k / 2;
        let ka = k.abs();
        let s_exp = match convention {
            SymbolConvention::ProofDerived => -2 * ka * (m_half as i32 - ka) + ka,
            SymbolConvention::Printed => {
                let r = entry.r as i32;
                -r * (top_deg - 2 * r) + (top_deg / 2 - r)
            }
        };
        let c = &entry.coeff * &Scalar::s_pow(s_exp);
        if k >= 0 {
            pos[k as usize] += c;
        } else {
            neg[(ka - 1) as usize] += c;
        }
    }
    Ok(SymbolSeries { m_half, pos, neg })
}

/// Minimum of `S(θ)` over `θ = 2πj/grid`.
pub fn symbol_min(sym: &SymbolSeries, q_val: f64, grid: usize) -> Result<f64, AlgebraError> {
    if grid < 3 {
        return Err(AlgebraError::InvalidArgument("symbol grid must have at least 3 points".into()));
    }
    if !sym.is_hermitian() {
        return Err(AlgebraError::NotHermitian);
    }
    let scale = sym
        .pos
        .iter()
        .chain(sym.neg.iter())
        .map(|c| c.eval(q_val).norm())
        .fold(1.0, f64::max);
    let mut min = f64::INFINITY;
    for j in 0..grid {
        let theta = 2.0 * std::f64::consts::PI * j as f64 / grid as f64;
        let v = sym.eval(theta, q_val);
        if v.im.abs() > 1e-12 * scale {
            return Err(AlgebraError::Internal(format!(
                "symbol has imaginary part {:e} at θ = {theta}",
                v.im
            )));
        }
        min = min.min(v.re);
    }
    Ok(min)
}
