//! Truncated weighted shift `X e_k = λ q^{-k/2} e_{k+1}` on `e_{-K} … e_K`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::OpError;
use crate::linalg::{operator_norm, CMatrix};
use crate::qalgebra::QPolynomial;

/// Endpoints of the fundamental domain Δq, with which end is closed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeltaQ {
    pub lo: f64,
    pub hi: f64,
    /// `[1, √q)` for q > 1; otherwise `(√q, 1]`.
    pub lo_closed: bool,
}

impl DeltaQ {
    pub fn new(q_val: f64) -> Result<Self, OpError> {
        check_q(q_val)?;
        let s = q_val.sqrt();
        Ok(if q_val > 1.0 {
            DeltaQ { lo: 1.0, hi: s, lo_closed: true }
        } else {
            DeltaQ { lo: s, hi: 1.0, lo_closed: false }
        })
    }

    pub fn contains(&self, t: f64) -> bool {
        if self.lo_closed {
            self.lo <= t && t < self.hi
        } else {
            self.lo < t && t <= self.hi
        }
    }

    /// `n` points strictly inside, evenly spaced.
    pub fn grid(&self, n: usize) -> Vec<f64> {
        (0..n).map(|j| self.lo + (self.hi - self.lo) * (j + 1) as f64 / (n + 1) as f64).collect()
    }
}

pub(crate) fn check_q(q_val: f64) -> Result<(), OpError> {
    if !(q_val.is_finite() && q_val > 0.0) || q_val == 1.0 {
        return Err(OpError::InvalidQ(q_val));
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct ShiftModel {
    pub q_val: f64,
    pub lam: f64,
    pub k: usize,
}

impl ShiftModel {
    pub fn new(q_val: f64, lam: f64, k: usize) -> Result<Self, OpError> {
        let dq = DeltaQ::new(q_val)?;
        if !dq.contains(lam) {
            return Err(OpError::LambdaOutsideDomain { lam, lo: dq.lo, hi: dq.hi });
        }
        Ok(ShiftModel { q_val, lam, k })
    }

    pub fn dim(&self) -> usize {
        2 * self.k + 1
    }

    /// Position of `e_k` in the matrix.
    pub fn index(&self, k: i64) -> usize {
        (k + self.k as i64) as usize
    }

    /// The weight `λ q^{-k/2}`, i.e. the eigenvalue of `C` on `e_k`.
    pub fn weight(&self, k: i64) -> f64 {
        self.lam * self.q_val.powf(-(k as f64) / 2.0)
    }

    pub fn basis_range(&self) -> std::ops::RangeInclusive<i64> {
        -(self.k as i64)..=self.k as i64
    }

    pub fn x(&self) -> CMatrix {
        let n = self.dim();
        let mut m = CMatrix::zeros(n, n);
        for k in -(self.k as i64)..self.k as i64 {
            m[(self.index(k + 1), self.index(k))] = Complex64::new(self.weight(k), 0.0);
        }
        m
    }

    pub fn x_star(&self) -> CMatrix {
        self.x().adjoint()
    }

    /// Partial isometry `e_k ↦ e_{k+1}`.
    pub fn u(&self) -> CMatrix {
        let n = self.dim();
        CMatrix::from_fn(n, n, |i, j| if i == j + 1 { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) })
    }

    pub fn c(&self) -> CMatrix {
        let diag: Vec<Complex64> = self.basis_range().map(|k| Complex64::new(self.weight(k), 0.0)).collect();
        CMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag))
    }

    pub fn interior(&self, margin: usize) -> Result<InteriorSubspace, OpError> {
        if margin > self.k {
            return Err(OpError::EmptyInterior { margin, k: self.k });
        }
        Ok(InteriorSubspace { k: self.k, margin })
    }
}

/// `span{e_k : −K+d ≤ k ≤ K−d}`.
#[derive(Clone, Copy, Debug)]
pub struct InteriorSubspace {
    pub k: usize,
    pub margin: usize,
}

impl InteriorSubspace {
    pub fn indices(&self) -> std::ops::Range<usize> {
        self.margin..2 * self.k + 1 - self.margin
    }

    pub fn dim(&self) -> usize {
        self.indices().len()
    }

    pub fn contains(&self, k: i64) -> bool {
        k.unsigned_abs() as usize + self.margin <= self.k
    }

    /// `P A P`.
    pub fn compress(&self, a: &CMatrix) -> CMatrix {
        let r = self.indices();
        a.view((r.start, r.start), (r.len(), r.len())).into_owned()
    }

    /// `A P`: the operator applied to interior vectors, all output rows kept.
    pub fn restrict(&self, a: &CMatrix) -> CMatrix {
        let r = self.indices();
        a.columns(r.start, r.len()).into_owned()
    }
}

/// `Σ α_{mn} X*^m X^n` on the truncated space.
pub fn eval_poly(model: &ShiftModel, f: &QPolynomial) -> Result<CMatrix, OpError> {
    let degree = f.degree();
    if degree > 2 * model.k as i64 {
        return Err(OpError::DegreeTooLarge { degree, k: model.k });
    }
    let n = model.dim();
    let x = model.x();
    let xs = model.x_star();
    let top = f.terms().map(|(m, _)| m.m.max(m.n)).max().unwrap_or(0) as usize;
    let mut xp = vec![CMatrix::identity(n, n)];
    let mut xsp = vec![CMatrix::identity(n, n)];
    for i in 1..=top {
        xp.push(&x * &xp[i - 1]);
        xsp.push(&xs * &xsp[i - 1]);
    }
    let mut acc = CMatrix::zeros(n, n);
    for (mono, c) in f.terms() {
        let coeff = c.eval(model.q_val);
        acc += (&xsp[mono.m as usize] * &xp[mono.n as usize]) * coeff;
    }
    Ok(acc)
}

fn relative(diff: &CMatrix, scale: f64) -> f64 {
    let d = operator_norm(diff);
    if scale > 0.0 {
        d / scale
    } else {
        d
    }
}

/// `‖(XX* − qX*X) P‖ / ‖XX* P‖` over interior vectors.
pub fn qnormality_residual(model: &ShiftModel, margin: usize) -> Result<f64, OpError> {
    let inner = model.interior(margin)?;
    if inner.dim() == 0 {
        return Err(OpError::EmptyInterior { margin, k: model.k });
    }
    let x = model.x();
    let xs = model.x_star();
    let lhs = inner.restrict(&(&x * &xs));
    let rhs = inner.restrict(&(&xs * &x)) * Complex64::new(model.q_val, 0.0);
    Ok(relative(&(&lhs - &rhs), operator_norm(&lhs).max(operator_norm(&rhs))))
}

/// Relative interior defect of `X*^m X^n = q^{(m²+m−n²+n−2mn)/4} U^{n−m} C^{m+n}`.
pub fn polar_identity_check(model: &ShiftModel, m: usize, n: usize, margin: usize) -> Result<f64, OpError> {
    if m + n > margin {
        return Err(OpError::InvalidArgument(format!("m + n = {} exceeds margin {margin}", m + n)));
    }
    let inner = model.interior(margin)?;
    let lhs = eval_poly(model, &QPolynomial::monomial(m as u32, n as u32))?;
    let (mi, ni) = (m as i64, n as i64);
    let expo = (mi * mi + mi - ni * ni + ni - 2 * mi * ni) as f64 / 4.0;
    let u = model.u();
    let shift = if n >= m { u.pow((n - m) as u32) } else { u.adjoint().pow((m - n) as u32) };
    let c = model.c().pow((m + n) as u32);
    let rhs = shift * c * Complex64::new(model.q_val.powf(expo), 0.0);
    let (lhs, rhs) = (inner.restrict(&lhs), inner.restrict(&rhs));
    Ok(relative(&(&lhs - &rhs), operator_norm(&lhs).max(operator_norm(&rhs))))
}

/// `σ_min((X + X* − a) P) − |a|·|q−1|/(q+1)`.
pub fn regularity_gap(model: &ShiftModel, a: f64, margin: usize) -> Result<f64, OpError> {
    if a == 0.0 || !a.is_finite() {
        return Err(OpError::InvalidArgument("a must be a nonzero real".into()));
    }
    let inner = model.interior(margin.max(1))?;
    let n = model.dim();
    let mut t = DMatrix::<f64>::zeros(n, n);
    for k in -(model.k as i64)..model.k as i64 {
        let (i, j) = (model.index(k + 1), model.index(k));
        t[(i, j)] = model.weight(k);
        t[(j, i)] = model.weight(k);
    }
    for i in 0..n {
        t[(i, i)] -= a;
    }
    let r = inner.indices();
    let sigma = t
        .columns(r.start, r.len())
        .into_owned()
        .singular_values()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let q = model.q_val;
    Ok(sigma - a.abs() * (q - 1.0).abs() / (q + 1.0))
}
