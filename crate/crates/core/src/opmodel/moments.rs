//! q-moment sequences `a_{kl} = ⟨X*^k X^l ξ, ξ⟩`, computed two ways.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;

use super::model::{check_q, eval_poly, DeltaQ, ShiftModel};
use super::OpError;
use crate::qalgebra::{cexp_radial, QPolynomial};

/// Atoms `(t, weight)` in Δq; the measure on (0, ∞) is the scale-invariant
/// extension with copies at `t q^{j/2}`, `j ∈ ℤ`.
#[derive(Clone, Debug)]
pub struct DiscreteMeasure {
    q_val: f64,
    atoms: Vec<(f64, f64)>,
}

impl DiscreteMeasure {
    pub fn new(q_val: f64, atoms: Vec<(f64, f64)>) -> Result<Self, OpError> {
        let dq = DeltaQ::new(q_val)?;
        for &(t, w) in &atoms {
            if !dq.contains(t) {
                return Err(OpError::LambdaOutsideDomain { lam: t, lo: dq.lo, hi: dq.hi });
            }
            if !(w > 0.0 && w.is_finite()) {
                return Err(OpError::InvalidArgument(format!("atom weight {w} must be positive")));
            }
        }
        Ok(DiscreteMeasure { q_val, atoms })
    }

    pub fn q_val(&self) -> f64 {
        self.q_val
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn total_weight(&self) -> f64 {
        self.atoms.iter().map(|a| a.1).sum()
    }
}

/// Finitely supported function on the extended atoms: `(atom, j) ↦ ξ(t_atom q^{j/2})`.
#[derive(Clone, Debug, Default)]
pub struct StateTable {
    values: BTreeMap<(usize, i32), Complex64>,
}

impl StateTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// `1_{Δq}`: value 1 at every atom of Δq itself.
    pub fn indicator(mu: &DiscreteMeasure) -> Self {
        let mut s = Self::new();
        for a in 0..mu.atoms.len() {
            s.set(a, 0, Complex64::new(1.0, 0.0));
        }
        s
    }

    pub fn set(&mut self, atom: usize, j: i32, value: Complex64) {
        if value == Complex64::new(0.0, 0.0) {
            self.values.remove(&(atom, j));
        } else {
            self.values.insert((atom, j), value);
        }
    }

    pub fn get(&self, atom: usize, j: i32) -> Complex64 {
        self.values.get(&(atom, j)).copied().unwrap_or_default()
    }

    pub fn support(&self) -> impl Iterator<Item = (usize, i32)> + '_ {
        self.values.keys().copied()
    }

    /// Coefficients over `e_{-K} … e_K` of the part living on one atom's orbit.
    ///
    /// `e_k` is the normalized indicator of `λ q^{-k/2}`, so `ξ_k = ξ(λ q^{-k/2}) √w`.
    pub fn to_vector(&self, atom: usize, weight: f64, k: usize) -> Result<Vec<Complex64>, OpError> {
        let mut v = vec![Complex64::new(0.0, 0.0); 2 * k + 1];
        for (&(a, j), &z) in &self.values {
            if a != atom {
                continue;
            }
            let idx = -(j as i64) + k as i64;
            if idx < 0 || idx > 2 * k as i64 {
                return Err(OpError::SupportNearEdge { k: -(j as i64), margin: 0 });
            }
            v[idx as usize] = z * weight.sqrt();
        }
        Ok(v)
    }
}

/// Table `a_{kl}`, `0 ≤ k, l ≤ degmax`.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentSequence {
    pub degmax: usize,
    a: Vec<Vec<Complex64>>,
}

impl MomentSequence {
    pub fn zeros(degmax: usize) -> Self {
        MomentSequence { degmax, a: vec![vec![Complex64::new(0.0, 0.0); degmax + 1]; degmax + 1] }
    }

    pub fn get(&self, k: usize, l: usize) -> Complex64 {
        self.a[k][l]
    }

    fn add(&mut self, other: &MomentSequence) {
        for (row, orow) in self.a.iter_mut().zip(&other.a) {
            for (x, y) in row.iter_mut().zip(orow) {
                *x += y;
            }
        }
    }

    pub fn hermitian_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for k in 0..=self.degmax {
            for l in 0..=self.degmax {
                worst = worst.max((self.a[k][l] - self.a[l][k].conj()).norm());
            }
        }
        worst
    }

    pub fn max_abs(&self) -> f64 {
        self.a.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise deviation divided by the largest entry.
    pub fn relative_diff(&self, other: &MomentSequence) -> f64 {
        let scale = self.max_abs().max(other.max_abs());
        let mut worst = 0.0f64;
        for (row, orow) in self.a.iter().zip(&other.a) {
            for (x, y) in row.iter().zip(orow) {
                worst = worst.max((x - y).norm());
            }
        }
        if scale > 0.0 {
            worst / scale
        } else {
            worst
        }
    }

    /// `F(f) = Σ α_{mn} a_{mn}`.
    pub fn apply(&self, f: &QPolynomial, q_val: f64) -> Result<Complex64, OpError> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (mono, c) in f.terms() {
            let (m, n) = (mono.m as usize, mono.n as usize);
            if m > self.degmax || n > self.degmax {
                return Err(OpError::DegreeTooLarge { degree: f.degree(), k: self.degmax });
            }
            acc += c.eval(q_val) * self.a[m][n];
        }
        Ok(acc)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,l,re,im\n");
        for k in 0..=self.degmax {
            for l in 0..=self.degmax {
                let z = self.a[k][l];
                let _ = writeln!(out, "{k},{l},{:e},{:e}", z.re, z.im);
            }
        }
        out
    }
}

/// `a_{kl} = ⟨X*^k X^l ξ, ξ⟩` in a truncated shift model.
pub fn moments_matrix(model: &ShiftModel, xi: &[Complex64], degmax: usize) -> Result<MomentSequence, OpError> {
    if xi.len() != model.dim() {
        return Err(OpError::InvalidArgument(format!("state has length {}, model needs {}", xi.len(), model.dim())));
    }
    let inner = model.interior(degmax)?;
    for (i, z) in xi.iter().enumerate() {
        let k = i as i64 - model.k as i64;
        if *z != Complex64::new(0.0, 0.0) && !inner.contains(k) {
            return Err(OpError::SupportNearEdge { k, margin: degmax });
        }
    }
    let v = nalgebra::DVector::from_column_slice(xi);
    let mut out = MomentSequence::zeros(degmax);
    for k in 0..=degmax {
        for l in 0..=degmax {
            let a = eval_poly(model, &QPolynomial::monomial(k as u32, l as u32))?;
            out.a[k][l] = v.dotc(&(a * &v));
        }
    }
    Ok(out)
}

/// `a_{kl} = q^{(l²+l+k²+k)/4} Σ_t w(t) t^{k+l} ξ(q^{l/2} t) conj(ξ(q^{k/2} t))`,
/// summed over the extended atoms `t = t_a q^{j/2}`.
pub fn moments_integral(
    mu: &DiscreteMeasure,
    xi: &StateTable,
    degmax: usize,
    q_val: f64,
) -> Result<MomentSequence, OpError> {
    check_q(q_val)?;
    if (q_val - mu.q_val).abs() > 1e-15 * q_val {
        return Err(OpError::InvalidArgument("measure was built for a different q".into()));
    }
    let mut out = MomentSequence::zeros(degmax);
    for k in 0..=degmax {
        for l in 0..=degmax {
            let (ki, li) = (k as i32, l as i32);
            let pre = q_val.powf((li * li + li + ki * ki + ki) as f64 / 4.0);
            let mut acc = Complex64::new(0.0, 0.0);
            // ξ(q^{l/2} t) ≠ 0 forces (atom, j + l) into the support
            for (a, jl) in xi.support() {
                let j = jl - li;
                let (t0, w) = mu.atoms[a];
                let t = t0 * q_val.powf(j as f64 / 2.0);
                acc += xi.get(a, j + li) * xi.get(a, j + ki).conj() * (w * t.powi(ki + li));
            }
            out.a[k][l] = acc * pre;
        }
    }
    Ok(out)
}

/// Same moments through the shift models, one per atom.
pub fn moments_via_models(mu: &DiscreteMeasure, xi: &StateTable, degmax: usize) -> Result<MomentSequence, OpError> {
    let reach = xi.support().map(|(_, j)| j.unsigned_abs() as usize).max().unwrap_or(0);
    let k = reach + degmax + 1;
    let mut out = MomentSequence::zeros(degmax);
    for (a, &(t, w)) in mu.atoms.iter().enumerate() {
        let model = ShiftModel::new(mu.q_val, t, k)?;
        out.add(&moments_matrix(&model, &xi.to_vector(a, w, k)?, degmax)?);
    }
    Ok(out)
}

/// `F_μ(f) = ⟨π_μ(f) 1_{Δq}, 1_{Δq}⟩`, checked against `∫ p(f)` over the atoms.
pub fn vacuum_functional(f: &QPolynomial, mu: &DiscreteMeasure, q_val: f64) -> Result<Complex64, OpError> {
    let degmax = f.degree().max(0) as usize;
    let moments = moments_integral(mu, &StateTable::indicator(mu), degmax, q_val)?;
    let direct = moments.apply(f, q_val)?;
    let radial = cexp_radial(f);
    let mut diag = Complex64::new(0.0, 0.0);
    for &(t, w) in mu.atoms() {
        for (r, c) in radial.iter().enumerate() {
            diag += c.eval(q_val) * (w * (t * t).powi(r as i32));
        }
    }
    let scale = direct.norm().max(diag.norm()).max(1.0);
    let gap = (direct - diag).norm();
    if gap > 1e-10 * scale {
        return Err(OpError::Disagreement { gap });
    }
    Ok(direct)
}
