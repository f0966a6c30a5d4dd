//! Positivity probe over the irreducible models.

use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::model::{eval_poly, DeltaQ, ShiftModel};
use super::OpError;
use crate::linalg::{hermitian_eigen, hermitian_part, CMatrix};
use crate::qalgebra::{Monomial, QPolynomial};

#[derive(Clone, Debug)]
pub struct ProbeReport {
    pub q: f64,
    pub lambda_grid: Vec<f64>,
    pub k: usize,
    pub margin: usize,
    /// Smallest eigenvalue over all probes (after the diagonal rescaling).
    pub min_eig: f64,
    /// `0` when the zero model attains the minimum.
    pub argmin_lambda: f64,
    /// Vector in the basis `e_{-K+d} … e_{K-d}` with `⟨f φ, φ⟩` of the sign of `min_eig`.
    pub witness: Vec<Complex64>,
}

impl ProbeReport {
    pub fn is_negative(&self) -> bool {
        self.min_eig < 0.0
    }

    pub fn to_json(&self) -> Value {
        json!({
            "q": self.q,
            "lambda_grid": self.lambda_grid,
            "K": self.k,
            "margin": self.margin,
            "min_eig": self.min_eig,
            "argmin_lambda": self.argmin_lambda,
            "witness": self.witness.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
        })
    }
}

struct Probe {
    lam: f64,
    min_eig: f64,
    witness: Vec<Complex64>,
}

/// Smallest eigenvalue of the interior compression of `f(X, X*)`.
///
/// Weights range over `q^{±K/2}`, so the compression `A` is badly scaled. The
/// probe diagonalizes `D A D` with `D e_k = (1 + w_k²)^{-deg/4} e_k` instead:
/// congruence keeps the inertia, so the sign of the minimum is unchanged,
/// and the entries stay O(‖f‖).
fn probe_model(model: &ShiftModel, f: &QPolynomial, margin: usize) -> Result<Probe, OpError> {
    let inner = model.interior(margin)?;
    let a = hermitian_part(&inner.compress(&eval_poly(model, f)?));
    let deg = f.degree().max(0) as f64;
    let lo = -(model.k as i64) + margin as i64;
    let d: Vec<f64> = (0..inner.dim())
        .map(|i| {
            let w = model.weight(lo + i as i64);
            (1.0 + w * w).powf(-deg / 4.0)
        })
        .collect();
    let scaled = CMatrix::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] * (d[i] * d[j]));
    let (vals, vecs) = hermitian_eigen(&scaled);
    let witness: Vec<Complex64> = (0..vecs.nrows()).map(|i| vecs[(i, 0)] * d[i]).collect();
    let norm = witness.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    Ok(Probe {
        lam: model.lam,
        min_eig: vals[0],
        witness: witness.into_iter().map(|z| z / norm).collect(),
    })
}

pub fn positivity_probe(f: &QPolynomial, q_val: f64, lam_grid: usize, k: usize) -> Result<ProbeReport, OpError> {
    if !f.is_hermitian() {
        return Err(OpError::NotHermitian);
    }
    if lam_grid == 0 {
        return Err(OpError::InvalidArgument("lambda grid must have at least one point".into()));
    }
    let margin = f.degree().max(0) as usize;
    if margin > k {
        return Err(OpError::DegreeTooLarge { degree: f.degree(), k });
    }
    let grid = DeltaQ::new(q_val)?.grid(lam_grid);
    let probes = grid
        .par_iter()
        .map(|&lam| probe_model(&ShiftModel::new(q_val, lam, k)?, f, margin))
        .collect::<Result<Vec<_>, _>>()?;
    // X = 0 contributes the value f(0, 0)
    let zero = Probe {
        lam: 0.0,
        min_eig: f.coeff(&Monomial::ONE).eval(q_val).re,
        witness: vec![Complex64::new(1.0, 0.0)],
    };
    let best = probes
        .into_iter()
        .chain(std::iter::once(zero))
        .min_by(|a, b| a.min_eig.total_cmp(&b.min_eig))
        .expect("at least the zero model");
    Ok(ProbeReport {
        q: q_val,
        lambda_grid: grid,
        k,
        margin,
        min_eig: best.min_eig,
        argmin_lambda: best.lam,
        witness: best.witness,
    })
}
