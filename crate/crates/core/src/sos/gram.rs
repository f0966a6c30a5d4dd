//! Gram-matrix formulation: `f = w_N^* C w_N` with `C ⪰ 0`.

use std::collections::BTreeMap;

use nalgebra::DVector;
use num_complex::Complex64;

use super::SosError;
use crate::linalg::{CMatrix, HermitianCoords};
use crate::qalgebra::scalar::rat_to_f64;
use crate::qalgebra::{Monomial, NumericPoly, QPolynomial, Rational, Scalar};

/// `w_N`: all monomials of degree ≤ N, by degree then by `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialVector {
    pub n_half: u32,
    pub entries: Vec<Monomial>,
}

impl MonomialVector {
    pub fn new(n_half: u32) -> Self {
        let mut entries = Vec::with_capacity(Self::len_for(n_half));
        for d in 0..=n_half {
            for m in 0..=d {
                entries.push(Monomial::new(m, d - m));
            }
        }
        MonomialVector { n_half, entries }
    }

    pub fn len_for(n_half: u32) -> usize {
        let n = n_half as usize;
        (n + 1) * (n + 2) / 2
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn idx(m: u32, n: u32) -> usize {
        let d = (m + n) as usize;
        d * (d + 1) / 2 + m as usize
    }
}

/// `u_i^* u_j = q^{m_i m_j} x*^{n_i+m_j} x^{m_i+n_j}`.
pub fn gram_product(ui: Monomial, uj: Monomial) -> (u32, Monomial) {
    (ui.m * uj.m, Monomial::new(ui.n + uj.m, ui.m + uj.n))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GramEntry {
    pub i: usize,
    pub j: usize,
    /// Power of q weighting `c_ij`.
    pub q_exp: u32,
}

/// `Σ_{entries} q^{q_exp} c_ij = rhs` for one reachable monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub monomial: Monomial,
    pub entries: Vec<GramEntry>,
    pub rhs: Scalar,
}

#[derive(Clone, Debug)]
pub struct GramSystem {
    pub target: QPolynomial,
    pub n_half: u32,
    pub basis: MonomialVector,
    pub constraints: Vec<Constraint>,
    /// Target monomials no Gram entry can produce; nonempty means infeasible.
    pub unreachable: Vec<Monomial>,
    pub q: Rational,
    pub q_val: f64,
}

pub fn build_system(f: &QPolynomial, q: &Rational) -> Result<GramSystem, SosError> {
    if *q <= Rational::from_integer(0.into()) {
        return Err(SosError::InvalidArgument("q must be positive".into()));
    }
    if !f.is_hermitian() {
        return Err(SosError::NotHermitian);
    }
    let deg = f.degree();
    if deg > 0 && deg % 2 != 0 {
        return Err(SosError::OddDegree(deg));
    }
    let n_half = deg.max(0) as u32 / 2;
    let basis = MonomialVector::new(n_half);
    let mut groups: BTreeMap<Monomial, Vec<GramEntry>> = BTreeMap::new();
    for (i, ui) in basis.entries.iter().enumerate() {
        for (j, uj) in basis.entries.iter().enumerate() {
            let (q_exp, mono) = gram_product(*ui, *uj);
            groups.entry(mono).or_default().push(GramEntry { i, j, q_exp });
        }
    }
    let unreachable = f.terms().map(|(mono, _)| *mono).filter(|mono| !groups.contains_key(mono)).collect();
    let constraints = groups
        .into_iter()
        .map(|(monomial, entries)| Constraint { monomial, entries, rhs: f.coeff(&monomial) })
        .collect();
    Ok(GramSystem {
        target: f.clone(),
        n_half,
        basis,
        constraints,
        unreachable,
        q: q.clone(),
        q_val: rat_to_f64(q),
    })
}

impl GramSystem {
    pub fn size(&self) -> usize {
        self.basis.len()
    }

    pub fn is_structurally_feasible(&self) -> bool {
        self.unreachable.is_empty()
    }

    /// Largest `|Σ q^e c_ij − α|` over all constraints.
    pub fn residual(&self, c: &CMatrix) -> f64 {
        self.constraints
            .iter()
            .map(|con| {
                let lhs: Complex64 = con
                    .entries
                    .iter()
                    .map(|e| c[(e.i, e.j)] * self.q_val.powi(e.q_exp as i32))
                    .sum();
                (lhs - con.rhs.eval(self.q_val)).norm()
            })
            .fold(0.0, f64::max)
    }

    /// `w_N^* C w_N` at `q_val`.
    pub fn assemble(&self, c: &CMatrix) -> NumericPoly {
        let mut out = NumericPoly::zero(self.q_val);
        for (i, ui) in self.basis.entries.iter().enumerate() {
            for (j, uj) in self.basis.entries.iter().enumerate() {
                let (e, mono) = gram_product(*ui, *uj);
                out.add_term(mono, c[(i, j)] * self.q_val.powi(e as i32));
            }
        }
        out
    }

    /// Exact `w_N^* C w_N` for a matrix of scalars, q kept symbolic.
    pub fn assemble_exact(&self, c: &[Vec<Scalar>]) -> QPolynomial {
        let mut out = QPolynomial::zero();
        for (i, ui) in self.basis.entries.iter().enumerate() {
            for (j, uj) in self.basis.entries.iter().enumerate() {
                let (e, mono) = gram_product(*ui, *uj);
                out.add_term(mono, &c[i][j] * &Scalar::q_pow(e as i32));
            }
        }
        out
    }

    pub fn affine_model(&self) -> AffineModel {
        AffineModel::new(self)
    }
}

/// One real linear equation `a·v = b` on Hermitian coordinates.
#[derive(Clone, Debug)]
struct Row {
    idx: Vec<usize>,
    val: Vec<f64>,
    rhs: f64,
    norm2: f64,
    /// Index of the constraint group the row belongs to.
    group: usize,
}

impl Row {
    fn dot(&self, v: &DVector<f64>) -> f64 {
        self.idx.iter().zip(&self.val).map(|(&k, a)| a * v[k]).sum()
    }
}

/// The constraint set as real rows on [`HermitianCoords`].
///
/// Each entry `(i, j)` belongs to exactly one monomial, and a monomial's
/// equation shares its coordinates only with the conjugate monomial's
/// (equivalent) equation. Keeping one representative per conjugate pair and
/// splitting it into real and imaginary rows leaves rows with pairwise
/// disjoint supports, so projection and the null-space basis are closed-form.
#[derive(Clone, Debug)]
pub struct AffineModel {
    pub coords: HermitianCoords,
    rows: Vec<Row>,
    groups: usize,
}

impl AffineModel {
    pub fn new(sys: &GramSystem) -> Self {
        let n = sys.size();
        let coords = HermitianCoords::new(n);
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        let mut rows = Vec::new();
        let mut groups = 0;
        for con in &sys.constraints {
            let mono = con.monomial;
            if mono.m < mono.n {
                continue;
            }
            let alpha = con.rhs.eval(sys.q_val);
            let mut re: BTreeMap<usize, f64> = BTreeMap::new();
            let mut im: BTreeMap<usize, f64> = BTreeMap::new();
            for e in &con.entries {
                let w = sys.q_val.powi(e.q_exp as i32);
                if e.i == e.j {
                    *re.entry(coords.diag(e.i)).or_default() += w;
                } else if e.i < e.j {
                    let (r, m) = coords.off(e.i, e.j);
                    *re.entry(r).or_default() += w * inv_sqrt2;
                    *im.entry(m).or_default() += w * inv_sqrt2;
                } else {
                    let (r, m) = coords.off(e.j, e.i);
                    *re.entry(r).or_default() += w * inv_sqrt2;
                    *im.entry(m).or_default() -= w * inv_sqrt2;
                }
            }
            let mut push = |map: BTreeMap<usize, f64>, rhs: f64| {
                let (idx, val): (Vec<usize>, Vec<f64>) = map.into_iter().filter(|(_, v)| *v != 0.0).unzip();
                if idx.is_empty() {
                    return;
                }
                let norm2 = val.iter().map(|v| v * v).sum();
                rows.push(Row { idx, val, rhs, norm2, group: groups });
            };
            push(re, alpha.re);
            if !mono.is_diagonal() {
                push(im, alpha.im);
            }
            groups += 1;
        }
        debug_assert!({
            let mut seen = vec![false; coords.dim()];
            rows.iter().all(|r| r.idx.iter().all(|&k| !std::mem::replace(&mut seen[k], true)))
        });
        AffineModel { coords, rows, groups }
    }

    pub fn dim(&self) -> usize {
        self.coords.dim()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// Orthogonal projection onto `{v : A v = b}`.
    pub fn project(&self, v: &DVector<f64>) -> DVector<f64> {
        let mut out = v.clone();
        for row in &self.rows {
            let t = (row.dot(v) - row.rhs) / row.norm2;
            for (&k, a) in row.idx.iter().zip(&row.val) {
                out[k] -= t * a;
            }
        }
        out
    }

    /// Minimum-norm point of the affine set.
    pub fn particular(&self) -> DVector<f64> {
        self.project(&DVector::zeros(self.dim()))
    }

    /// Largest constraint violation, one complex equation per conjugate pair.
    pub fn residual(&self, v: &DVector<f64>) -> f64 {
        let mut acc = vec![0.0; self.groups];
        for row in &self.rows {
            let d = row.dot(v) - row.rhs;
            acc[row.group] += d * d;
        }
        acc.into_iter().map(f64::sqrt).fold(0.0, f64::max)
    }

    /// Orthonormal basis of the homogeneous solutions `{v : A v = 0}`.
    pub fn null_basis(&self) -> Vec<DVector<f64>> {
        let dim = self.dim();
        let mut used = vec![false; dim];
        let mut basis = Vec::new();
        for row in &self.rows {
            for &k in &row.idx {
                used[k] = true;
            }
            // Householder reflector sending â to ±e_0; its other columns span â^⊥.
            let s = row.idx.len();
            let norm = row.norm2.sqrt();
            let mut u: Vec<f64> = row.val.iter().map(|a| a / norm).collect();
            let sign = if u[0] >= 0.0 { 1.0 } else { -1.0 };
            u[0] += sign;
            let unorm2: f64 = u.iter().map(|x| x * x).sum();
            for col in 1..s {
                let mut v = DVector::zeros(dim);
                for (r, &k) in row.idx.iter().enumerate() {
                    let h = if r == col { 1.0 } else { 0.0 } - 2.0 * u[r] * u[col] / unorm2;
                    v[k] = h;
                }
                basis.push(v);
            }
        }
        for (k, u) in used.iter().enumerate() {
            if !u {
                let mut v = DVector::zeros(dim);
                v[k] = 1.0;
                basis.push(v);
            }
        }
        basis
    }
}
