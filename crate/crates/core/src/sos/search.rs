//! PSD feasibility for a Gram system.
//!
//! Stage 1 is a projection method: Douglas–Rachford averaging of reflections
//! between the affine constraint set and the PSD cone (eigenvalue clipping).
//! It is cheap and usually enough, but it crawls when the feasible set is a
//! thin sliver around the boundary of the cone. When its residual stops
//! shrinking, stage 2 maximizes the smallest eigenvalue `t` over the affine
//! set with a log-det barrier and Newton steps on null-space coordinates.

use log::debug;
use nalgebra::{Cholesky, DMatrix, DVector};
use num_complex::Complex64;

use super::gram::{AffineModel, GramSystem};
use super::SosError;
use crate::linalg::{hermitian_eigen, hermitian_part, min_eigenvalue, CMatrix, HermitianCoords};

/// A Hermitian Gram matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct GramMatrix {
    pub entries: CMatrix,
}

impl GramMatrix {
    pub fn new(entries: CMatrix) -> Self {
        GramMatrix { entries }
    }

    pub fn size(&self) -> usize {
        self.entries.nrows()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        min_eigenvalue(&self.entries)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    Projection,
    Barrier,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchStats {
    pub stage: Stage,
    pub projection_iters: usize,
    pub newton_steps: usize,
    /// Constraint residual of the returned (or last) iterate.
    pub residual: f64,
    /// Smallest eigenvalue of the returned (or last) iterate.
    pub min_eig: f64,
}

#[derive(Clone, Debug)]
pub enum SearchOutcome {
    Found(GramMatrix, SearchStats),
    /// No PSD Gram matrix was found. This is not a proof that none exists.
    NotFound(SearchStats),
}

impl SearchOutcome {
    pub fn gram(&self) -> Option<&GramMatrix> {
        match self {
            SearchOutcome::Found(c, _) => Some(c),
            SearchOutcome::NotFound(_) => None,
        }
    }

    pub fn stats(&self) -> &SearchStats {
        match self {
            SearchOutcome::Found(_, s) | SearchOutcome::NotFound(s) => s,
        }
    }
}

/// Residual checkpoints: the projection stage gives up when the residual has
/// not at least halved over a window of this many iterations.
const STALL_WINDOW: usize = 1000;
const STALL_RATIO: f64 = 0.5;
const MAX_NEWTON_STEPS: usize = 600;

pub fn sos_search(sys: &GramSystem, tol: f64, max_iter: usize) -> Result<SearchOutcome, SosError> {
    if !(tol > 0.0) {
        return Err(SosError::InvalidArgument("tolerance must be positive".into()));
    }
    if !sys.is_structurally_feasible() {
        return Err(SosError::StructurallyInfeasible(sys.unreachable.clone()));
    }
    let model = sys.affine_model();
    let (proj, iters) = projection_stage(&model, tol, max_iter);
    if let Some(c) = proj {
        let stats = SearchStats {
            stage: Stage::Projection,
            projection_iters: iters,
            newton_steps: 0,
            residual: sys.residual(&c),
            min_eig: min_eigenvalue(&c),
        };
        debug!("projection stage converged after {iters} iterations");
        return Ok(SearchOutcome::Found(GramMatrix::new(c), stats));
    }
    debug!("projection stage stopped after {iters} iterations; switching to barrier stage");
    let barrier = barrier_stage(&model, tol);
    let c = model.coords.to_matrix(&barrier.point);
    let stats = SearchStats {
        stage: Stage::Barrier,
        projection_iters: iters,
        newton_steps: barrier.steps,
        residual: sys.residual(&c),
        min_eig: min_eigenvalue(&c),
    };
    if barrier.feasible && stats.residual <= tol && stats.min_eig >= -tol {
        Ok(SearchOutcome::Found(GramMatrix::new(c), stats))
    } else {
        Ok(SearchOutcome::NotFound(stats))
    }
}

fn psd_clip(coords: &HermitianCoords, v: &DVector<f64>) -> DVector<f64> {
    coords.to_vec(&crate::linalg::psd_project(&coords.to_matrix(v)))
}

/// Returns the PSD iterate once its constraint residual is within `tol`.
fn projection_stage(model: &AffineModel, tol: f64, max_iter: usize) -> (Option<CMatrix>, usize) {
    let coords = model.coords;
    let mut z = model.particular();
    let mut checkpoint = f64::INFINITY;
    for it in 0..max_iter {
        let s = psd_clip(&coords, &z);
        let res = model.residual(&s);
        if res <= tol {
            return (Some(coords.to_matrix(&s)), it + 1);
        }
        if it % STALL_WINDOW == 0 {
            if it > 0 && res > STALL_RATIO * checkpoint {
                return (None, it + 1);
            }
            checkpoint = res;
        }
        let reflected = &s * 2.0 - &z;
        let y = model.project(&reflected);
        z += y - s;
    }
    (None, max_iter)
}

struct BarrierResult {
    point: DVector<f64>,
    feasible: bool,
    steps: usize,
}

/// Maximize `t` subject to `C(y) − tI ≻ 0`, `C(y) = C_0 + Σ y_k G_k`.
fn barrier_stage(model: &AffineModel, tol: f64) -> BarrierResult {
    let coords = model.coords;
    let n = coords.n;
    let x0 = model.particular();
    let null = model.null_basis();
    let p = null.len();
    let c0 = coords.to_matrix(&x0);
    let gens: Vec<CMatrix> = null.iter().map(|z| coords.to_matrix(z)).collect();
    let eye = CMatrix::identity(n, n);

    let assemble = |y: &DVector<f64>, t: f64| -> CMatrix {
        let mut c = c0.clone();
        for (k, g) in gens.iter().enumerate() {
            if y[k] != 0.0 {
                c += g * Complex64::new(y[k], 0.0);
            }
        }
        c - &eye * Complex64::new(t, 0.0)
    };
    let point_of = |y: &DVector<f64>| -> DVector<f64> {
        let mut x = x0.clone();
        for (k, z) in null.iter().enumerate() {
            x.axpy(y[k], z, 1.0);
        }
        x
    };

    let mut y = DVector::zeros(p);
    let mut t = min_eigenvalue(&c0) - 1.0;
    let scale = c0.norm().max(1.0);
    let mut mu = scale / n as f64;
    let mut steps = 0;

    loop {
        // centering
        for _ in 0..60 {
            if steps >= MAX_NEWTON_STEPS {
                break;
            }
            let s = assemble(&y, t);
            let Some(chol) = Cholesky::new(s.clone()) else { break };
            let w = hermitian_part(&chol.inverse());
            // W G_k, with G_t = −I
            let mut wg: Vec<CMatrix> = gens.iter().map(|g| &w * g).collect();
            wg.push(-w.clone());
            let dim = p + 1;
            let mut grad = DVector::zeros(dim);
            for k in 0..dim {
                grad[k] = -mu * trace(&wg[k]);
            }
            grad[p] -= 1.0;
            let mut hess = DMatrix::zeros(dim, dim);
            for k in 0..dim {
                for l in k..dim {
                    let v = mu * trace_prod(&wg[k], &wg[l]);
                    hess[(k, l)] = v;
                    hess[(l, k)] = v;
                }
            }
            let Some(dir) = solve_spd(hess, &grad) else { break };
            let decrement = -grad.dot(&dir);
            steps += 1;
            if decrement < 1e-10 {
                break;
            }
            let phi0 = -t - mu * log_det(&chol);
            let mut alpha = 1.0;
            let mut moved = false;
            for _ in 0..60 {
                let yn = &y + dir.rows(0, p) * alpha;
                let tn = t + dir[p] * alpha;
                if let Some(ch) = Cholesky::new(assemble(&yn, tn)) {
                    let phi = -tn - mu * log_det(&ch);
                    if phi <= phi0 - 1e-4 * alpha * decrement {
                        y = yn;
                        t = tn;
                        moved = true;
                        break;
                    }
                }
                alpha *= 0.5;
            }
            if !moved || decrement < 1e-8 {
                break;
            }
        }

        let gap = n as f64 * mu;
        debug!("barrier: t = {t:e}, mu = {mu:e}, steps = {steps}");
        if t > 0.0 {
            return BarrierResult { point: point_of(&y), feasible: true, steps };
        }
        if t + gap < -tol {
            return BarrierResult { point: point_of(&y), feasible: false, steps };
        }
        if gap < tol / 10.0 || steps >= MAX_NEWTON_STEPS {
            return BarrierResult { point: point_of(&y), feasible: t >= -tol, steps };
        }
        mu /= 5.0;
    }
}

fn trace(a: &CMatrix) -> f64 {
    (0..a.nrows()).map(|i| a[(i, i)].re).sum()
}

/// `Re tr(A B)`.
fn trace_prod(a: &CMatrix, b: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            let (x, y) = (a[(i, j)], b[(j, i)]);
            acc += x.re * y.re - x.im * y.im;
        }
    }
    acc
}

fn log_det(chol: &Cholesky<Complex64, nalgebra::Dyn>) -> f64 {
    let l = chol.l_dirty();
    (0..l.nrows()).map(|i| 2.0 * l[(i, i)].re.ln()).sum()
}

/// Newton direction `−H⁻¹ g`, with a tiny ridge if `H` is numerically singular.
fn solve_spd(hess: DMatrix<f64>, grad: &DVector<f64>) -> Option<DVector<f64>> {
    let dim = hess.nrows();
    let ridge = 1e-14 * (0..dim).map(|i| hess[(i, i)].abs()).fold(0.0, f64::max).max(1e-300);
    for k in 0..8 {
        let mut h = hess.clone();
        if k > 0 {
            let eps = ridge * 100f64.powi(k);
            for i in 0..dim {
                h[(i, i)] += eps;
            }
        }
        if let Some(ch) = Cholesky::new(h) {
            return Some(-ch.solve(grad));
        }
    }
    None
}

/// Spectrum summary used in reports.
pub fn eigenvalues(c: &GramMatrix) -> Vec<f64> {
    hermitian_eigen(&c.entries).0
}
