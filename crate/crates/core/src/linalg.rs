//! Small dense Hermitian helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

const SQRT2: f64 = std::f64::consts::SQRT_2;

/// Eigenvalues (ascending) and matching unit eigenvectors (columns) of a Hermitian matrix.
pub fn hermitian_eigen(a: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = a.nrows();
    if n == 0 {
        return (Vec::new(), CMatrix::zeros(0, 0));
    }
    let sym = hermitian_part(a);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

pub fn min_eigenvalue(a: &CMatrix) -> f64 {
    hermitian_eigen(a).0.first().copied().unwrap_or(f64::INFINITY)
}

/// `(A + A^H)/2`.
pub fn hermitian_part(a: &CMatrix) -> CMatrix {
    (a + a.adjoint()).scale(0.5)
}

/// Largest entrywise deviation from Hermitian symmetry.
pub fn hermitian_defect(a: &CMatrix) -> f64 {
    (a - a.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Nearest PSD matrix in Frobenius norm (eigenvalue clipping).
pub fn psd_project(a: &CMatrix) -> CMatrix {
    let (vals, vecs) = hermitian_eigen(a);
    let n = a.nrows();
    let mut out = CMatrix::zeros(n, n);
    for (k, &lam) in vals.iter().enumerate() {
        if lam > 0.0 {
            let v = vecs.column(k);
            out += (&v * v.adjoint()).scale(lam);
        }
    }
    hermitian_part(&out)
}

/// Spectral 2-norm.
pub fn operator_norm(a: &CMatrix) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.clone().svd(false, false).singular_values.max()
}

/// Real coordinates of an `n×n` Hermitian matrix: the diagonal first, then
/// `√2·Re` and `√2·Im` of each upper entry. The map is an isometry from the
/// Frobenius inner product `Re tr(A^H B)` to the Euclidean one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HermitianCoords {
    pub n: usize,
}

impl HermitianCoords {
    pub fn new(n: usize) -> Self {
        HermitianCoords { n }
    }

    pub fn dim(&self) -> usize {
        self.n * self.n
    }

    pub fn diag(&self, i: usize) -> usize {
        i
    }

    /// Indices of the real and imaginary coordinates of entry `(i, j)`, `i < j`.
    pub fn off(&self, i: usize, j: usize) -> (usize, usize) {
        debug_assert!(i < j && j < self.n);
        // pairs (0,1),(0,2),..,(1,2),.. enumerated row by row
        let before = i * (2 * self.n - i - 1) / 2 + (j - i - 1);
        let base = self.n + 2 * before;
        (base, base + 1)
    }

    pub fn to_vec(&self, a: &CMatrix) -> DVector<f64> {
        let mut v = DVector::zeros(self.dim());
        for i in 0..self.n {
            v[i] = a[(i, i)].re;
            for j in i + 1..self.n {
                let z = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
                let (r, m) = self.off(i, j);
                v[r] = SQRT2 * z.re;
                v[m] = SQRT2 * z.im;
            }
        }
        v
    }

    pub fn to_matrix(&self, v: &DVector<f64>) -> CMatrix {
        let mut a = CMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            a[(i, i)] = Complex64::new(v[i], 0.0);
            for j in i + 1..self.n {
                let (r, m) = self.off(i, j);
                let z = Complex64::new(v[r], v[m]) / SQRT2;
                a[(i, j)] = z;
                a[(j, i)] = z.conj();
            }
        }
        a
    }
}

/// `tr(A B)` for square matrices.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(n: usize) -> CMatrix {
        let a = CMatrix::from_fn(n, n, |i, j| Complex64::new((i * 3 + j) as f64 * 0.37 - 1.0, (j as f64 - i as f64) * 0.21));
        hermitian_part(&a)
    }

    #[test]
    fn coords_roundtrip_and_isometry() {
        let c = HermitianCoords::new(4);
        let a = sample(4);
        let b = sample(4).map(|z| z * 0.5 + Complex64::new(0.1, 0.0));
        let b = hermitian_part(&b);
        assert!((c.to_matrix(&c.to_vec(&a)) - &a).norm() < 1e-14);
        let ip = trace_product(&a, &b).re;
        assert!((ip - c.to_vec(&a).dot(&c.to_vec(&b))).abs() < 1e-12);
        let mut seen = vec![false; c.dim()];
        for i in 0..4 {
            seen[c.diag(i)] = true;
            for j in i + 1..4 {
                let (r, m) = c.off(i, j);
                assert!(!seen[r] && !seen[m]);
                seen[r] = true;
                seen[m] = true;
            }
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn eigen_and_projection() {
        let a = sample(5);
        let (vals, vecs) = hermitian_eigen(&a);
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        let d = CMatrix::from_diagonal(&DVector::from_iterator(5, vals.iter().map(|&v| Complex64::new(v, 0.0))));
        assert!((&vecs * d * vecs.adjoint() - &a).norm() < 1e-12);
        let p = psd_project(&a);
        assert!(min_eigenvalue(&p) > -1e-12);
        assert!(hermitian_defect(&p) < 1e-15);
    }
}
