//! Polynomials in `t = x*x` that are nonnegative on `[0, ∞)`.
//!
//! Every such `p` is `|A(t)|² + t·|B(t)|²` (cone `σ₀ + tσ₁`), built from its
//! roots; in A(q) this gives `p(x*x) = A(x*x)^*A(x*x) + (B(q x*x) x)^*(B(q x*x) x)`
//! because `x h(x*x) = h(q x*x) x`.

use nalgebra::{DMatrix, Schur};
use num_traits::Zero;
use num_complex::Complex64;

use super::certificate::{scalar_from_complex, SosCertificate};
use crate::qalgebra::scalar::rat_to_f64;
use crate::qalgebra::{from_radial, normal_mul, QPolynomial, Rational, Scalar};

/// Relative imaginary part below which a root counts as real.
pub const ROOT_CLUSTER_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum RadialError {
    #[error("polynomial takes the negative value {value:e} at t = {at}")]
    NegativeSample { at: f64, value: f64 },
    #[error("positive root near t = {at} has odd multiplicity")]
    OddRoot { at: f64 },
    #[error("leading coefficient is negative")]
    NegativeLeading,
}

/// Complex polynomial, coefficients ascending.
type CPoly = Vec<Complex64>;

/// `p(t) = |g1(t)|² + t |g2(t)|²` for real `t`.
#[derive(Clone, Debug)]
pub struct RadialCertificate {
    pub p: Vec<Rational>,
    pub g1: Vec<Complex64>,
    pub g2: Vec<Complex64>,
    /// Largest coefficient deviation of the recomposition.
    pub residual: f64,
}

fn trim(mut a: CPoly) -> CPoly {
    while a.len() > 1 && a.last().is_some_and(|c| c.norm() == 0.0) {
        a.pop();
    }
    a
}

fn pmul(a: &[Complex64], b: &[Complex64]) -> CPoly {
    if a.is_empty() || b.is_empty() {
        return vec![Complex64::new(0.0, 0.0)];
    }
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn padd(a: &[Complex64], b: &[Complex64], sign: f64) -> CPoly {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| a.get(i).copied().unwrap_or_default() + b.get(i).copied().unwrap_or_default() * sign)
        .collect()
}

fn pconj(a: &[Complex64]) -> CPoly {
    a.iter().map(|c| c.conj()).collect()
}

fn shift(a: &[Complex64]) -> CPoly {
    let mut out = vec![Complex64::new(0.0, 0.0)];
    out.extend_from_slice(a);
    out
}

fn horner(a: &[Complex64], z: Complex64) -> Complex64 {
    a.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
}

/// `(A, B)·(C, D) = (AC − t B D̄, A D + B C̄)`: products stay in the cone.
fn cone_mul(x: &(CPoly, CPoly), y: &(CPoly, CPoly)) -> (CPoly, CPoly) {
    let (a, b) = x;
    let (c, d) = y;
    let first = padd(&pmul(a, c), &shift(&pmul(b, &pconj(d))), -1.0);
    let second = padd(&pmul(a, d), &pmul(b, &pconj(c)), 1.0);
    (trim(first), trim(second))
}

/// `|A|² + t|B|²` as a real-coefficient polynomial.
pub fn recompose(g1: &[Complex64], g2: &[Complex64]) -> Vec<f64> {
    let sq1 = pmul(&pconj(g1), g1);
    let sq2 = shift(&pmul(&pconj(g2), g2));
    padd(&sq1, &sq2, 1.0).into_iter().map(|c| c.re).collect()
}

type RPoly = Vec<Rational>;

fn rtrim(mut a: RPoly) -> RPoly {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

fn rderiv(a: &[Rational]) -> RPoly {
    rtrim((1..a.len()).map(|k| &a[k] * Rational::from_integer(k.into())).collect())
}

fn rsub(a: &[Rational], b: &[Rational]) -> RPoly {
    let zero = Rational::zero();
    rtrim((0..a.len().max(b.len())).map(|i| a.get(i).unwrap_or(&zero) - b.get(i).unwrap_or(&zero)).collect())
}

/// Quotient and remainder; `b` must be nonzero.
fn rdivmod(a: &[Rational], b: &[Rational]) -> (RPoly, RPoly) {
    let mut r = rtrim(a.to_vec());
    let db = b.len() - 1;
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut quot = vec![Rational::zero(); r.len() - db];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = r.last().expect("nonempty") / b.last().expect("nonempty");
        for (i, bi) in b.iter().enumerate() {
            r[shift + i] -= &c * bi;
        }
        quot[shift] = c;
        r.pop();
        r = rtrim(r);
    }
    (rtrim(quot), r)
}

fn monic(a: RPoly) -> RPoly {
    let lead = a.last().expect("nonzero").clone();
    a.into_iter().map(|c| c / &lead).collect()
}

fn rgcd(a: &[Rational], b: &[Rational]) -> RPoly {
    let (mut x, mut y) = (rtrim(a.to_vec()), rtrim(b.to_vec()));
    while !y.is_empty() {
        let (_, r) = rdivmod(&x, &y);
        x = y;
        y = r;
    }
    monic(x)
}

/// Yun's square-free decomposition: `p = lead · Π a_i^i` with each `a_i` monic
/// and free of repeated roots. Returns `(a_i, i)` for the nonconstant `a_i`.
fn squarefree(p: &[Rational]) -> Vec<(RPoly, usize)> {
    let dp = rderiv(p);
    if dp.is_empty() {
        return Vec::new();
    }
    let a0 = rgcd(p, &dp);
    let mut b = rdivmod(p, &a0).0;
    let c = rdivmod(&dp, &a0).0;
    let mut d = rsub(&c, &rderiv(&b));
    let mut out = Vec::new();
    let mut i = 1;
    while b.len() > 1 {
        let a = rgcd(&b, &d);
        b = rdivmod(&b, &a).0;
        let c = rdivmod(&d, &a).0;
        d = rsub(&c, &rderiv(&b));
        if a.len() > 1 {
            out.push((a, i));
        }
        i += 1;
    }
    out
}

/// Simultaneous Newton (Aberth–Ehrlich) iteration on a polynomial with simple roots.
fn aberth(pc: &[Complex64]) -> Vec<Complex64> {
    let n = pc.len() - 1;
    let dpc: CPoly = (1..pc.len()).map(|k| pc[k] * k as f64).collect();
    let radius = 1.0 + pc[..n].iter().map(|c| (c / pc[n]).norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(0.5 * radius, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for k in 0..n {
            let ratio = horner(pc, z[k]) / horner(&dpc, z[k]);
            let repulse: Complex64 = (0..n).filter(|&j| j != k).map(|j| 1.0 / (z[k] - z[j])).sum();
            let step = ratio / (1.0 - ratio * repulse);
            if step.is_finite() {
                z[k] -= step;
                moved = moved.max(step.norm() / z[k].norm().max(1.0));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// Roots of a polynomial with simple roots, Newton-polished.
fn roots(p: &[f64]) -> Vec<Complex64> {
    let n = p.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let pc: CPoly = p.iter().map(|&c| Complex64::new(c, 0.0)).collect();
    let lead = p[n];
    let comp = DMatrix::<f64>::from_fn(n, n, |i, j| match () {
        _ if j == n - 1 => -p[i] / lead,
        _ if i == j + 1 => 1.0,
        _ => 0.0,
    });
    let initial = match Schur::try_new(comp, f64::EPSILON, 10_000) {
        Some(schur) => schur.complex_eigenvalues().iter().copied().collect(),
        None => aberth(&pc),
    };
    let dpc: CPoly = (1..p.len()).map(|k| Complex64::new(p[k] * k as f64, 0.0)).collect();
    initial
        .into_iter()
        .map(|z0| {
            // keep the Newton iterate only while it improves |p|
            let mut z = z0;
            let mut best = horner(&pc, z).norm();
            for _ in 0..50 {
                let d = horner(&dpc, z);
                if d.norm() == 0.0 {
                    break;
                }
                let zn = z - horner(&pc, z) / d;
                let v = horner(&pc, zn).norm();
                if !(v < best) {
                    break;
                }
                best = v;
                z = zn;
            }
            z
        })
        .collect()
}

/// Sign check on a dense grid over the region holding all positive roots.
fn sample_check(p: &[f64]) -> Result<(), RadialError> {
    let n = p.len() - 1;
    let lead = p[n];
    let bound = 1.0 + p[..n].iter().map(|c| (c / lead).abs()).fold(0.0, f64::max);
    let scale = p.iter().map(|c| c.abs()).fold(0.0, f64::max);
    let eval = |t: f64| p.iter().rev().fold(0.0, |acc, c| acc * t + c);
    let samples = 4000;
    for k in 0..=samples {
        let frac = k as f64 / samples as f64;
        for t in [bound * 1.1 * frac, bound * 1.1 * frac * frac * frac] {
            let v = eval(t);
            let mag = p.iter().enumerate().map(|(i, c)| c.abs() * t.powi(i as i32)).sum::<f64>();
            if v < -1e-9 * mag.max(scale) {
                return Err(RadialError::NegativeSample { at: t, value: v });
            }
        }
    }
    Ok(())
}

/// Writes `p ≥ 0` on `[0, ∞)` (coefficients ascending) as `|g1|² + t|g2|²`.
///
/// Multiplicities come from an exact square-free decomposition, so only
/// simple roots are ever located numerically.
pub fn sos_from_radial(p: &[Rational]) -> Result<RadialCertificate, RadialError> {
    let exact = rtrim(p.to_vec());
    if exact.is_empty() {
        let zero = vec![Complex64::new(0.0, 0.0)];
        return Ok(RadialCertificate { p: p.to_vec(), g1: zero.clone(), g2: zero, residual: 0.0 });
    }
    let pf: Vec<f64> = exact.iter().map(rat_to_f64).collect();
    let lead = *pf.last().expect("nonempty");
    if lead < 0.0 {
        return Err(RadialError::NegativeLeading);
    }
    sample_check(&pf)?;

    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let mut acc: (CPoly, CPoly) = (vec![Complex64::new(lead.sqrt(), 0.0)], vec![zero]);
    let power = |acc: (CPoly, CPoly), factor: &(CPoly, CPoly), times: usize| {
        (0..times).fold(acc, |a, _| cone_mul(&a, factor))
    };

    for (factor, mult) in squarefree(&exact) {
        let ff: Vec<f64> = factor.iter().map(rat_to_f64).collect();
        for z in roots(&ff) {
            let is_real = z.im.abs() <= ROOT_CLUSTER_TOL * z.norm().max(1.0);
            if is_real && z.re > 0.0 {
                if mult % 2 == 1 {
                    return Err(RadialError::OddRoot { at: z.re });
                }
                acc = power(acc, &(vec![Complex64::new(-z.re, 0.0), one], vec![zero]), mult / 2);
            } else if is_real {
                // t + a with a ≥ 0 is √a² + t·1²
                let a = (-z.re).max(0.0);
                acc = power(acc, &(vec![Complex64::new(a.sqrt(), 0.0)], vec![one]), mult);
            } else if z.im > 0.0 {
                // (t − z)(t − z̄) = |t − z|² for real t
                acc = power(acc, &(vec![-z, one], vec![zero]), mult);
            }
        }
    }

    let (g1, g2) = acc;
    let back = recompose(&g1, &g2);
    let residual = (0..back.len().max(pf.len()))
        .map(|k| (back.get(k).copied().unwrap_or(0.0) - pf.get(k).copied().unwrap_or(0.0)).abs())
        .fold(0.0, f64::max);
    Ok(RadialCertificate { p: p.to_vec(), g1, g2, residual })
}

impl RadialCertificate {
    /// The A(q) factors `g1(x*x)` and `g2(q x*x) x`.
    pub fn factors(&self, q: &Rational) -> (QPolynomial, QPolynomial) {
        let qf = Scalar::from_rational(q.clone());
        let a: Vec<Scalar> = self.g1.iter().map(|&c| scalar_from_complex(c)).collect();
        let mut qk = Scalar::one();
        let mut b = Vec::with_capacity(self.g2.len());
        for &c in &self.g2 {
            b.push(&scalar_from_complex(c) * &qk);
            qk = &qk * &qf;
        }
        let f1 = from_radial(&a);
        let f2 = normal_mul(&from_radial(&b), &QPolynomial::x());
        (f1, f2)
    }

    /// Target `p(x*x)` in normal form.
    pub fn target(&self) -> QPolynomial {
        let coeffs: Vec<Scalar> = self.p.iter().map(|c| Scalar::from_rational(c.clone())).collect();
        from_radial(&coeffs)
    }

    pub fn to_certificate(&self, q: &Rational) -> SosCertificate {
        let (f1, f2) = self.factors(q);
        let factors = [f1, f2].into_iter().filter(|f| !f.is_zero()).collect();
        SosCertificate::numeric(self.target(), q.clone(), factors)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qalgebra::{rat, rat_int};
    use crate::sos::certificate::verify_sos;

    fn ints(c: &[i64]) -> Vec<Rational> {
        c.iter().map(|&v| rat_int(v)).collect()
    }

    #[test]
    fn identity_t() {
        let cert = sos_from_radial(&ints(&[0, 1])).unwrap();
        assert!(cert.g1.iter().all(|c| c.norm() < 1e-15));
        assert_eq!(recompose(&cert.g1, &cert.g2), vec![0.0, 1.0]);
        let q = rat_int(2);
        let sos = cert.to_certificate(&q);
        assert_eq!(sos.factors.len(), 1);
        assert!(verify_sos(&QPolynomial::monomial(1, 1), &sos, 2.0, 1e-12));
    }

    #[test]
    fn perfect_square() {
        let cert = sos_from_radial(&ints(&[1, -2, 1])).unwrap();
        assert!(cert.residual < 1e-12);
        assert!(cert.g2.iter().all(|c| c.norm() < 1e-12));
    }

    #[test]
    fn cubic_example_lifts_to_algebra() {
        let p = ints(&[0, 2, -2, 1]);
        let cert = sos_from_radial(&p).unwrap();
        assert!(cert.residual < 1e-12);
        let q = rat(1, 2);
        let sos = cert.to_certificate(&q);
        assert!(sos.residual_max <= 1e-8);
        assert!(verify_sos(&cert.target(), &sos, 0.5, 1e-8));
    }

    #[test]
    fn sign_changes_detected() {
        assert!(sos_from_radial(&ints(&[-1, 1])).is_err());
        assert!(sos_from_radial(&ints(&[2, -3, 1])).is_err());
        assert_eq!(sos_from_radial(&ints(&[1, -1])).unwrap_err(), RadialError::NegativeLeading);
        // double root at 1 times (t - 2): sign change at 2
        assert!(sos_from_radial(&ints(&[-2, 5, -4, 1])).is_err());
    }

    #[test]
    fn negative_roots_and_constants() {
        for p in [ints(&[3]), ints(&[2, 3, 1]), ints(&[0, 0, 1]), ints(&[4, 0, 0, 1]), ints(&[0])] {
            let cert = sos_from_radial(&p).unwrap();
            assert!(cert.residual < 1e-10, "{p:?}");
        }
    }

    #[test]
    fn repeated_roots() {
        // (t − 1)⁴ (t + 2)², (t − 3)² t³, (t² + 1)²
        for p in [ints(&[4, -12, 9, 4, -6, 0, 1]), ints(&[0, 0, 0, 9, -6, 1]), ints(&[1, 0, 2, 0, 1])] {
            let cert = sos_from_radial(&p).unwrap();
            assert!(cert.residual < 1e-10, "{p:?}: {}", cert.residual);
        }
        // (t − 1)³ (t + 1)
        assert!(sos_from_radial(&ints(&[-1, 2, 0, -2, 1])).is_err());
    }

    #[test]
    fn squarefree_parts() {
        let parts = squarefree(&ints(&[0, 0, 0, 9, -6, 1]));
        assert_eq!(parts, vec![(ints(&[-3, 1]), 2), (ints(&[0, 1]), 3)]);
    }
}
