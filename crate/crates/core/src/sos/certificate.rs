//! SOS certificates: extraction from a Gram matrix, verification, JSON.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::gram::GramSystem;
use super::search::GramMatrix;
use crate::linalg::hermitian_eigen;
use crate::qalgebra::json::{poly_from_json, poly_to_json, rational_from_str, rational_to_string};
use crate::qalgebra::scalar::rat_to_f64;
use crate::qalgebra::{normal_mul, NumericPoly, QPolynomial, Rational, Scalar};

/// `target = Σ_i weights_i · factors_i^* factors_i`.
#[derive(Clone, Debug)]
pub struct SosCertificate {
    pub target: QPolynomial,
    pub q: Rational,
    pub factors: Vec<QPolynomial>,
    pub weights: Vec<Rational>,
    /// `target − Σ w_i f_i^* f_i` at q, as floats.
    pub residual: NumericPoly,
    pub residual_max: f64,
    /// True when the factors are exact symbolic data rather than rounded floats.
    pub exact: bool,
}

impl SosCertificate {
    /// Builds a certificate from exact data and records its float residual.
    pub fn exact(target: QPolynomial, q: Rational, factors: Vec<QPolynomial>, weights: Vec<Rational>) -> Self {
        let mut cert = SosCertificate {
            target,
            q,
            factors,
            weights,
            residual: NumericPoly::zero(0.0),
            residual_max: 0.0,
            exact: true,
        };
        cert.refresh_residual();
        cert
    }

    /// Numeric certificate with unit weights.
    pub fn numeric(target: QPolynomial, q: Rational, factors: Vec<QPolynomial>) -> Self {
        let weights = vec![Rational::one(); factors.len()];
        let mut cert = SosCertificate {
            target,
            q,
            factors,
            weights,
            residual: NumericPoly::zero(0.0),
            residual_max: 0.0,
            exact: false,
        };
        cert.refresh_residual();
        cert
    }

    pub fn q_val(&self) -> f64 {
        rat_to_f64(&self.q)
    }

    /// `Σ w_i f_i^* f_i` evaluated at q.
    pub fn recompose_numeric(&self, q_val: f64) -> NumericPoly {
        let mut acc = NumericPoly::zero(q_val);
        for (f, w) in self.factors.iter().zip(&self.weights) {
            let g = NumericPoly::from_poly(f, q_val);
            acc = acc.add(&g.hermitian_square().scale(rat_to_f64(w)));
        }
        acc
    }

    /// `Σ w_i f_i^* f_i` with q symbolic.
    pub fn recompose_exact(&self) -> QPolynomial {
        let mut acc = QPolynomial::zero();
        for (f, w) in self.factors.iter().zip(&self.weights) {
            let sq = normal_mul(&f.adjoint(), f);
            acc = acc + sq.scale(&Scalar::from_rational(w.clone()));
        }
        acc
    }

    pub fn refresh_residual(&mut self) {
        let q_val = self.q_val();
        self.residual = NumericPoly::from_poly(&self.target, q_val).sub(&self.recompose_numeric(q_val));
        self.residual_max = self.residual.max_abs();
    }

    pub fn to_json(&self) -> Value {
        json!({
            "kind": "sos",
            "q": rational_to_string(&self.q),
            "target": poly_to_json(&self.target),
            "factors": self.factors.iter().map(poly_to_json).collect::<Vec<_>>(),
            "weights": self.weights.iter().map(rational_to_string).collect::<Vec<_>>(),
            "lambda": [],
            "residual_max": self.residual_max,
            "exact": self.exact,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, String> {
        if v.get("kind").and_then(Value::as_str) != Some("sos") {
            return Err("certificate kind must be \"sos\"".into());
        }
        let q = v
            .get("q")
            .and_then(Value::as_str)
            .and_then(rational_from_str)
            .ok_or("certificate needs a rational \"q\"")?;
        let target = poly_from_json(v.get("target").ok_or("certificate needs \"target\"")?).map_err(|e| e.to_string())?;
        let factors = v
            .get("factors")
            .and_then(Value::as_array)
            .ok_or("certificate needs \"factors\"")?
            .iter()
            .map(|f| poly_from_json(f).map_err(|e| e.to_string()))
            .collect::<Result<Vec<_>, _>>()?;
        let weights = v
            .get("weights")
            .and_then(Value::as_array)
            .ok_or("certificate needs \"weights\"")?
            .iter()
            .map(|w| w.as_str().and_then(rational_from_str).ok_or_else(|| "weights must be rational strings".to_string()))
            .collect::<Result<Vec<_>, _>>()?;
        if weights.len() != factors.len() {
            return Err("factors and weights differ in length".into());
        }
        let exact = v.get("exact").and_then(Value::as_bool).unwrap_or(false);
        let mut cert = SosCertificate {
            target,
            q,
            factors,
            weights,
            residual: NumericPoly::zero(0.0),
            residual_max: 0.0,
            exact,
        };
        cert.refresh_residual();
        Ok(cert)
    }
}

/// Float → exact dyadic rational; non-finite input maps to zero.
pub fn rational_from_f64(x: f64) -> Rational {
    BigRational::from_float(x).unwrap_or_else(Rational::zero)
}

pub fn scalar_from_complex(z: Complex64) -> Scalar {
    Scalar::from_gauss(num_complex::Complex::new(rational_from_f64(z.re), rational_from_f64(z.im)))
}

/// Factor `C = Σ λ_i v_i v_i^H` into `f_i = √λ_i · v_i^H w_N`.
pub fn sos_extract(c: &GramMatrix, sys: &GramSystem) -> SosCertificate {
    let (vals, vecs) = hermitian_eigen(&c.entries);
    let mut factors = Vec::new();
    for (k, &lam) in vals.iter().enumerate() {
        if lam <= 0.0 {
            continue;
        }
        let root = lam.sqrt();
        let f = QPolynomial::from_terms(
            sys.basis
                .entries
                .iter()
                .enumerate()
                .map(|(j, mono)| (*mono, scalar_from_complex(vecs[(j, k)].conj() * root))),
        );
        if !f.is_zero() {
            factors.push(f);
        }
    }
    SosCertificate::numeric(sys.target.clone(), sys.q.clone(), factors)
}

/// Checks `f = Σ w_i f_i^* f_i`.
///
/// Exact certificates are compared symbolically after reducing at the
/// certificate's rational q (and `q_val` must match it); numeric ones
/// coefficientwise at `q_val` within `tol`.
pub fn verify_sos(f: &QPolynomial, cert: &SosCertificate, q_val: f64, tol: f64) -> bool {
    if cert.factors.len() != cert.weights.len() || cert.weights.iter().any(|w| *w < Rational::zero()) {
        return false;
    }
    if cert.exact {
        let same_q = (cert.q_val() - q_val).abs() <= 1e-12 * q_val.abs().max(1.0);
        return same_q && (f - &cert.recompose_exact()).specialize(&cert.q).is_zero();
    }
    let dev = NumericPoly::from_poly(f, q_val).sub(&cert.recompose_numeric(q_val));
    dev.max_abs() <= tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::linalg::CMatrix;
    use crate::qalgebra::rat_int;
    use crate::sos::gram::build_system;

    #[test]
    fn unit_certificate() {
        let sys = build_system(&QPolynomial::one(), &rat_int(2)).unwrap();
        let c = GramMatrix::new(CMatrix::from_element(1, 1, Complex64::new(1.0, 0.0)));
        let cert = sos_extract(&c, &sys);
        assert_eq!(cert.factors, vec![QPolynomial::one()]);
        assert_eq!(cert.residual_max, 0.0);
        assert!(verify_sos(&QPolynomial::one(), &cert, 2.0, 1e-12));
    }

    #[test]
    fn random_psd_roundtrip() {
        let sys = build_system(&QPolynomial::monomial(1, 1), &rat_int(3)).unwrap();
        let b = CMatrix::from_fn(3, 3, |i, j| Complex64::new((i + 2 * j) as f64 * 0.3 - 0.7, (i as f64 - j as f64) * 0.4));
        let c = GramMatrix::new(&b * b.adjoint());
        let cert = sos_extract(&c, &sys);
        let direct = sys.assemble(&c.entries);
        assert!(direct.sub(&cert.recompose_numeric(3.0)).max_abs() <= 1e-10);
    }

    #[test]
    fn tamper_and_json() {
        let f = parse("x* x").unwrap();
        let cert = SosCertificate::exact(f.clone(), rat_int(2), vec![QPolynomial::x()], vec![Rational::one()]);
        assert!(verify_sos(&f, &cert, 2.0, 0.0));
        assert!(!verify_sos(&f, &cert, 3.0, 0.0));
        let back = SosCertificate::from_json(&cert.to_json()).unwrap();
        assert!(verify_sos(&f, &back, 2.0, 0.0));
        let mut bad = cert.clone();
        bad.factors[0] = &bad.factors[0] + &QPolynomial::constant(Scalar::from_rational(rational_from_f64(1e-3)));
        assert!(!verify_sos(&f, &bad, 2.0, 1e-6));
        bad.exact = false;
        assert!(!verify_sos(&f, &bad, 2.0, 1e-6));
    }
}
