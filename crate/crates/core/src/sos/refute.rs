//! Dual (non-SOS) certificates.
//!
//! If `Λ ⪰ 0` is trace-orthogonal to every direction of the affine set of
//! Gram matrices, `tr(ΛC)` is the same number for all feasible `C`; a negative
//! value rules out `C ⪰ 0` because the trace of a product of two PSD matrices
//! is nonnegative. Only the two hand-derived families below are supported.

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::gram::GramSystem;
use super::search::GramMatrix;
use super::SosError;
use crate::expr::parse;
use crate::linalg::{hermitian_defect, min_eigenvalue, trace_product, CMatrix};
use crate::qalgebra::json::{poly_from_json, poly_to_json, rational_from_str, rational_to_string};
use crate::qalgebra::scalar::{rat_int, rat_to_f64};
use crate::qalgebra::{Monomial, QPolynomial, Rational, Scalar};

#[derive(Clone, Debug)]
pub struct RefutationCertificate {
    pub lambda: GramMatrix,
    /// `tr(ΛC)` for every feasible `C`.
    pub value: f64,
    pub q: Rational,
    pub target: QPolynomial,
}

/// Which hand-derived dual family a target belongs to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Template {
    /// `(x+x*)² − 2a(x+x*) + b`
    Quadratic { a: Rational, b: Rational },
    /// `(x+x*)⁴ − 2(x+x*)² + c`
    Quartic { c: Rational },
}

fn real_part() -> QPolynomial {
    QPolynomial::x() + QPolynomial::x_star()
}

fn constant(r: &Rational) -> QPolynomial {
    QPolynomial::constant(Scalar::from_rational(r.clone()))
}

pub fn quadratic_target(a: &Rational, b: &Rational) -> QPolynomial {
    let s = real_part();
    s.pow(2) - s.scale(&Scalar::from_rational(a * rat_int(2))) + constant(b)
}

pub fn quartic_target(c: &Rational) -> QPolynomial {
    let s = real_part();
    s.pow(4) - s.pow(2).scale(&Scalar::from_int(2)) + constant(c)
}

/// `4a²q/(q+1)²`: the least `b` for which the quadratic target is SOS.
pub fn quadratic_threshold(q: &Rational, a: &Rational) -> Rational {
    let one = Rational::one();
    rat_int(4) * a * a * q / ((q + &one) * (q + &one))
}

/// `q(1+q)²/(1+q²)²`: the least `c` for which the quartic target is SOS.
pub fn quartic_threshold(q: &Rational) -> Rational {
    let one = Rational::one();
    let q2 = q * q;
    q * (&one + q) * (&one + q) / ((&one + &q2) * (&one + &q2))
}

pub fn match_template(f: &QPolynomial) -> Option<Template> {
    let b = f.coeff(&Monomial::ONE).as_rational()?;
    if f.degree() == 2 {
        let r = f.coeff(&Monomial::new(0, 1)).as_rational()?;
        let a = -r / rat_int(2);
        return (quadratic_target(&a, &b) == *f).then_some(Template::Quadratic { a, b });
    }
    if f.degree() == 4 && quartic_target(&b) == *f {
        return Some(Template::Quartic { c: b });
    }
    None
}

fn real_matrix(rows: &[Vec<Rational>]) -> CMatrix {
    let n = rows.len();
    CMatrix::from_fn(n, n, |i, j| Complex64::new(rat_to_f64(&rows[i][j]), 0.0))
}

/// The 3×3 multiplier matrix on `w_1 = (1, x, x*)` for the quadratic family.
///
/// The (2,2) entry is `4a²q/(1+q)³`; with it `tr(ΛC) = b − 4a²q/(q+1)²`.
pub fn quadratic_lambda(q: &Rational, a: &Rational) -> CMatrix {
    let one = Rational::one();
    let p = &one + q;
    let a1 = one.clone();
    let a2 = rat_int(2) * a * q / (&p * &p);
    let a3 = Rational::zero();
    let a4 = rat_int(4) * a * a * q / (&p * &p * &p);
    real_matrix(&[
        vec![a1, a2.clone(), a2.clone()],
        vec![a2.clone(), a4.clone(), a3.clone()],
        vec![a2, a3, q * &a4],
    ])
}

/// The 6×6 multiplier matrix on `w_2 = (1, x, x*, x², x*x, x*²)` for the quartic family.
pub fn quartic_lambda(q: &Rational) -> Result<CMatrix, SosError> {
    let one = Rational::one();
    if *q == one {
        return Err(SosError::InvalidArgument("the quartic dual needs q ≠ 1".into()));
    }
    let q2 = q * q;
    let p = &one + q;
    let r = &one + &q2;
    let d = (q - &one) * (q - &one) * (&one + q + &q2);
    let zero = Rational::zero();
    let a1 = one.clone();
    let (a2, a3, a5, a6) = (zero.clone(), zero.clone(), zero.clone(), zero);
    let a4 = (q + &q2) / (&r * &r);
    let a7 = q * &q2 * &p * &p / (&d * &r * &r);
    let a8 = -(&q2 * &p * &p * &p) / (&d * &r * &r * &r);
    let a9 = q * &p * &p / (&d * &r * &r);
    let q4 = &q2 * &q2;
    Ok(real_matrix(&[
        vec![a1, a2.clone(), a2.clone(), a3.clone(), a4.clone(), a3.clone()],
        vec![a2.clone(), a4.clone(), a3.clone(), a6.clone(), a6.clone(), a5.clone()],
        vec![a2, a3.clone(), q * &a4, a5.clone(), q * &a6, &q2 * &a6],
        vec![a3.clone(), a6.clone(), a5.clone(), a9.clone(), a8.clone(), a7.clone()],
        vec![a4.clone(), a6.clone(), q * &a6, a8.clone(), q * &a9, &q2 * &a8],
        vec![a3, a5, &q2 * &a6, a7, &q2 * &a8, &q4 * &a9],
    ]))
}

/// Builds the hand-derived dual for `f` when it matches one of the templates.
pub fn paper_refutation(f: &QPolynomial, q: &Rational) -> Result<Option<RefutationCertificate>, SosError> {
    let (lambda, value) = match match_template(f) {
        Some(Template::Quadratic { a, b }) => (quadratic_lambda(q, &a), b - quadratic_threshold(q, &a)),
        Some(Template::Quartic { c }) => {
            if *q == Rational::one() {
                return Ok(None);
            }
            (quartic_lambda(q)?, c - quartic_threshold(q))
        }
        None => return Ok(None),
    };
    Ok(Some(RefutationCertificate {
        lambda: GramMatrix::new(lambda),
        value: rat_to_f64(&value),
        q: q.clone(),
        target: f.clone(),
    }))
}

/// Numerical checks of the three dual conditions for `sys`.
pub fn verify_refutation(f: &QPolynomial, cert: &RefutationCertificate, sys: &GramSystem) -> Result<bool, SosError> {
    let lam = &cert.lambda.entries;
    if lam.nrows() != sys.size() || lam.ncols() != sys.size() {
        return Err(SosError::DimensionMismatch { expected: sys.size(), found: lam.nrows() });
    }
    if *f != sys.target {
        return Ok(false);
    }
    let scale = lam.iter().map(|z| z.norm()).fold(1.0, f64::max);
    if hermitian_defect(lam) > 1e-12 * scale || min_eigenvalue(lam) < -1e-10 {
        return Ok(false);
    }
    let model = sys.affine_model();
    let coords = model.coords;
    for z in model.null_basis() {
        if trace_product(lam, &coords.to_matrix(&z)).norm() > 1e-9 {
            return Ok(false);
        }
    }
    let value = trace_product(lam, &coords.to_matrix(&model.particular())).re;
    let agrees = (value - cert.value).abs() <= 1e-9 * value.abs().max(1.0);
    Ok(agrees && value < 0.0 && cert.value < 0.0)
}

impl RefutationCertificate {
    pub fn to_json(&self) -> Value {
        let lam: Vec<Value> = self.lambda.entries.row_iter().flat_map(|row| {
            row.iter().map(|z| json!([z.re, z.im])).collect::<Vec<_>>()
        }).collect();
        json!({
            "kind": "refutation",
            "q": rational_to_string(&self.q),
            "target": poly_to_json(&self.target),
            "factors": [],
            "weights": [],
            "size": self.lambda.size(),
            "lambda": lam,
            "value": self.value,
            "residual_max": 0.0,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, String> {
        if v.get("kind").and_then(Value::as_str) != Some("refutation") {
            return Err("certificate kind must be \"refutation\"".into());
        }
        let q = v.get("q").and_then(Value::as_str).and_then(rational_from_str).ok_or("certificate needs a rational \"q\"")?;
        let target = poly_from_json(v.get("target").ok_or("certificate needs \"target\"")?).map_err(|e| e.to_string())?;
        let entries = v.get("lambda").and_then(Value::as_array).ok_or("certificate needs \"lambda\"")?;
        let n = (entries.len() as f64).sqrt().round() as usize;
        if n * n != entries.len() {
            return Err("lambda must hold n² entries".into());
        }
        let mut vals = Vec::with_capacity(entries.len());
        for e in entries {
            match e.as_array().map(Vec::as_slice) {
                Some([re, im]) => vals.push(Complex64::new(
                    re.as_f64().ok_or("lambda entries must be numbers")?,
                    im.as_f64().ok_or("lambda entries must be numbers")?,
                )),
                _ => return Err("lambda entries must be [re, im]".into()),
            }
        }
        let value = v.get("value").and_then(Value::as_f64).ok_or("certificate needs \"value\"")?;
        Ok(RefutationCertificate {
            lambda: GramMatrix::new(CMatrix::from_row_slice(n, n, &vals)),
            value,
            q,
            target,
        })
    }
}

/// Convenience for callers holding source text.
pub fn template_of(src: &str) -> Option<Template> {
    parse(src).ok().as_ref().and_then(match_template)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qalgebra::rat;
    use crate::sos::gram::build_system;

    fn refutes(f: &QPolynomial, q: &Rational) -> bool {
        let sys = build_system(f, q).unwrap();
        match paper_refutation(f, q).unwrap() {
            Some(cert) => verify_refutation(f, &cert, &sys).unwrap(),
            None => false,
        }
    }

    #[test]
    fn templates_match() {
        assert_eq!(
            template_of("(x+x*)^2 - 2(x+x*) + 0.8"),
            Some(Template::Quadratic { a: rat_int(1), b: rat(4, 5) })
        );
        assert_eq!(template_of("(x+x*)^4 - 2(x+x*)^2 + 18/25"), Some(Template::Quartic { c: rat(18, 25) }));
        assert_eq!(template_of("(x x*)^2 - (x+x*)^2 + 3.7"), None);
        assert_eq!(template_of("(x+x*)^2 + x* x"), None);
    }

    #[test]
    fn quadratic_dual() {
        let q = rat_int(2);
        let a = rat_int(1);
        let lam = quadratic_lambda(&q, &a);
        assert!((lam[(1, 1)].re - 8.0 / 27.0).abs() < 1e-15);
        assert!((lam[(0, 1)].re - 4.0 / 9.0).abs() < 1e-15);
        assert!(min_eigenvalue(&lam) > -1e-12);
        for b in [rat(1, 2), rat(4, 5)] {
            assert!(refutes(&quadratic_target(&a, &b), &q));
        }
        for b in [rat(8, 9), rat_int(1), rat_int(2)] {
            assert!(!refutes(&quadratic_target(&a, &b), &q));
        }
        let cert = paper_refutation(&quadratic_target(&a, &rat(4, 5)), &q).unwrap().unwrap();
        assert!((cert.value - (0.8 - 8.0 / 9.0)).abs() < 1e-15);
    }

    #[test]
    fn quartic_dual() {
        for q in [rat_int(2), rat(1, 2), rat_int(3)] {
            let c0 = quartic_threshold(&q);
            let lam = quartic_lambda(&q).unwrap();
            assert!(min_eigenvalue(&lam) > -1e-10);
            assert!(refutes(&quartic_target(&(&c0 - rat(1, 20))), &q));
            assert!(!refutes(&quartic_target(&c0), &q));
        }
        assert!(quartic_lambda(&rat_int(1)).is_err());
    }

    #[test]
    fn degenerate_and_mismatched() {
        let q = rat_int(2);
        let f = quadratic_target(&rat_int(1), &rat(4, 5));
        let sys = build_system(&f, &q).unwrap();
        let zero = RefutationCertificate { lambda: GramMatrix::new(CMatrix::zeros(3, 3)), value: 0.0, q: q.clone(), target: f.clone() };
        assert!(!verify_refutation(&f, &zero, &sys).unwrap());
        let wrong = RefutationCertificate { lambda: GramMatrix::new(CMatrix::zeros(2, 2)), ..zero };
        assert!(verify_refutation(&f, &wrong, &sys).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let q = rat_int(2);
        let f = quartic_target(&rat(67, 100));
        let cert = paper_refutation(&f, &q).unwrap().unwrap();
        let back = RefutationCertificate::from_json(&cert.to_json()).unwrap();
        let sys = build_system(&f, &q).unwrap();
        assert!(verify_refutation(&f, &back, &sys).unwrap());
    }
}
