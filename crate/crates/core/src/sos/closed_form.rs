//! Hand-derived exact certificates at the two thresholds.
//!
//! The coefficients are rational functions of q, so they are instantiated at a
//! rational q; only `q^{-1/2}` stays symbolic.

use num_traits::One;

use super::certificate::SosCertificate;
use super::refute::{quadratic_target, quadratic_threshold, quartic_target, quartic_threshold};
use crate::qalgebra::scalar::rat_int;
use crate::qalgebra::{Monomial, QPolynomial, Rational, Scalar};

fn r(v: Rational) -> Scalar {
    Scalar::from_rational(v)
}

/// `f = q^{-1/2}(−2aq/(1+q) + q x + x*)` with
/// `f^*f = (x+x*)² − 2a(x+x*) + 4a²q/(q+1)²`.
pub fn quadratic_factor(q: &Rational, a: &Rational) -> QPolynomial {
    let one = Rational::one();
    let c0 = -(rat_int(2) * a * q) / (q + &one);
    let inner = QPolynomial::from_terms([
        (Monomial::ONE, r(c0)),
        (Monomial::new(0, 1), r(q.clone())),
        (Monomial::new(1, 0), Scalar::one()),
    ]);
    inner.scale(&Scalar::s_pow(-1))
}

pub fn quadratic_certificate(q: &Rational, a: &Rational) -> SosCertificate {
    let target = quadratic_target(a, &quadratic_threshold(q, a));
    SosCertificate::exact(target, q.clone(), vec![quadratic_factor(q, a)], vec![Rational::one()])
}

/// `(u_1, u_2)` with
/// `u_1^*u_1 + ((1+q+q²)/q) u_2^*u_2 = (x+x*)⁴ − 2(x+x*)² + q(1+q)²/(1+q²)²`.
pub fn quartic_factors(q: &Rational) -> (QPolynomial, QPolynomial) {
    let one = Rational::one();
    let q2 = q * q;
    let c0 = -(q / (&one + &q2));
    let mid = (&one + &q2) / (&one + q);
    let u1 = QPolynomial::from_terms([
        (Monomial::ONE, r(c0.clone())),
        (Monomial::new(2, 0), r(&one / (q * (&one + q)))),
        (Monomial::new(1, 1), r(mid.clone())),
        (Monomial::new(0, 2), r(&q2 / (&one + q))),
    ]);
    let u2 = QPolynomial::from_terms([
        (Monomial::ONE, r(c0)),
        (Monomial::new(2, 0), r(&one / (&one + q))),
        (Monomial::new(1, 1), r(mid)),
        (Monomial::new(0, 2), r(q / (&one + q))),
    ]);
    (u1, u2)
}

pub fn quartic_weight(q: &Rational) -> Rational {
    let one = Rational::one();
    (&one + q + q * q) / q
}

pub fn quartic_certificate(q: &Rational) -> SosCertificate {
    let (u1, u2) = quartic_factors(q);
    let target = quartic_target(&quartic_threshold(q));
    SosCertificate::exact(target, q.clone(), vec![u1, u2], vec![Rational::one(), quartic_weight(q)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qalgebra::scalar::{rat, rat_to_f64};
    use crate::sos::certificate::{sos_extract, verify_sos};
    use crate::sos::gram::build_system;
    use crate::sos::search::{sos_search, SearchOutcome};

    #[test]
    fn quadratic_identity_exact() {
        for q in [rat(1, 3), rat(1, 2), rat_int(2), rat_int(3)] {
            for a in [rat_int(1), rat_int(-2), rat(3, 5)] {
                let cert = quadratic_certificate(&q, &a);
                assert!(verify_sos(&cert.target, &cert, rat_to_f64(&q), 0.0), "q = {q}, a = {a}");
                assert!(cert.residual_max < 1e-12);
            }
        }
    }

    #[test]
    fn quartic_identity_exact() {
        for q in [rat(1, 2), rat_int(2), rat(5, 7)] {
            let cert = quartic_certificate(&q);
            assert!(verify_sos(&cert.target, &cert, rat_to_f64(&q), 0.0), "q = {q}");
        }
        assert_eq!(quartic_threshold(&rat_int(2)), rat(18, 25));
    }

    #[test]
    fn wrong_constant_fails() {
        let q = rat_int(2);
        let mut cert = quadratic_certificate(&q, &rat_int(1));
        cert.target = quadratic_target(&rat_int(1), &rat(9, 10));
        assert!(!verify_sos(&cert.target, &cert, 2.0, 0.0));
    }

    #[test]
    fn searched_threshold_certificate_is_rank_one_along_closed_form() {
        // At the threshold the Gram matrix is forced to be the rank-1 matrix of f.
        let q = rat_int(2);
        let f = quadratic_target(&rat_int(1), &rat(8, 9));
        let sys = build_system(&f, &q).unwrap();
        let SearchOutcome::Found(c, _) = sos_search(&sys, 1e-9, 50_000).unwrap() else {
            panic!("threshold target should be found");
        };
        let cert = sos_extract(&c, &sys);
        let dominant = cert
            .factors
            .iter()
            .map(|g| crate::qalgebra::NumericPoly::from_poly(g, 2.0))
            .max_by(|a, b| a.max_abs().total_cmp(&b.max_abs()))
            .unwrap();
        let exact = crate::qalgebra::NumericPoly::from_poly(&quadratic_factor(&q, &rat_int(1)), 2.0);
        // align the phase on the x coefficient
        let m = Monomial::new(0, 1);
        let phase = exact.coeff(&m) / dominant.coeff(&m);
        assert!((phase.norm() - 1.0).abs() < 1e-3);
        let mut dev = 0.0f64;
        for (mono, z) in exact.terms() {
            dev = dev.max((dominant.coeff(mono) * phase - z).norm());
        }
        assert!(dev < 1e-3, "deviation {dev}");
    }
}
