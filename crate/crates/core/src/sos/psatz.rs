//! Denominator search: find `b = Π (q^k x*x + 1)` with `b f b` a sum of squares.

use std::fmt;

use log::debug;
use rayon::prelude::*;

use super::certificate::{sos_extract, verify_sos, SosCertificate};
use super::gram::build_system;
use super::search::{sos_search, SearchOutcome, SearchStats};
use super::{SosError, VERIFY_TOL};
use crate::qalgebra::{normal_mul, Monomial, QPolynomial, Rational, Scalar};

/// Multiset of exponents `k`, stored in descending order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DenominatorWord {
    pub exponents: Vec<i32>,
}

impl DenominatorWord {
    pub fn new(mut exponents: Vec<i32>) -> Self {
        exponents.sort_unstable_by(|a, b| b.cmp(a));
        DenominatorWord { exponents }
    }

    pub fn empty() -> Self {
        DenominatorWord { exponents: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn poly(&self) -> QPolynomial {
        self.exponents.iter().fold(QPolynomial::one(), |acc, &k| {
            let factor = QPolynomial::term(Monomial::new(1, 1), Scalar::q_pow(k)) + QPolynomial::one();
            normal_mul(&acc, &factor)
        })
    }
}

impl fmt::Display for DenominatorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponents.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .exponents
            .iter()
            .map(|&k| match k {
                0 => "(1 + x*x)".to_string(),
                1 => "(1 + q x*x)".to_string(),
                k => format!("(1 + q^{k} x*x)"),
            })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// Words with at most `depth` factors and `|k| ≤ kmax`: shorter words first,
/// then exponent tuples (descending order inside a word) compared
/// lexicographically from the largest exponent down.
pub fn enumerate_words(depth: usize, kmax: i32) -> Vec<DenominatorWord> {
    let ks: Vec<i32> = (-kmax..=kmax).rev().collect();
    let mut out = vec![DenominatorWord::empty()];
    let mut layer: Vec<Vec<i32>> = vec![Vec::new()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for w in &layer {
            let cap = w.last().copied().unwrap_or(i32::MAX);
            for &k in ks.iter().filter(|&&k| k <= cap) {
                let mut v = w.clone();
                v.push(k);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned().map(|exponents| DenominatorWord { exponents }));
        layer = next;
    }
    out
}

#[derive(Clone, Debug)]
pub enum PsatzOutcome {
    Found {
        word: DenominatorWord,
        certificate: SosCertificate,
        stats: SearchStats,
    },
    NotFound {
        tried: usize,
    },
}

pub fn psatz_search(
    f: &QPolynomial,
    q: &Rational,
    depth: usize,
    kmax: i32,
    tol: f64,
    max_iter: usize,
) -> Result<PsatzOutcome, SosError> {
    if !f.is_hermitian() {
        return Err(SosError::NotHermitian);
    }
    if kmax < 0 {
        return Err(SosError::InvalidArgument("kmax must be nonnegative".into()));
    }
    let words = enumerate_words(depth, kmax);
    let tried = words.len();
    let found = words.into_par_iter().find_map_first(|word| {
        let b = word.poly();
        let target = normal_mul(&normal_mul(&b, f), &b);
        let sys = build_system(&target, q).ok()?;
        let outcome = sos_search(&sys, tol, max_iter).ok()?;
        debug!("psatz word {word}: found = {}", outcome.gram().is_some());
        let SearchOutcome::Found(c, stats) = outcome else { return None };
        let certificate = sos_extract(&c, &sys);
        verify_sos(&target, &certificate, sys.q_val, VERIFY_TOL.max(tol)).then_some((word, certificate, stats))
    });
    Ok(match found {
        Some((word, certificate, stats)) => PsatzOutcome::Found { word, certificate, stats },
        None => PsatzOutcome::NotFound { tried },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::qalgebra::rat_int;

    #[test]
    fn enumeration_order() {
        let words: Vec<Vec<i32>> = enumerate_words(2, 1).into_iter().map(|w| w.exponents).collect();
        assert_eq!(
            words,
            vec![
                vec![],
                vec![1],
                vec![0],
                vec![-1],
                vec![1, 1],
                vec![1, 0],
                vec![1, -1],
                vec![0, 0],
                vec![0, -1],
                vec![-1, -1],
            ]
        );
        assert_eq!(enumerate_words(0, 3).len(), 1);
    }

    #[test]
    fn word_polynomial_is_diagonal_and_hermitian() {
        let w = DenominatorWord::new(vec![-1, 2, 0]);
        assert_eq!(w.exponents, vec![2, 0, -1]);
        let b = w.poly();
        assert!(b.is_hermitian());
        assert!(b.terms().all(|(m, _)| m.is_diagonal()));
        assert_eq!(DenominatorWord::new(vec![1]).poly(), parse("1 + q x* x").unwrap());
        assert_eq!(DenominatorWord::new(vec![1]).to_string(), "(1 + q x*x)");
    }

    #[test]
    fn already_sos_returns_empty_word() {
        let f = parse("(x+x*)^2 - 2(x+x*) + 1").unwrap();
        match psatz_search(&f, &rat_int(2), 1, 1, 1e-8, 50_000).unwrap() {
            PsatzOutcome::Found { word, .. } => assert!(word.is_empty()),
            PsatzOutcome::NotFound { .. } => panic!("expected a certificate"),
        }
    }

    #[test]
    fn negative_constant_not_found() {
        let out = psatz_search(&parse("-1").unwrap(), &rat_int(2), 1, 1, 1e-8, 5_000).unwrap();
        assert!(matches!(out, PsatzOutcome::NotFound { tried: 4 }));
    }
}
