#![allow(dead_code)]

use num_complex::Complex;
use proptest::prelude::*;
use rand::Rng;

use qplane::qalgebra::{rat, Monomial, QPolynomial, Scalar};

pub fn gauss(re: i64, im: i64, den: i64) -> Scalar {
    Scalar::from_gauss(Complex::new(rat(re, den), rat(im, den)))
}

pub fn scalar_strategy() -> impl Strategy<Value = Scalar> {
    prop::collection::vec((-2i32..=2, -5i64..=5, -3i64..=3, 1i64..=4), 1..=2).prop_map(|terms| {
        terms
            .into_iter()
            .fold(Scalar::zero(), |acc, (p, re, im, den)| acc + gauss(re, im, den) * Scalar::s_pow(p))
    })
}

/// Up to four terms of degree ≤ `max_deg`.
pub fn poly_strategy(max_deg: u32) -> impl Strategy<Value = QPolynomial> {
    prop::collection::vec((0..=max_deg, 0..=max_deg, scalar_strategy()), 0..=4).prop_map(move |terms| {
        QPolynomial::from_terms(
            terms
                .into_iter()
                .map(|(m, n, c)| {
                    let m = m.min(max_deg);
                    (Monomial::new(m, n.min(max_deg - m)), c)
                }),
        )
    })
}

/// Letters of a free-algebra word: `true` is x*, `false` is x.
pub fn word_strategy() -> impl Strategy<Value = Vec<bool>> {
    prop::collection::vec(any::<bool>(), 0..=8)
}

pub fn random_word<R: Rng>(rng: &mut R) -> Vec<bool> {
    let len = rng.gen_range(0..=8);
    (0..len).map(|_| rng.gen_bool(0.5)).collect()
}

/// Sorts a word by local rewriting `x x* → q x* x`; returns `(q-exponent, m, n)`.
pub fn rewrite_oracle(word: &[bool]) -> (i32, u32, u32) {
    let mut w = word.to_vec();
    let mut k = 0;
    loop {
        let pos = w.windows(2).position(|p| !p[0] && p[1]);
        match pos {
            Some(i) => {
                w.swap(i, i + 1);
                k += 1;
            }
            None => break,
        }
    }
    let m = w.iter().filter(|&&s| s).count() as u32;
    (k, m, w.len() as u32 - m)
}

pub fn word_product(word: &[bool]) -> QPolynomial {
    word.iter().fold(QPolynomial::one(), |acc, &star| {
        let letter = if star { QPolynomial::x_star() } else { QPolynomial::x() };
        qplane::qalgebra::normal_mul(&acc, &letter)
    })
}

pub fn random_gauss<R: Rng>(rng: &mut R) -> Scalar {
    gauss(rng.gen_range(-6..=6), rng.gen_range(-6..=6), rng.gen_range(1..=5))
}

/// Random polynomial with rational coefficients and `deg ≤ max_deg`.
pub fn random_poly<R: Rng>(rng: &mut R, max_deg: u32, terms: usize) -> QPolynomial {
    let mut f = QPolynomial::zero();
    for _ in 0..terms {
        let d = rng.gen_range(0..=max_deg);
        let m = rng.gen_range(0..=d);
        f.add_term(Monomial::new(m, d - m), random_gauss(rng) * Scalar::s_pow(rng.gen_range(-2..=2)));
    }
    f
}
