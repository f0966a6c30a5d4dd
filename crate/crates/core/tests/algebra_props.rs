mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use qplane::expr::{parse, print};
use qplane::qalgebra::{cexp, involution, normal_mul, rat, symbol, symbol_min, Monomial, QPolynomial, Scalar};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn words_match_rewriting(word in word_strategy()) {
        let (k, m, n) = rewrite_oracle(&word);
        prop_assert_eq!(word_product(&word), QPolynomial::term(Monomial::new(m, n), Scalar::q_pow(k)));
    }

    #[test]
    fn parse_print_roundtrip(f in poly_strategy(4)) {
        let text = print(&f);
        prop_assert_eq!(parse(&text).map_err(|e| e.render(&text)), Ok(f));
    }

    #[test]
    fn parser_never_panics(src in "[xqsi0-9*+^()/. -]{0,24}") {
        if let Err(e) = parse(&src) {
            prop_assert!(e.pos <= src.len());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn associativity(f in poly_strategy(2), g in poly_strategy(2), h in poly_strategy(2)) {
        prop_assert_eq!(normal_mul(&normal_mul(&f, &g), &h), normal_mul(&f, &normal_mul(&g, &h)));
    }

    #[test]
    fn involution_laws(f in poly_strategy(3), g in poly_strategy(3)) {
        prop_assert_eq!(involution(&involution(&f)), f.clone());
        prop_assert_eq!(involution(&normal_mul(&f, &g)), normal_mul(&involution(&g), &involution(&f)));
    }

    #[test]
    fn cexp_is_a_projection(f in poly_strategy(4)) {
        let p = cexp(&f);
        prop_assert_eq!(cexp(&p), p.clone());
        prop_assert!(p.terms().all(|(m, _)| m.is_diagonal()));
        prop_assert_eq!(cexp(&(&f - &p)), QPolynomial::zero());
    }

    #[test]
    fn squares_have_nonnegative_vacuum_value(f in poly_strategy(3), q_val in 0.1f64..5.0) {
        let sq = normal_mul(&f.adjoint(), &f);
        let a00 = cexp(&sq).coeff(&Monomial::ONE).eval(q_val);
        prop_assert!(a00.re >= -1e-12 && a00.im.abs() <= 1e-12);
    }

    #[test]
    fn symbol_of_hermitian_square_is_real(f in poly_strategy(3), q_val in 0.2f64..4.0) {
        prop_assume!(!f.is_zero());
        let sym = symbol(&normal_mul(&f.adjoint(), &f)).unwrap();
        prop_assert!(symbol_min(&sym, q_val, 64).is_ok());
    }
}

#[test]
fn fuzz_totality_ten_thousand() {
    let alphabet: Vec<char> = "xx**qsi0123456789+-^()/. \u{e9}".chars().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0xfeed);
    for _ in 0..10_000 {
        let len = rng.gen_range(0..32);
        let src: String = (0..len).map(|_| alphabet[rng.gen_range(0..alphabet.len())]).collect();
        if let Err(e) = parse(&src) {
            assert!(e.pos <= src.len(), "{src:?} -> {e}");
            let _ = e.render(&src);
        }
    }
}

#[test]
fn precedence_and_star_binding() {
    assert_eq!(parse("2 + 3 * x").unwrap(), parse("2 + (3 x)").unwrap());
    assert!(parse("x^2*").is_err());
    assert_eq!(parse("x* x").unwrap(), QPolynomial::monomial(1, 1));
    assert_eq!(parse("x * x").unwrap(), QPolynomial::monomial(0, 2));
    assert_eq!(parse("3.7").unwrap(), QPolynomial::constant(Scalar::from_rational(rat(37, 10))));
}
