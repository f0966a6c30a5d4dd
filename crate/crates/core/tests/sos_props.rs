mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use qplane::qalgebra::scalar::rat_to_f64;
use qplane::qalgebra::{normal_mul, rat, rat_int, Monomial, QPolynomial, Rational, Scalar};
use qplane::sos::refute::quadratic_target;
use qplane::sos::*;

fn q_choices() -> [Rational; 3] {
    [rat_int(2), rat(1, 2), rat_int(3)]
}

#[test]
fn reconstruction_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    while checked < 50 {
        let n_half = rng.gen_range(1..=3u32);
        let q = q_choices()[rng.gen_range(0..3)].clone();
        let basis = MonomialVector::new(n_half);
        let n = basis.len();
        // random Hermitian C with Gaussian-rational entries
        let mut c = vec![vec![Scalar::zero(); n]; n];
        for i in 0..n {
            c[i][i] = Scalar::from_rational(rat(rng.gen_range(-5..=5), rng.gen_range(1..=3)));
            for j in i + 1..n {
                let z = random_gauss(&mut rng);
                c[j][i] = z.conj();
                c[i][j] = z;
            }
        }
        // oracle: Σ c_ij u_i^* u_j through normal_mul
        let mut f = QPolynomial::zero();
        for (i, ui) in basis.entries.iter().enumerate() {
            for (j, uj) in basis.entries.iter().enumerate() {
                let prod = normal_mul(&QPolynomial::monomial(ui.m, ui.n).adjoint(), &QPolynomial::monomial(uj.m, uj.n));
                f = f + prod.scale(&c[i][j]);
            }
        }
        if f.degree() != 2 * n_half as i64 {
            continue;
        }
        let sys = build_system(&f, &q).unwrap();
        assert_eq!(sys.assemble_exact(&c), f);
        for con in &sys.constraints {
            let lhs = con
                .entries
                .iter()
                .fold(Scalar::zero(), |acc, e| acc + &c[e.i][e.j] * &Scalar::q_pow(e.q_exp as i32));
            assert_eq!(lhs, con.rhs, "constraint for {:?}", con.monomial);
        }
        checked += 1;
    }
}

#[test]
fn searched_certificates_verify() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..20 {
        let q = q_choices()[rng.gen_range(0..3)].clone();
        let g = random_poly(&mut rng, 2, 3);
        let h = random_poly(&mut rng, 1, 2);
        let f = normal_mul(&g.adjoint(), &g) + normal_mul(&h.adjoint(), &h) + QPolynomial::constant(Scalar::from_rational(rat(1, 10)));
        if f.degree() % 2 != 0 {
            continue;
        }
        let sys = build_system(&f, &q).unwrap();
        let outcome = sos_search(&sys, 1e-8, 50_000).unwrap();
        let SearchOutcome::Found(c, _) = outcome else {
            panic!("strictly feasible target not found: {}", qplane::print(&f));
        };
        assert!(c.min_eigenvalue() >= -1e-8);
        let cert = sos_extract(&c, &sys);
        assert!(verify_sos(&f, &cert, sys.q_val, 1e-6), "residual {}", cert.residual_max);
    }
}

#[test]
fn duality_is_sound_on_threshold_sweep() {
    let q = rat_int(2);
    let threshold = 8.0 / 9.0;
    for b in [rat(1, 2), rat(4, 5), rat(8, 9), rat_int(1), rat_int(2)] {
        let f = quadratic_target(&rat_int(1), &b);
        let sys = build_system(&f, &q).unwrap();
        let sos = match sos_search(&sys, 1e-8, 50_000).unwrap() {
            SearchOutcome::Found(c, _) => verify_sos(&f, &sos_extract(&c, &sys), 2.0, 1e-6),
            SearchOutcome::NotFound(_) => false,
        };
        let refuted = match paper_refutation(&f, &q).unwrap() {
            Some(cert) => verify_refutation(&f, &cert, &sys).unwrap(),
            None => false,
        };
        assert!(!(sos && refuted), "b = {b}");
        let bf = rat_to_f64(&b);
        if (bf - threshold).abs() >= 1e-3 {
            assert_eq!(sos, bf > threshold, "b = {b}");
            assert_eq!(refuted, bf < threshold, "b = {b}");
        }
    }
}

fn square(rng: &mut ChaCha8Rng, deg: usize) -> Vec<i64> {
    let g: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-3..=3)).collect();
    let mut out = vec![0; 2 * deg + 1];
    for (i, a) in g.iter().enumerate() {
        for (j, b) in g.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

#[test]
fn radial_construction_is_total_on_cone_elements() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let d0 = rng.gen_range(0..=3);
        let s0 = square(&mut rng, d0);
        let d1 = rng.gen_range(0..=2);
        let s1 = square(&mut rng, d1);
        let mut p = vec![0i64; 7];
        for (k, v) in s0.iter().enumerate() {
            p[k] += v;
        }
        for (k, v) in s1.iter().enumerate() {
            p[k + 1] += v;
        }
        let coeffs: Vec<Rational> = p.iter().map(|&v| rat_int(v)).collect();
        let cert = sos_from_radial(&coeffs).unwrap_or_else(|e| panic!("{p:?}: {e}"));
        assert!(cert.residual <= 1e-7, "{p:?}: {}", cert.residual);
        let q = rat(1, 2);
        let sos = cert.to_certificate(&q);
        let scale = p.iter().map(|v| v.abs()).max().unwrap_or(1).max(1) as f64;
        assert!(verify_sos(&sos.target, &sos, 0.5, 1e-7 * scale));
    }
}

#[test]
fn denominator_words_are_diagonal() {
    for w in enumerate_words(2, 2) {
        let b = w.poly();
        assert!(b.is_hermitian());
        assert!(b.terms().all(|(m, _)| m.is_diagonal()));
        assert_eq!(b.coeff(&Monomial::ONE), Scalar::one());
    }
}
