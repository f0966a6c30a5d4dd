//! Canonical rendering; `parse(print(f)) == f` exactly.

use num_traits::{One, Signed, Zero};

use crate::qalgebra::{Monomial, QPolynomial, Rational, Scalar};

struct Atom {
    negative: bool,
    body: String,
}

fn rational_body(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn s_power(p: i32) -> Option<String> {
    match p {
        0 => None,
        2 => Some("q".into()),
        1 => Some("s".into()),
        p if p % 2 == 0 => Some(format!("q^{}", p / 2)),
        p => Some(format!("s^{p}")),
    }
}

fn atoms(c: &Scalar) -> Vec<Atom> {
    let mut out = Vec::new();
    for (p, g) in c.coeffs().iter().rev() {
        for (part, imag) in [(&g.re, false), (&g.im, true)] {
            if part.is_zero() {
                continue;
            }
            let mag = part.abs();
            let mut pieces = Vec::new();
            if !mag.is_one() {
                pieces.push(rational_body(&mag));
            }
            if imag {
                pieces.push("i".to_string());
            }
            pieces.extend(s_power(*p));
            if pieces.is_empty() {
                pieces.push("1".into());
            }
            out.push(Atom { negative: part.is_negative(), body: pieces.join(" ") });
        }
    }
    out
}

fn join_compact(atoms: &[Atom]) -> String {
    let mut s = String::new();
    for (k, a) in atoms.iter().enumerate() {
        match (k, a.negative) {
            (0, true) => s.push('-'),
            (0, false) => {}
            (_, true) => s.push('-'),
            (_, false) => s.push('+'),
        }
        s.push_str(&a.body);
    }
    s
}

/// Scalar on its own, e.g. `q + 1` or `-3/2 s`.
pub fn print_scalar(c: &Scalar) -> String {
    let atoms = atoms(c);
    if atoms.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (k, a) in atoms.iter().enumerate() {
        match (k, a.negative) {
            (0, true) => s.push('-'),
            (0, false) => {}
            (_, true) => s.push_str(" - "),
            (_, false) => s.push_str(" + "),
        }
        s.push_str(&a.body);
    }
    s
}

pub fn print_monomial(mono: &Monomial) -> String {
    let mut parts = Vec::new();
    if mono.m > 0 {
        parts.push(format!("x*^{}", mono.m));
    }
    if mono.n > 0 {
        parts.push(format!("x^{}", mono.n));
    }
    parts.join(" ")
}

pub fn print(f: &QPolynomial) -> String {
    if f.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (mono, c)) in f.terms().enumerate() {
        let atoms = atoms(c);
        let mono_text = print_monomial(mono);
        let (negative, text) = if atoms.len() == 1 {
            let a = &atoms[0];
            let text = if mono_text.is_empty() {
                a.body.clone()
            } else if a.body == "1" {
                mono_text
            } else {
                format!("{} {}", a.body, mono_text)
            };
            (a.negative, text)
        } else {
            let coeff = format!("({})", join_compact(&atoms));
            let text = if mono_text.is_empty() { coeff } else { format!("{coeff} {mono_text}") };
            (false, text)
        };
        match (k, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&text);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::qalgebra::rat;

    #[test]
    fn golden() {
        assert_eq!(print(&QPolynomial::zero()), "0");
        assert_eq!(print(&QPolynomial::term(Monomial::new(1, 1), Scalar::s_pow(2))), "q x*^1 x^1");
        assert_eq!(print(&parse("(x+x*)^2").unwrap()), "x^2 + (q+1) x*^1 x^1 + x*^2");
        assert_eq!(print(&parse("-x + 3/2 s^-3 - q^-2 x* x^2").unwrap()), "3/2 s^-3 - x^1 - q^-2 x*^1 x^2");
        assert_eq!(print(&parse("2 i x - i").unwrap()), "-i + 2 i x^1");
        assert_eq!(print_scalar(&(Scalar::one() - Scalar::q_pow(1))), "-q + 1");
    }

    #[test]
    fn roundtrip_samples() {
        let samples = [
            QPolynomial::constant(Scalar::from_rational(rat(-7, 3)) * Scalar::s_pow(-3)),
            parse("(x + x*)^4 - 2(x+x*)^2 + 18/25").unwrap(),
            parse("(1 + i s - q^2) x*^2 x - (s^-1 + 1/3) x").unwrap(),
        ];
        for f in samples {
            assert_eq!(parse(&print(&f)).unwrap(), f, "{}", print(&f));
        }
    }
}
