//! Recursive-descent parser producing normal-form polynomials directly.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := '-'? factor ('*'? factor)*
//! factor := atom ('^' '-'? INT)?
//! atom   := 'x' '*'? | 'q' | 's' | 'i' | NUMBER | '(' expr ')'
//! ```

use num_bigint::BigInt;
use num_traits::Zero;

use super::lexer::{tokenize, ExprToken, TokenKind};
use super::SourceError;
use crate::qalgebra::{normal_mul, QPolynomial, Rational, Scalar};

/// Nesting depth of parentheses.
pub const MAX_DEPTH: usize = 256;
/// Largest total degree a parsed polynomial may reach.
pub const MAX_DEGREE: i64 = 128;
/// Largest exponent allowed on a non-monomial scalar base.
pub const MAX_SCALAR_EXPONENT: i64 = 64;
/// Bound on `|s|`-powers produced by exponentiating a unit.
pub const MAX_S_POWER: i64 = 1 << 16;

pub fn parse(text: &str) -> Result<QPolynomial, SourceError> {
    let tokens = tokenize(text)?;
    let mut p = Parser { src: text, tokens, pos: 0, depth: 0 };
    let f = p.expr()?;
    if let Some(tok) = p.peek() {
        let msg = if tok.kind == TokenKind::RParen {
            "unbalanced ')'".to_string()
        } else {
            format!("unexpected '{}'", tok.text)
        };
        return Err(SourceError::new(tok.pos, msg));
    }
    Ok(f)
}

struct Parser<'a> {
    src: &'a str,
    tokens: Vec<ExprToken<'a>>,
    pos: usize,
    depth: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&ExprToken<'a>> {
        self.tokens.get(self.pos)
    }

    fn peek_kind(&self) -> Option<TokenKind> {
        self.peek().map(|t| t.kind)
    }

    fn bump(&mut self) -> Option<ExprToken<'a>> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn eof_error(&self, what: &str) -> SourceError {
        let pos = self.src.len().saturating_sub(1);
        SourceError::new(pos, format!("unexpected end of input, expected {what}"))
    }

    fn expect_factor_start(&self) -> Result<(), SourceError> {
        match self.peek() {
            None => Err(self.eof_error("a factor")),
            Some(t) if starts_factor(t.kind) => Ok(()),
            Some(t) => Err(SourceError::new(t.pos, format!("expected a factor, found '{}'", t.text))),
        }
    }

    fn expr(&mut self) -> Result<QPolynomial, SourceError> {
        let mut acc = self.term()?;
        while let Some(kind) = self.peek_kind() {
            match kind {
                TokenKind::Plus => {
                    self.bump();
                    acc = acc + self.term()?;
                }
                TokenKind::Minus => {
                    self.bump();
                    acc = acc - self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<QPolynomial, SourceError> {
        let negate = if self.peek_kind() == Some(TokenKind::Minus) {
            self.bump();
            true
        } else {
            false
        };
        self.expect_factor_start()?;
        let start = self.peek().map(|t| t.pos).unwrap_or(0);
        let mut acc = self.factor()?;
        loop {
            match self.peek_kind() {
                Some(TokenKind::Times) => {
                    self.bump();
                    self.expect_factor_start()?;
                }
                Some(kind) if starts_factor(kind) => {}
                _ => break,
            }
            let at = self.peek().map(|t| t.pos).unwrap_or(start);
            let rhs = self.factor()?;
            check_degree(acc.degree().max(0) + rhs.degree().max(0), at)?;
            acc = normal_mul(&acc, &rhs);
        }
        Ok(if negate { -acc } else { acc })
    }

    fn factor(&mut self) -> Result<QPolynomial, SourceError> {
        let base_pos = self.peek().map(|t| t.pos).unwrap_or(0);
        let base = self.atom()?;
        if self.peek_kind() != Some(TokenKind::Caret) {
            return Ok(base);
        }
        let caret = self.bump().expect("caret present");
        let negative = if self.peek_kind() == Some(TokenKind::Minus) {
            self.bump();
            true
        } else {
            false
        };
        let tok = match self.bump() {
            Some(t) if t.kind == TokenKind::Number && t.text.bytes().all(|b| b.is_ascii_digit()) => t,
            Some(t) => return Err(SourceError::new(t.pos, "exponent must be an integer")),
            None => return Err(self.eof_error("an integer exponent")),
        };
        let e: i64 = tok
            .text
            .parse::<u32>()
            .map_err(|_| SourceError::new(tok.pos, "exponent too large"))?
            .into();
        let e = if negative { -e } else { e };
        power(&base, e, base_pos, caret.pos)
    }

    fn atom(&mut self) -> Result<QPolynomial, SourceError> {
        let tok = match self.bump() {
            Some(t) => t,
            None => return Err(self.eof_error("a factor")),
        };
        match tok.kind {
            TokenKind::IdentX => {
                if self.peek_kind() == Some(TokenKind::Star) {
                    self.bump();
                    Ok(QPolynomial::x_star())
                } else {
                    Ok(QPolynomial::x())
                }
            }
            TokenKind::IdentQ => Ok(QPolynomial::constant(Scalar::q_pow(1))),
            TokenKind::IdentS => Ok(QPolynomial::constant(Scalar::s_pow(1))),
            TokenKind::IdentI => Ok(QPolynomial::constant(Scalar::i())),
            TokenKind::Number => Ok(QPolynomial::constant(Scalar::from_rational(parse_number(&tok)?))),
            TokenKind::LParen => {
                if self.depth >= MAX_DEPTH {
                    return Err(SourceError::new(tok.pos, "parentheses nested too deeply"));
                }
                self.depth += 1;
                let inner = self.expr()?;
                self.depth -= 1;
                match self.bump() {
                    Some(t) if t.kind == TokenKind::RParen => Ok(inner),
                    Some(t) => Err(SourceError::new(t.pos, format!("expected ')', found '{}'", t.text))),
                    None => Err(SourceError::new(tok.pos, "unbalanced '('")),
                }
            }
            TokenKind::RParen => Err(SourceError::new(tok.pos, "unbalanced ')'")),
            TokenKind::Star => Err(SourceError::new(tok.pos, "'*' must directly follow x")),
            _ => Err(SourceError::new(tok.pos, format!("expected a factor, found '{}'", tok.text))),
        }
    }
}

fn starts_factor(kind: TokenKind) -> bool {
    matches!(
        kind,
        TokenKind::IdentX
            | TokenKind::IdentQ
            | TokenKind::IdentS
            | TokenKind::IdentI
            | TokenKind::Number
            | TokenKind::LParen
    )
}

fn check_degree(d: i64, pos: usize) -> Result<(), SourceError> {
    if d > MAX_DEGREE {
        Err(SourceError::new(pos, format!("degree exceeds the limit of {MAX_DEGREE}")))
    } else {
        Ok(())
    }
}

fn power(base: &QPolynomial, e: i64, base_pos: usize, caret_pos: usize) -> Result<QPolynomial, SourceError> {
    let deg = base.degree();
    if deg > 0 {
        if e < 0 {
            return Err(SourceError::new(caret_pos, "negative exponent on a non-scalar factor"));
        }
        check_degree(deg.saturating_mul(e), caret_pos)?;
        return Ok(base.pow(e as u32));
    }
    // scalar base (possibly zero)
    let c = base.coeff(&crate::qalgebra::Monomial::ONE);
    if let Some((p, _)) = c.as_monomial() {
        if (p as i64).saturating_mul(e).abs() > MAX_S_POWER {
            return Err(SourceError::new(caret_pos, "exponent too large"));
        }
    } else {
        let span = (c.max_power().unwrap_or(0) - c.min_power().unwrap_or(0)) as i64;
        if e.abs() > MAX_SCALAR_EXPONENT || span.saturating_mul(e.abs()) > MAX_S_POWER / 64 {
            return Err(SourceError::new(caret_pos, "exponent too large"));
        }
    }
    match c.pow(e) {
        Some(v) => Ok(QPolynomial::constant(v)),
        None => Err(SourceError::new(base_pos, "negative exponent needs an invertible scalar base")),
    }
}

fn parse_number(tok: &ExprToken<'_>) -> Result<Rational, SourceError> {
    let bad = || SourceError::new(tok.pos, "malformed number");
    let int = |s: &str| s.parse::<BigInt>().map_err(|_| bad());
    if let Some((n, d)) = tok.text.split_once('/') {
        let d = int(d)?;
        if d.is_zero() {
            return Err(SourceError::new(tok.pos, "division by zero"));
        }
        return Ok(Rational::new(int(n)?, d));
    }
    if let Some((whole, frac)) = tok.text.split_once('.') {
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let num = int(whole)? * &den + int(frac)?;
        return Ok(Rational::new(num, den));
    }
    Ok(Rational::from_integer(int(tok.text)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qalgebra::{rat, Monomial};

    #[test]
    fn defining_relation_cancels() {
        assert!(parse("x x* - q x* x").unwrap().is_zero());
        assert!(parse("xx* - qx*x").unwrap().is_zero());
    }

    #[test]
    fn square_expansion() {
        let f = parse("(x + x*)^2").unwrap();
        let expected = QPolynomial::from_terms([
            (Monomial::new(0, 2), Scalar::one()),
            (Monomial::new(1, 1), Scalar::q_pow(1) + Scalar::one()),
            (Monomial::new(2, 0), Scalar::one()),
        ]);
        assert_eq!(f, expected);
        assert_eq!(parse("1").unwrap(), QPolynomial::one());
    }

    #[test]
    fn decimals_are_exact() {
        let f = parse("3.7").unwrap();
        assert_eq!(f, QPolynomial::constant(Scalar::from_rational(rat(37, 10))));
        assert_eq!(parse("0.8").unwrap(), parse("4/5").unwrap());
    }

    #[test]
    fn precedence_and_order() {
        let a = parse("x + x* * x").unwrap();
        let b = QPolynomial::x() + QPolynomial::monomial(1, 1);
        assert_eq!(a, b);
        // order matters: x x* != x* x
        assert_ne!(parse("x x*").unwrap(), parse("x* x").unwrap());
        assert_eq!(parse("2(x+x*)").unwrap(), parse("2x + 2x*").unwrap());
        assert_eq!(parse("-x^2").unwrap(), -QPolynomial::x().pow(2));
    }

    #[test]
    fn scalar_exponents() {
        assert_eq!(parse("q^-1").unwrap(), QPolynomial::constant(Scalar::q_pow(-1)));
        assert_eq!(parse("s^3 s^-1").unwrap(), parse("q").unwrap());
        assert_eq!(parse("(2 q)^-1").unwrap(), QPolynomial::constant(Scalar::from_rational(rat(1, 2)) * Scalar::q_pow(-1)));
        assert!(parse("(1+q)^-1").is_err());
    }

    #[test]
    fn errors_have_positions() {
        assert_eq!(parse("x^(2").unwrap_err().pos, 2);
        assert!(parse("x^2*").is_err());
        assert!(parse("x^-1").is_err());
        assert!(parse("x*^-2").is_err());
        assert!(parse("(x + 1").is_err());
        assert!(parse("x + 1)").is_err());
        assert!(parse("").is_err());
        assert!(parse("x +").is_err());
        assert!(parse("1/0").is_err());
        assert!(parse("x^1000").is_err());
        assert!(parse("q^99999999999").is_err());
        let deep = "(".repeat(300) + "1" + &")".repeat(300);
        assert!(parse(&deep).is_err());
        let ok = "(".repeat(100) + "1" + &")".repeat(100);
        assert_eq!(parse(&ok).unwrap(), QPolynomial::one());
    }
}
