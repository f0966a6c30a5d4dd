use super::SourceError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TokenKind {
    IdentX,
    /// The involution star, written directly after `x`.
    Star,
    IdentQ,
    IdentS,
    /// Imaginary unit `i`.
    IdentI,
    Number,
    Plus,
    Minus,
    /// Explicit multiplication `*`.
    Times,
    Caret,
    LParen,
    RParen,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExprToken<'a> {
    pub kind: TokenKind,
    pub text: &'a str,
    pub pos: usize,
}

pub fn tokenize(src: &str) -> Result<Vec<ExprToken<'_>>, SourceError> {
    let bytes = src.as_bytes();
    let mut out: Vec<ExprToken<'_>> = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let single = |kind| ExprToken { kind, text: &src[i..i + 1], pos: i };
        let tok = match c {
            b'x' => single(TokenKind::IdentX),
            b'q' => single(TokenKind::IdentQ),
            b's' => single(TokenKind::IdentS),
            b'i' => single(TokenKind::IdentI),
            b'+' => single(TokenKind::Plus),
            b'-' => single(TokenKind::Minus),
            b'^' => single(TokenKind::Caret),
            b'(' => single(TokenKind::LParen),
            b')' => single(TokenKind::RParen),
            b'*' => {
                let glued = i > 0
                    && bytes[i - 1] == b'x'
                    && out.last().is_some_and(|t| t.kind == TokenKind::IdentX && t.pos == i - 1);
                single(if glued { TokenKind::Star } else { TokenKind::Times })
            }
            b'0'..=b'9' | b'.' => {
                let end = scan_number(src, i)?;
                let tok = ExprToken { kind: TokenKind::Number, text: &src[i..end], pos: i };
                out.push(tok);
                i = end;
                continue;
            }
            _ => {
                let ch = src[i..].chars().next().unwrap_or('?');
                return Err(SourceError::new(i, format!("unexpected character '{ch}'")));
            }
        };
        out.push(tok);
        i += 1;
    }
    Ok(out)
}

/// Accepts `123`, `1.25`, `3/4`; rejects `.5`, `1.`, `1/`, `1.2.3`.
fn scan_number(src: &str, start: usize) -> Result<usize, SourceError> {
    let bytes = src.as_bytes();
    let digits = |mut j: usize| {
        while j < bytes.len() && bytes[j].is_ascii_digit() {
            j += 1;
        }
        j
    };
    let mut j = digits(start);
    if j == start {
        return Err(SourceError::new(start, "malformed number"));
    }
    match bytes.get(j) {
        Some(b'.') => {
            let k = digits(j + 1);
            if k == j + 1 {
                return Err(SourceError::new(j, "malformed number: digits expected after '.'"));
            }
            j = k;
            if matches!(bytes.get(j), Some(b'.') | Some(b'/')) {
                return Err(SourceError::new(j, "malformed number"));
            }
        }
        Some(b'/') => {
            let k = digits(j + 1);
            if k == j + 1 {
                return Err(SourceError::new(j, "malformed number: denominator expected after '/'"));
            }
            j = k;
            if matches!(bytes.get(j), Some(b'.') | Some(b'/')) {
                return Err(SourceError::new(j, "malformed number"));
            }
        }
        _ => {}
    }
    Ok(j)
}
