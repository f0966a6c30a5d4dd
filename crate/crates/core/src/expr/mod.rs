//! Text front-end: `parse` and canonical `print` for q-polynomials.
//!
//! Juxtaposition multiplies (left to right, order preserved), `x*` is the
//! adjoint only when the star touches the `x`, `q` is `s²`, decimals are exact.

mod lexer;
mod parser;
mod print;

use std::fmt;

pub use lexer::{tokenize, ExprToken, TokenKind};
pub use parser::{parse, MAX_DEGREE, MAX_DEPTH};
pub use print::{print, print_monomial, print_scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct SourceError {
    pub pos: usize,
    pub message: String,
}

impl SourceError {
    pub fn new(pos: usize, message: impl Into<String>) -> Self {
        SourceError { pos, message: message.into() }
    }

    /// The source line with a caret under the offending byte.
    pub fn render(&self, src: &str) -> String {
        let col = src.char_indices().take_while(|(i, _)| *i < self.pos).count();
        format!("{src}\n{}^\nerror at offset {}: {}", " ".repeat(col), self.pos, self.message)
    }
}

impl fmt::Display for SourceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "offset {}: {}", self.pos, self.message)
    }
}
