//! Toolkit for the quantum complex plane A(q).
//!
//! - [`qalgebra`]: exact normal-form arithmetic over Laurent polynomials in √q
//! - [`expr`]: text front-end (parser and canonical printer)
//! - [`sos`]: Gram-matrix sum-of-squares search, extraction, verification and refutation
//! - [`opmodel`]: truncated weighted-shift models, positivity probes and moment sequences

pub mod expr;
pub mod linalg;
pub mod opmodel;
pub mod qalgebra;
pub mod sos;

pub use expr::{parse, print, SourceError};
pub use qalgebra::{Monomial, QPolynomial, Rational, Scalar};
