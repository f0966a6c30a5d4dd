//! Exact arithmetic in A(q) = ⟨x, x* | xx* = q x*x⟩.

pub mod json;
pub mod numeric;
pub mod poly;
pub mod scalar;
pub mod symbol;

pub use numeric::NumericPoly;
pub use poly::{cexp, cexp_radial, from_radial, involution, normal_mul, to_radial, Monomial, QPolynomial, RadialTerm};
pub use scalar::{rat, rat_int, scalar_eval, GaussRational, Rational, Scalar};
pub use symbol::{symbol, symbol_min, symbol_with, SymbolConvention, SymbolSeries};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("top degree {0} is odd")]
    OddDegree(i64),
    #[error("polynomial is not Hermitian")]
    NotHermitian,
    #[error("zero polynomial has no symbol")]
    ZeroPolynomial,
    #[error("{0}")]
    InvalidArgument(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}
