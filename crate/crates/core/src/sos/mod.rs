//! Sums of squares in A(q) through Gram matrices.
//!
//! `f` is a sum of squares iff `f = w_N^* C w_N` for some `C ⪰ 0`, where `w_N`
//! lists the basis monomials of degree ≤ N. Searched certificates are
//! numerical; the dual certificates and the Eq.-style closed forms are exact.

pub mod certificate;
pub mod closed_form;
pub mod gram;
pub mod psatz;
pub mod radial;
pub mod refute;
pub mod search;

pub use certificate::{sos_extract, verify_sos, SosCertificate};
pub use closed_form::{quadratic_certificate, quartic_certificate};
pub use gram::{build_system, Constraint, GramEntry, GramSystem, MonomialVector};
pub use psatz::{enumerate_words, psatz_search, DenominatorWord, PsatzOutcome};
pub use radial::{sos_from_radial, RadialCertificate, RadialError};
pub use refute::{match_template, paper_refutation, verify_refutation, RefutationCertificate, Template};
pub use search::{sos_search, GramMatrix, SearchOutcome, SearchStats, Stage};

use crate::qalgebra::Monomial;

/// Tolerance at which searched certificates are re-verified.
pub const VERIFY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SosError {
    #[error("target is not Hermitian")]
    NotHermitian,
    #[error("target has odd degree {0}; its top part can never be a sum of squares")]
    OddDegree(i64),
    #[error("target monomials {0:?} cannot be produced by any Gram entry")]
    StructurallyInfeasible(Vec<Monomial>),
    #[error("matrix has size {found}, the system needs {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("{0}")]
    InvalidArgument(String),
}
