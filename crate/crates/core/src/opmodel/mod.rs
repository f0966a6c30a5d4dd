//! Irreducible q-normal operators as truncated weighted shifts.
//!
//! Every identity is checked only on interior basis vectors, where the
//! truncation at `e_{±K}` cannot be seen.

pub mod model;
pub mod moments;
pub mod probe;

pub use model::{eval_poly, polar_identity_check, qnormality_residual, regularity_gap, DeltaQ, InteriorSubspace, ShiftModel};
pub use moments::{
    moments_integral, moments_matrix, moments_via_models, vacuum_functional, DiscreteMeasure, MomentSequence, StateTable,
};
pub use probe::{positivity_probe, ProbeReport};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OpError {
    #[error("q must be positive and different from 1, got {0}")]
    InvalidQ(f64),
    #[error("lambda {lam} lies outside the fundamental domain ({lo}, {hi})")]
    LambdaOutsideDomain { lam: f64, lo: f64, hi: f64 },
    #[error("margin {margin} leaves no interior for K = {k}")]
    EmptyInterior { margin: usize, k: usize },
    #[error("degree {degree} is too large for K = {k}")]
    DegreeTooLarge { degree: i64, k: usize },
    #[error("state touches e_{k}, closer to the edge than margin {margin}")]
    SupportNearEdge { k: i64, margin: usize },
    #[error("polynomial is not Hermitian")]
    NotHermitian,
    #[error("the two evaluations of the vacuum functional differ by {gap:e}")]
    Disagreement { gap: f64 },
    #[error("{0}")]
    InvalidArgument(String),
}
