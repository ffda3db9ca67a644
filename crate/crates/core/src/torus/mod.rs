//! Families of complex tori `ℂ^g/(ℤ^g + Τ(u)ℤ^g)` over a box in `ℂ^g`,
//! their Betti charts, and translation fields.

pub mod chart;
pub mod examples;
pub mod family;
pub mod field;
pub mod random;
pub mod sampling;

pub use chart::{betti_coordinates, fiber_translate, BettiChart};
pub use family::{BaseDomain, PeriodFamily, PeriodMatrix};
pub use field::{
    betti_jacobian, generic_rank, intertwining_defect, numerical_rank, translation_vector, FieldSource, GenericRank,
    HolomorphicSection, TranslationField, DEFAULT_FD_FRACTION, DEFAULT_RANK_TOL,
};
pub use random::random_holomorphic_field;
pub use sampling::QuasiRandom;

use thiserror::Error;

use crate::expr::ExprError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TorusError {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("expected {expected} entries, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid base domain: {0}")]
    InvalidDomain(String),
    #[error("expression `{0}` is not holomorphic")]
    NotHolomorphic(String),
    #[error("expression `{source_text}` uses u{needed} but g = {g}")]
    TooManyVariables { source_text: String, needed: usize, g: usize },
    #[error("base point {0:?} lies outside the domain")]
    OutOfDomain(Vec<f64>),
    #[error("period matrix is not symmetric at {0:?}")]
    NonSymmetricPeriod(Vec<f64>),
    #[error("Im Τ is singular or not positive definite at {point:?} (condition {condition})")]
    SingularPeriod { point: Vec<f64>, condition: f64 },
    #[error("non-finite value at {0:?}")]
    NonFinite(Vec<f64>),
    #[error("finite-difference stencil of width {step} leaves the domain at {point:?}")]
    StencilOutOfDomain { point: Vec<f64>, step: f64 },
    #[error("field is not induced by a holomorphic section")]
    NotHolomorphicInduced,
    #[error("basis change must be an integer matrix with determinant ±1")]
    InvalidBasisChange,
}
