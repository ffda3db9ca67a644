//! Integral quadratic lattices, their isometries, and growth of iterates.

pub mod classify;
pub mod gram;
pub mod growth;
pub mod isometry;
pub mod period;
pub mod sublattice;
pub mod sympow;

pub use classify::{classify_isometry, jordan_split, parabolic_invariant_class, IsometryClassification, JordanSplit};
pub use gram::{inertia, GramLattice, Inertia};
pub use growth::{
    concavity_check, default_schedule, growth_exponent, growth_spectrum, ConcavityReport, GrowthFit, GrowthMode,
    GrowthOptions, GrowthSample, GrowthSpectrum, SpectrumEntry,
};
pub use isometry::{verify_isometry, LatticeIsometry};
pub use period::{parameter_search, projectivity_parameter, ComplexRational, ParameterHit, PeriodPoint, ProjectivityParameter};
pub use sublattice::{ns_trichotomy, transcendental_complement, SublatticeType};
pub use sympow::{induced_form, monomials, sym_power};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("Gram matrix is not symmetric")]
    NotSymmetric,
    #[error("Gram matrix is degenerate")]
    Degenerate,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix does not preserve the form")]
    NotAnIsometry,
    #[error("matrix is not unimodular (det = {det})")]
    NotUnimodular { det: String },
    #[error("signature ({n_plus}, {n_minus}) is not supported here")]
    SignatureUnsupported { n_plus: usize, n_minus: usize },
    #[error("isometry is not parabolic")]
    NotParabolic,
    #[error("schedule must have at least two strictly increasing positive entries")]
    InvalidSchedule,
    #[error("exact power at n = {n} exceeds {max_bits} bits and float fallback is off")]
    Overflow { n: u64, max_bits: u64 },
    #[error("need at least three spectrum entries, found {found}")]
    InsufficientEntries { found: usize },
    #[error("basis vectors are linearly dependent")]
    DependentBasis,
    #[error("restricted form has inertia (+{positive}, -{negative}, 0:{zero}), outside the three admissible types")]
    OutsideTrichotomy { positive: usize, negative: usize, zero: usize },
    #[error("class is orthogonal to h (q(a, sigma) = {q_a_sigma}, always of type (1,1): {always_type_11})")]
    OrthogonalToH { always_type_11: bool, q_a_sigma: String },
    #[error("invalid period point: {0}")]
    InvalidPeriod(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
