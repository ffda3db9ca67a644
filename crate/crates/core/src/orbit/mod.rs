//! Orbit closures of torus translations: exact relation lattices, a sampling
//! oracle, floating resonance detection, and density scans over a base.

pub mod algebraic;
pub mod closure;
pub mod cover;
pub mod density;
pub mod group;
pub mod oracle;
pub mod relation;
pub mod resonance;

pub use algebraic::{likely_relation, AlgebraicVector, NamedConstant};
pub use closure::{orbit_closure, OrbitClosureDescriptor};
pub use density::{density_scan, DensityParams, DensityReport, RealizedPair, RefinedPoint, ScanPoint, StratumCoverage};
pub use group::{group_orbit_scan, GroupOrbitReport, GroupParams, StartSummary};
pub use oracle::{orbit_sample_oracle, torus_dist, OracleEstimate, ScaleEstimate};
pub use relation::{relation_lattice, RelationLattice};
pub use resonance::{resonance_brute_force, resonance_detect, ResonanceResult};

use thiserror::Error;

use crate::torus::TorusError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OrbitError {
    #[error("constant `{name}`: {reason}")]
    InvalidConstant { name: String, reason: String },
    #[error("unknown constant `{0}`")]
    UnknownConstant(String),
    #[error("expected {expected} entries, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("estimates disagree across scales: {fine:?} vs {coarse:?}")]
    InconclusiveAtScale { fine: ScaleEstimate, coarse: ScaleEstimate },
    #[error(transparent)]
    Torus(#[from] TorusError),
}
