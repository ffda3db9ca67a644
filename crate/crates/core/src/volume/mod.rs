//! Volumes of iterated multisections in Betti coordinates, growth fits, and
//! multiplication by `D` on the fibers.

pub mod fit;
pub mod integrand;
pub mod multiplication;
pub mod quadrature;

pub use fit::{fit_growth, GrowthFit};
pub use integrand::{det_integral, pushforward_series, pushforward_volume, wedge_volume_integrand, Multisection, VolumeSeries};
pub use multiplication::{apply_multiplication, conjugacy_check, fiber_add, ConjugacyReport, FiberPoint, MultiplicationMap};
pub use quadrature::{gauss_legendre, QuadratureSpec};

use thiserror::Error;

use crate::expr::ExprError;
use crate::torus::TorusError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VolumeError {
    #[error(transparent)]
    Torus(#[from] TorusError),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("expected {expected} entries, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("quadrature did not reach relative error {target}: estimate {estimate}, error {error}")]
    QuadratureDidNotConverge { estimate: f64, error: f64, target: f64 },
    #[error("ill-conditioned fit: {0}")]
    IllConditionedFit(String),
    #[error("points lie over different base points")]
    BaseMismatch,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
