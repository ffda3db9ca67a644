pub mod exact;
pub mod experiments;
pub mod expr;
pub mod lattice;
pub mod orbit;
pub mod serde_util;
pub mod torus;
pub mod volume;
