//! Exact integer and rational linear algebra.

pub mod hnf;
pub mod lll;
pub mod matrix;
pub mod poly;

pub use hnf::{integer_kernel, is_saturated, lattice_basis, row_hnf_with_transform, saturate, smith_invariants};
pub use matrix::{dot, ints, make_primitive, normalize_sign, primitive_from_rational, IntMatrix, RatMatrix};
pub use poly::{characteristic_polynomial, cyclotomic, IntPoly, RatPoly};
