use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::Serialize;

use super::relation::{rational_pairing, relation_lattice};
use super::{AlgebraicVector, RelationLattice};
use crate::exact::{integer_kernel, IntMatrix};

/// Closure of `ℤ·t` in `ℝ^n/ℤ^n`: a closed subgroup of dimension `r` with
/// `c` connected components.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitClosureDescriptor {
    pub dimension: usize,
    #[serde(serialize_with = "crate::serde_util::display")]
    pub components: BigInt,
    /// Integer basis (rows) of the tangent lattice of the identity component.
    #[serde(serialize_with = "crate::serde_util::int_matrix")]
    pub subtorus_basis: IntMatrix,
}

impl OrbitClosureDescriptor {
    pub fn is_dense(&self) -> bool {
        self.dimension == self.subtorus_basis.cols()
    }
}

pub fn orbit_closure(t: &AlgebraicVector) -> OrbitClosureDescriptor {
    descriptor_from(t, &relation_lattice(t))
}

pub(crate) fn descriptor_from(t: &AlgebraicVector, rl: &RelationLattice) -> OrbitClosureDescriptor {
    let n = t.dim();
    let components = rl
        .saturation
        .row_vecs()
        .iter()
        .fold(BigInt::one(), |acc, m| acc.lcm(rational_pairing(t, m).denom()));
    let subtorus_basis = if rl.rank == 0 { IntMatrix::identity(n) } else { integer_kernel(&rl.saturation) };
    OrbitClosureDescriptor { dimension: n - rl.rank, components, subtorus_basis }
}
