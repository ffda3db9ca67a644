use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{GramLattice, LatticeError};
use crate::exact::IntMatrix;

/// An integral matrix preserving the form of its lattice: `MᵀGM = G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeIsometry {
    lattice: Arc<GramLattice>,
    matrix: IntMatrix,
}

/// Checks `MᵀGM = G` and `|det M| = 1` and wraps the matrix.
pub fn verify_isometry(lattice: Arc<GramLattice>, matrix: IntMatrix) -> Result<LatticeIsometry, LatticeError> {
    let n = lattice.rank();
    if matrix.rows() != n || matrix.cols() != n {
        return Err(LatticeError::DimensionMismatch { expected: n, found: matrix.rows().max(matrix.cols()) });
    }
    if matrix.transpose().mul(lattice.gram()).mul(&matrix) != *lattice.gram() {
        return Err(LatticeError::NotAnIsometry);
    }
    let det = matrix.det();
    if !det.abs().is_one() {
        return Err(LatticeError::NotUnimodular { det: det.to_string() });
    }
    Ok(LatticeIsometry { lattice, matrix })
}

impl LatticeIsometry {
    pub fn lattice(&self) -> &Arc<GramLattice> {
        &self.lattice
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.matrix.rows()
    }

    pub fn identity(lattice: Arc<GramLattice>) -> Self {
        let n = lattice.rank();
        Self { lattice, matrix: IntMatrix::identity(n) }
    }

    pub fn pow(&self, n: u64) -> Self {
        Self { lattice: self.lattice.clone(), matrix: self.matrix.pow(n) }
    }

    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.lattice, other.lattice, "isometries of different lattices");
        Self { lattice: self.lattice.clone(), matrix: self.matrix.mul(&other.matrix) }
    }

    /// Inverse isometry, `M⁻¹ = G⁻¹ Mᵀ G`, computed exactly.
    pub fn inverse(&self) -> Self {
        let n = self.rank();
        let g = self.lattice.gram().to_rat();
        // solve G X = Mᵀ G
        let rhs = self.matrix.transpose().mul(self.lattice.gram()).to_rat();
        let mut aug = Vec::with_capacity(n * 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.push(g.get(i, j).clone());
            }
            for j in 0..n {
                aug.push(rhs.get(i, j).clone());
            }
        }
        let mut m = crate::exact::RatMatrix::new(n, 2 * n, aug);
        m.rref();
        let data: Vec<BigInt> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| {
                let v = m.get(i, n + j);
                assert!(v.is_integer(), "inverse of an integral isometry is integral");
                v.to_integer()
            })
            .collect();
        Self { lattice: self.lattice.clone(), matrix: IntMatrix::new(n, n, data) }
    }

    /// Block-diagonal sum `self ⊕ other` acting on the orthogonal sum lattice.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let lattice = Arc::new(self.lattice.direct_sum(&other.lattice));
        Self { lattice, matrix: self.matrix.direct_sum(&other.matrix) }
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.matrix.mul_vec(v)
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.is_identity()
    }

    pub(crate) fn fixes(&self, v: &[BigInt]) -> bool {
        self.apply(v).iter().zip(v).all(|(a, b)| a == b)
    }

    pub(crate) fn is_nilpotent_shift(&self, power: u64) -> bool {
        let n = self.rank() as u64;
        self.matrix.pow(power).minus_identity().pow(n).data().iter().all(Zero::is_zero)
    }
}
