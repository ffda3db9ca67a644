use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::LatticeError;
use crate::exact::IntMatrix;

/// Inertia of a symmetric form: counts of positive, negative and zero squares.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

/// Sylvester inertia by symmetric Gaussian elimination over the rationals.
///
/// Each step either pivots on a nonzero diagonal entry (taking the Schur
/// complement) or, when the remaining diagonal vanishes, applies the
/// congruence `e_i -> e_i + e_j` to create the pivot `2 a_ij`.
pub fn inertia(form: &IntMatrix) -> Inertia {
    assert!(form.is_symmetric(), "inertia needs a symmetric matrix");
    let n = form.rows();
    let r = form.to_rat();
    let mut a: Vec<Vec<BigRational>> = (0..n).map(|i| (0..n).map(|j| r.get(i, j).clone()).collect()).collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut out = Inertia { positive: 0, negative: 0, zero: 0 };
    while !active.is_empty() {
        let diag = active.iter().copied().find(|&i| !a[i][i].is_zero());
        let pivot = match diag {
            Some(i) => i,
            None => {
                let pair = active
                    .iter()
                    .flat_map(|&i| active.iter().map(move |&j| (i, j)))
                    .find(|&(i, j)| i != j && !a[i][j].is_zero());
                let Some((i, j)) = pair else {
                    out.zero += active.len();
                    break;
                };
                for k in 0..n {
                    let v = a[j][k].clone();
                    a[i][k] += v;
                }
                for k in 0..n {
                    let v = a[k][j].clone();
                    a[k][i] += v;
                }
                i
            }
        };
        let p = a[pivot][pivot].clone();
        if p.is_positive() {
            out.positive += 1;
        } else {
            out.negative += 1;
        }
        active.retain(|&k| k != pivot);
        for &j in &active {
            let f = &a[j][pivot] / &p;
            if f.is_zero() {
                continue;
            }
            for &k in &active {
                let v = &f * &a[pivot][k];
                a[j][k] -= v;
            }
        }
    }
    out
}

/// An integral lattice `Z^rank` with a non-degenerate symmetric bilinear form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramLattice {
    gram: IntMatrix,
    signature: (usize, usize),
}

impl GramLattice {
    pub fn new(gram: IntMatrix) -> Result<Self, LatticeError> {
        if !gram.is_square() || gram.rows() == 0 {
            return Err(LatticeError::NotSquare { rows: gram.rows(), cols: gram.cols() });
        }
        if !gram.is_symmetric() {
            return Err(LatticeError::NotSymmetric);
        }
        if gram.det().is_zero() {
            return Err(LatticeError::Degenerate);
        }
        let inr = inertia(&gram);
        Ok(Self { signature: (inr.positive, inr.negative), gram })
    }

    pub fn diagonal(entries: &[i64]) -> Result<Self, LatticeError> {
        Self::new(IntMatrix::diagonal(entries))
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    /// `(n_plus, n_minus)`.
    pub fn signature(&self) -> (usize, usize) {
        self.signature
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.signature.0 == 1
    }

    pub fn pair(&self, x: &[BigInt], y: &[BigInt]) -> BigInt {
        let gy = self.gram.mul_vec(y);
        x.iter().zip(&gy).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self, x: &[BigInt]) -> BigInt {
        self.pair(x, x)
    }

    pub fn pair_rat(&self, x: &[BigRational], y: &[BigRational]) -> BigRational {
        let n = self.rank();
        let mut s = BigRational::zero();
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                let g = &self.gram[(i, j)];
                if !g.is_zero() && !y[j].is_zero() {
                    s += &x[i] * &y[j] * BigRational::from_integer(g.clone());
                }
            }
        }
        s
    }

    /// Gram matrix of the form restricted to the span of `basis` (rows).
    pub fn restrict(&self, basis: &IntMatrix) -> IntMatrix {
        basis.mul(&self.gram).mul(&basis.transpose())
    }

    /// Orthogonal direct sum with another lattice.
    pub fn direct_sum(&self, other: &GramLattice) -> GramLattice {
        GramLattice::new(self.gram.direct_sum(&other.gram)).expect("sum of non-degenerate forms")
    }

    pub fn check_dim(&self, len: usize) -> Result<(), LatticeError> {
        if len != self.rank() {
            return Err(LatticeError::DimensionMismatch { expected: self.rank(), found: len });
        }
        Ok(())
    }
}

/// Rank of a list of integer vectors (rows).
pub(crate) fn rows_rank(rows: &IntMatrix) -> usize {
    if rows.rows() == 0 {
        return 0;
    }
    rows.rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signature_of_hyperbolic_plane_plus_negative() {
        let g = IntMatrix::from_i64_rows(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, -2]]);
        let lat = GramLattice::new(g).unwrap();
        assert_eq!(lat.signature(), (1, 2));
    }

    #[test]
    fn signature_of_diagonal_forms() {
        assert_eq!(GramLattice::diagonal(&[1, -2]).unwrap().signature(), (1, 1));
        assert_eq!(GramLattice::diagonal(&[1, 1, 1, -1]).unwrap().signature(), (3, 1));
    }

    #[test]
    fn degenerate_and_asymmetric_rejected() {
        assert_eq!(GramLattice::diagonal(&[1, 0]).unwrap_err(), LatticeError::Degenerate);
        let g = IntMatrix::from_i64_rows(&[vec![1, 2], vec![3, 1]]);
        assert_eq!(GramLattice::new(g).unwrap_err(), LatticeError::NotSymmetric);
    }

    #[test]
    fn inertia_counts_radical() {
        let g = IntMatrix::from_i64_rows(&[vec![0, 0], vec![0, -3]]);
        assert_eq!(inertia(&g), Inertia { positive: 0, negative: 1, zero: 1 });
        let h = IntMatrix::from_i64_rows(&[vec![0, 2, 0], vec![2, 0, 0], vec![0, 0, 0]]);
        assert_eq!(inertia(&h), Inertia { positive: 1, negative: 1, zero: 1 });
    }
}
