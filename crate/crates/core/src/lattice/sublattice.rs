use num_bigint::BigInt;
use serde::Serialize;

use super::gram::{inertia, rows_rank};
use super::{GramLattice, LatticeError};
use crate::exact::{integer_kernel, make_primitive, normalize_sign, IntMatrix};

/// Type of the form restricted to a Néron–Severi-like sublattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SublatticeType {
    /// Non-degenerate of signature `(1, k-1)`.
    Hyperbolic,
    /// Degenerate with a one-dimensional kernel and non-positive values.
    ParabolicDegenerate {
        #[serde(serialize_with = "crate::serde_util::int_vec")]
        kernel: Vec<BigInt>,
    },
    NegativeDefinite,
}

fn check_basis(lattice: &GramLattice, basis: &IntMatrix) -> Result<(), LatticeError> {
    if basis.rows() > 0 {
        lattice.check_dim(basis.cols())?;
    }
    if rows_rank(basis) < basis.rows() {
        return Err(LatticeError::DependentBasis);
    }
    Ok(())
}

pub fn ns_trichotomy(lattice: &GramLattice, basis: &IntMatrix) -> Result<SublatticeType, LatticeError> {
    check_basis(lattice, basis)?;
    let k = basis.rows();
    if k == 0 {
        return Err(LatticeError::InvalidInput("empty sublattice basis".into()));
    }
    let restricted = lattice.restrict(basis);
    let inr = inertia(&restricted);
    let outside = || LatticeError::OutsideTrichotomy {
        positive: inr.positive,
        negative: inr.negative,
        zero: inr.zero,
    };
    match (inr.positive, inr.zero) {
        (1, 0) => Ok(SublatticeType::Hyperbolic),
        (0, 0) => Ok(SublatticeType::NegativeDefinite),
        (0, 1) => {
            let coeffs = integer_kernel(&restricted);
            let c = coeffs.row(0).to_vec();
            let v = basis.transpose().mul_vec(&c);
            Ok(SublatticeType::ParabolicDegenerate { kernel: normalize_sign(make_primitive(v)) })
        }
        _ => Err(outside()),
    }
}

/// Saturated orthogonal complement `{x : B(x, v) = 0 for all v in basis}`,
/// returned as rows in Hermite normal form.
pub fn transcendental_complement(lattice: &GramLattice, ns_basis: &IntMatrix) -> Result<IntMatrix, LatticeError> {
    check_basis(lattice, ns_basis)?;
    if ns_basis.rows() == 0 {
        return Ok(IntMatrix::identity(lattice.rank()));
    }
    Ok(integer_kernel(&ns_basis.mul(lattice.gram())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{ints, is_saturated};

    fn k3ish() -> GramLattice {
        GramLattice::diagonal(&[1, 1, 1, -1]).unwrap()
    }

    #[test]
    fn isotropic_line_is_parabolic() {
        let b = IntMatrix::from_i64_rows(&[vec![0, 0, 1, 1]]);
        assert_eq!(
            ns_trichotomy(&k3ish(), &b).unwrap(),
            SublatticeType::ParabolicDegenerate { kernel: ints(&[0, 0, 1, 1]) }
        );
    }

    #[test]
    fn positive_and_negative_lines() {
        let pos = IntMatrix::from_i64_rows(&[vec![1, 0, 0, 0]]);
        assert_eq!(ns_trichotomy(&k3ish(), &pos).unwrap(), SublatticeType::Hyperbolic);
        let neg = IntMatrix::from_i64_rows(&[vec![0, 0, 0, 1]]);
        assert_eq!(ns_trichotomy(&k3ish(), &neg).unwrap(), SublatticeType::NegativeDefinite);
    }

    #[test]
    fn parabolic_plane_with_negative_part() {
        // radical plus a positive vector: not one of the three cases
        let b = IntMatrix::from_i64_rows(&[vec![0, 0, 1, 1], vec![1, 1, 0, 0]]);
        assert!(matches!(ns_trichotomy(&k3ish(), &b), Err(LatticeError::OutsideTrichotomy { .. })));
        let lat = GramLattice::diagonal(&[1, -1, -1]).unwrap();
        let b = IntMatrix::from_i64_rows(&[vec![1, 1, 0], vec![0, 0, 1]]);
        assert_eq!(
            ns_trichotomy(&lat, &b).unwrap(),
            SublatticeType::ParabolicDegenerate { kernel: ints(&[1, 1, 0]) }
        );
    }

    #[test]
    fn dependent_basis_rejected() {
        let b = IntMatrix::from_i64_rows(&[vec![1, 0, 0, 0], vec![2, 0, 0, 0]]);
        assert_eq!(ns_trichotomy(&k3ish(), &b), Err(LatticeError::DependentBasis));
        assert_eq!(transcendental_complement(&k3ish(), &b), Err(LatticeError::DependentBasis));
    }

    #[test]
    fn complement_of_isotropic_line() {
        let b = IntMatrix::from_i64_rows(&[vec![0, 0, 1, 1]]);
        let t = transcendental_complement(&k3ish(), &b).unwrap();
        assert_eq!(t, IntMatrix::from_i64_rows(&[vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 1]]));
        assert!(is_saturated(&t));
    }

    #[test]
    fn complement_in_pell_lattice_and_empty_basis() {
        let lat = GramLattice::diagonal(&[1, -2]).unwrap();
        let t = transcendental_complement(&lat, &IntMatrix::from_i64_rows(&[vec![1, 0]])).unwrap();
        assert_eq!(t, IntMatrix::from_i64_rows(&[vec![0, 1]]));
        let full = transcendental_complement(&lat, &IntMatrix::zeros(0, 2)).unwrap();
        assert_eq!(full, IntMatrix::identity(2));
    }

    #[test]
    fn complement_is_saturated_when_form_is_not_unimodular() {
        // B((1,1,0), x) = 2 x0 - 3 x1 forces a non-obvious kernel basis
        let lat = GramLattice::diagonal(&[2, -3, 5]).unwrap();
        let t = transcendental_complement(&lat, &IntMatrix::from_i64_rows(&[vec![1, 1, 0]])).unwrap();
        assert_eq!(t.rows(), 2);
        assert!(is_saturated(&t));
        for row in t.row_vecs() {
            assert_eq!(lat.pair(&row, &ints(&[1, 1, 0])), BigInt::from(0));
        }
    }
}
