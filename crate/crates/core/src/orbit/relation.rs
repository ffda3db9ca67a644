use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::AlgebraicVector;
use crate::exact::hnf::saturation_index;
use crate::exact::{integer_kernel, lattice_basis, saturate, IntMatrix};

/// `{m ∈ ℤ^n : ⟨m, t⟩ ∈ ℤ}` with its primitive closure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationLattice {
    #[serde(serialize_with = "crate::serde_util::int_matrix")]
    pub generators: IntMatrix,
    #[serde(serialize_with = "crate::serde_util::int_matrix")]
    pub saturation: IntMatrix,
    pub rank: usize,
}

impl RelationLattice {
    /// Build from any spanning set of relations (rows).
    pub fn from_relations(relations: &IntMatrix) -> Self {
        let generators = lattice_basis(relations);
        let saturation = saturate(&generators);
        let rank = generators.rows();
        Self { generators, saturation, rank }
    }

    pub fn dim(&self) -> usize {
        self.generators.cols()
    }

    /// Index of the generators in their saturation.
    pub fn index(&self) -> BigInt {
        if self.rank == 0 {
            BigInt::one()
        } else {
            saturation_index(&self.generators)
        }
    }
}

fn lcm_of_denominators<'a>(values: impl Iterator<Item = &'a BigRational>) -> BigInt {
    values.fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Integer kernel of the irrational coefficient rows, then the preimage of
/// ℤ under the rational part restricted to that kernel.
pub fn relation_lattice(t: &AlgebraicVector) -> RelationLattice {
    let n = t.dim();
    let irr = t.irrational_rows();
    let kernel = if irr.is_empty() {
        IntMatrix::identity(n)
    } else {
        // clear denominators row by row
        let rows: Vec<Vec<BigInt>> = irr
            .iter()
            .map(|row| {
                let l = lcm_of_denominators(row.iter());
                row.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect()
            })
            .collect();
        integer_kernel(&IntMatrix::from_rows(rows))
    };
    let r = kernel.rows();
    if r == 0 {
        return RelationLattice { generators: IntMatrix::zeros(0, n), saturation: IntMatrix::zeros(0, n), rank: 0 };
    }
    // a_l = ⟨K_l, rational part⟩, scaled by the common denominator L
    let rational = t.rational_part();
    let a: Vec<BigRational> = kernel
        .row_vecs()
        .iter()
        .map(|k| k.iter().zip(rational).map(|(ki, c)| BigRational::from_integer(ki.clone()) * c).sum())
        .collect();
    let l = lcm_of_denominators(a.iter());
    let lr = BigRational::from_integer(l.clone());
    let mut row: Vec<BigInt> = a.iter().map(|x| (x * &lr).to_integer()).collect();
    row.push(l);
    // kernel of [A | L] projected to the first r coordinates: Σ y_l A_l ≡ 0 mod L
    let ys = integer_kernel(&IntMatrix::from_rows(vec![row]));
    let y_rows: Vec<Vec<BigInt>> = ys.row_vecs().into_iter().map(|mut v| {
        v.pop();
        v
    }).collect();
    let y = lattice_basis(&IntMatrix::from_rows(y_rows));
    let generators = lattice_basis(&y.mul(&kernel));
    RelationLattice { rank: generators.rows(), saturation: kernel, generators }
}

/// `⟨m, t⟩` for `m` in the irrational kernel (exactly rational).
pub(crate) fn rational_pairing(t: &AlgebraicVector, m: &[BigInt]) -> BigRational {
    debug_assert!(t
        .irrational_rows()
        .iter()
        .all(|row| row.iter().zip(m).map(|(c, x)| c * BigRational::from_integer(x.clone())).sum::<BigRational>().is_zero()));
    m.iter().zip(t.rational_part()).map(|(x, c)| BigRational::from_integer(x.clone()) * c).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ints;
    use crate::orbit::NamedConstant;
    use num_traits::Signed;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn zero_vector_relates_everything() {
        let t = AlgebraicVector::rational(vec![r(0, 1), r(0, 1)]).unwrap();
        let rl = relation_lattice(&t);
        assert_eq!(rl.generators, IntMatrix::identity(2));
        assert_eq!(rl.rank, 2);
    }

    #[test]
    fn irrational_and_half() {
        let s2 = NamedConstant::builtin("sqrt2").unwrap();
        let t = AlgebraicVector::new(vec![s2], vec![vec![r(0, 1), r(1, 2)], vec![r(1, 1), r(0, 1)]]).unwrap();
        let rl = relation_lattice(&t);
        assert_eq!(rl.generators, IntMatrix::from_i64_rows(&[vec![0, 2]]));
        assert_eq!(rl.saturation, IntMatrix::from_i64_rows(&[vec![0, 1]]));
        assert_eq!(rl.rank, 1);
        assert_eq!(rl.index(), BigInt::from(2));
        assert_eq!(rational_pairing(&t, &ints(&[0, 1])), r(1, 2));
    }

    #[test]
    fn half_third_has_index_six() {
        let t = AlgebraicVector::rational(vec![r(1, 2), r(1, 3)]).unwrap();
        let rl = relation_lattice(&t);
        assert_eq!(rl.rank, 2);
        assert_eq!(rl.generators.det().abs(), BigInt::from(6));
        // brute force over |m| <= 6
        for a in -6i64..=6 {
            for b in -6i64..=6 {
                let is_rel = (3 * a + 2 * b) % 6 == 0;
                let v = ints(&[a, b]);
                let mut rows = rl.generators.row_vecs();
                rows.push(v);
                let in_lattice = lattice_basis(&IntMatrix::from_rows(rows)) == rl.generators;
                assert_eq!(is_rel, in_lattice, "{a} {b}");
            }
        }
    }
}
