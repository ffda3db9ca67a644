//! Elliptic / parabolic / loxodromic classification of lattice isometries.
//!
//! Everything here is exact: the characteristic polynomial is split into
//! cyclotomic factors, finite order is detected through the squarefree
//! cyclotomic radical, and the dominant eigenvalue of a loxodromic isometry
//! is enclosed by Sturm-sequence bisection.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{LatticeError, LatticeIsometry};
use crate::exact::poly::{cyclotomic, cyclotomic_factorization, largest_real_root, RootEnclosure};
use crate::exact::{characteristic_polynomial, integer_kernel, make_primitive, normalize_sign, IntMatrix, IntPoly};

/// Width of the certified enclosure of the dynamical degree.
pub const LAMBDA_ENCLOSURE_WIDTH: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub enum IsometryClassification {
    Elliptic { order: u64 },
    Parabolic { isotropic_class: Vec<BigInt>, unipotent_power: u64 },
    Loxodromic { lambda: f64, enclosure: RootEnclosure },
}

impl IsometryClassification {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Elliptic { .. } => "elliptic",
            Self::Parabolic { .. } => "parabolic",
            Self::Loxodromic { .. } => "loxodromic",
        }
    }

    pub fn is_parabolic(&self) -> bool {
        matches!(self, Self::Parabolic { .. })
    }
}

pub fn classify_isometry(h: &LatticeIsometry) -> Result<IsometryClassification, LatticeError> {
    let m = h.matrix();
    let charpoly = characteristic_polynomial(m);
    let (factors, rest) = cyclotomic_factorization(&charpoly);

    if !rest.is_one() {
        require_hyperbolic(h)?;
        let enclosure = largest_real_root(&rest, &BigRational::one(), LAMBDA_ENCLOSURE_WIDTH).ok_or_else(|| {
            let (p, n) = h.lattice().signature();
            LatticeError::SignatureUnsupported { n_plus: p, n_minus: n }
        })?;
        return Ok(IsometryClassification::Loxodromic { lambda: enclosure.midpoint(), enclosure });
    }

    let period = factors.iter().fold(1u64, |acc, &(k, _)| acc.lcm(&k));
    let radical = factors.iter().fold(IntPoly::one(), |acc, &(k, _)| acc.mul(&cyclotomic(k)));
    if radical.eval_matrix(m).is_zero() {
        let order = smallest_power(period, |k| m.pow(k).is_identity()).expect("semisimple with root-of-unity spectrum");
        return Ok(IsometryClassification::Elliptic { order });
    }

    require_hyperbolic(h)?;
    let unipotent_power =
        smallest_power(period, |k| h.is_nilpotent_shift(k)).expect("all eigenvalues are roots of unity");
    let isotropic_class = fixed_isotropic_class(h, unipotent_power)?;
    Ok(IsometryClassification::Parabolic { isotropic_class, unipotent_power })
}

fn require_hyperbolic(h: &LatticeIsometry) -> Result<(), LatticeError> {
    let (p, n) = h.lattice().signature();
    if p != 1 {
        return Err(LatticeError::SignatureUnsupported { n_plus: p, n_minus: n });
    }
    Ok(())
}

fn smallest_power(bound: u64, pred: impl Fn(u64) -> bool) -> Option<u64> {
    (1..=bound).find(|&k| pred(k))
}

/// Generator of the image of `(U - I)²` for the unipotent power `U`: the
/// invariant isotropic line of a parabolic isometry.
fn fixed_isotropic_class(h: &LatticeIsometry, power: u64) -> Result<Vec<BigInt>, LatticeError> {
    let n = h.rank();
    let shift = h.matrix().pow(power).minus_identity();
    let sq = shift.mul(&shift);
    let column = (0..n).map(|j| sq.column(j)).find(|c| c.iter().any(|x| !x.is_zero()));
    let Some(column) = column else {
        let (p, q) = h.lattice().signature();
        return Err(LatticeError::SignatureUnsupported { n_plus: p, n_minus: q });
    };
    let ell = normalize_sign(make_primitive(column));
    debug_assert!(h.lattice().norm(&ell).is_zero());
    Ok(ell)
}

/// The primitive invariant isotropic class `ℓ`, first nonzero coordinate positive.
pub fn parabolic_invariant_class(h: &LatticeIsometry) -> Result<Vec<BigInt>, LatticeError> {
    match classify_isometry(h)? {
        IsometryClassification::Parabolic { isotropic_class, .. } => Ok(isotropic_class),
        _ => Err(LatticeError::NotParabolic),
    }
}

/// Splitting `V = E₁ ⊕ E_Q` of a parabolic isometry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JordanSplit {
    /// Rows span `E₁ = ker (h - I)^r`.
    #[serde(serialize_with = "crate::serde_util::int_matrix")]
    pub unipotent_part_basis: IntMatrix,
    /// Rows span `E_Q = ker Q(h)`.
    #[serde(serialize_with = "crate::serde_util::int_matrix")]
    pub compact_part_basis: IntMatrix,
    pub jordan_block_size: usize,
    /// Power of `h` the split was computed for (1 unless the eigenvalue-one
    /// part of `h` carries no Jordan block).
    pub power_used: u64,
    /// `h` acts as the identity on the orthogonal complement, inside `E₁`, of
    /// the three-dimensional Jordan block.
    pub identity_on_block_complement: bool,
}

pub fn jordan_split(h: &LatticeIsometry) -> Result<JordanSplit, LatticeError> {
    let IsometryClassification::Parabolic { unipotent_power, .. } = classify_isometry(h)? else {
        return Err(LatticeError::NotParabolic);
    };
    let direct = split_for(h, 1);
    if direct.jordan_block_size >= 3 {
        return Ok(direct);
    }
    Ok(split_for(&h.pow(unipotent_power), unipotent_power))
}

fn split_for(h: &LatticeIsometry, power_used: u64) -> JordanSplit {
    let m = h.matrix();
    let n = h.rank();
    let charpoly = characteristic_polynomial(m);
    let (r, q) = charpoly.multiplicity(&IntPoly::x_minus_one());
    let shift = m.minus_identity();
    let e1 = integer_kernel(&shift.pow(r as u64));
    let eq = integer_kernel(&q.eval_matrix(m));
    debug_assert_eq!(e1.rows() + eq.rows(), n);
    debug_assert!(h.lattice().restrict_between(&e1, &eq).is_zero());

    let mut block = 0;
    if e1.rows() > 0 {
        let mut power = IntMatrix::identity(n);
        loop {
            if e1.row_vecs().iter().all(|v| power.mul_vec(v).iter().all(Zero::is_zero)) {
                break;
            }
            power = power.mul(&shift);
            block += 1;
        }
    }

    let identity_on_block_complement = block == 3 && {
        let v = e1
            .row_vecs()
            .into_iter()
            .find(|v| shift.mul(&shift).mul_vec(v).iter().any(|x| !x.is_zero()))
            .expect("block of size three");
        let v1 = shift.mul_vec(&v);
        let v2 = shift.mul_vec(&v1);
        let w = IntMatrix::from_rows(vec![v, v1, v2]);
        let nondegenerate = !h.lattice().restrict(&w).det().is_zero();
        // x = E₁ᵀ y with B(w_i, x) = 0
        let constraints = w.mul(h.lattice().gram()).mul(&e1.transpose());
        let ys = integer_kernel(&constraints);
        nondegenerate
            && ys.row_vecs().iter().all(|y| {
                let x = e1.transpose().mul_vec(y);
                h.fixes(&x)
            })
    };

    JordanSplit {
        unipotent_part_basis: e1,
        compact_part_basis: eq,
        jordan_block_size: block,
        power_used,
        identity_on_block_complement,
    }
}

impl super::GramLattice {
    /// Matrix of pairings `B(a_i, b_j)` between two families of row vectors.
    pub fn restrict_between(&self, a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
        if a.rows() == 0 || b.rows() == 0 {
            return IntMatrix::zeros(a.rows(), b.rows());
        }
        a.mul(self.gram()).mul(&b.transpose())
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::exact::ints;
    use crate::lattice::{verify_isometry, GramLattice};

    fn m_par() -> LatticeIsometry {
        let g = IntMatrix::from_i64_rows(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, -2]]);
        let m = IntMatrix::from_i64_rows(&[vec![1, 1, 2], vec![0, 1, 0], vec![0, 1, 1]]);
        verify_isometry(Arc::new(GramLattice::new(g).unwrap()), m).unwrap()
    }

    fn pell() -> LatticeIsometry {
        let m = IntMatrix::from_i64_rows(&[vec![3, 4], vec![2, 3]]);
        verify_isometry(Arc::new(GramLattice::diagonal(&[1, -2]).unwrap()), m).unwrap()
    }

    #[test]
    fn m_par_shift_is_nilpotent_of_order_three() {
        let s = m_par().matrix().minus_identity();
        assert!(!s.mul(&s).is_zero());
        assert!(s.mul(&s).mul(&s).is_zero());
    }

    #[test]
    fn identity_is_elliptic_of_order_one() {
        let lat = Arc::new(GramLattice::diagonal(&[1, 1, 1, -1]).unwrap());
        let c = classify_isometry(&LatticeIsometry::identity(lat)).unwrap();
        assert_eq!(c, IsometryClassification::Elliptic { order: 1 });
    }

    #[test]
    fn reflection_is_elliptic_of_order_two() {
        let lat = Arc::new(GramLattice::diagonal(&[1, -2]).unwrap());
        let r = verify_isometry(lat, IntMatrix::diagonal(&[1, -1])).unwrap();
        assert_eq!(classify_isometry(&r).unwrap(), IsometryClassification::Elliptic { order: 2 });
    }

    #[test]
    fn pell_is_loxodromic() {
        let IsometryClassification::Loxodromic { lambda, enclosure } = classify_isometry(&pell()).unwrap() else {
            panic!("expected loxodromic");
        };
        let exact = 3.0 + 2.0 * 2f64.sqrt();
        assert!((lambda - exact).abs() < 1e-11);
        assert!(enclosure.width() <= LAMBDA_ENCLOSURE_WIDTH);
        assert!((lambda - 5.8284).abs() < 1e-4);
    }

    #[test]
    fn m_par_is_parabolic() {
        let c = classify_isometry(&m_par()).unwrap();
        assert_eq!(c, IsometryClassification::Parabolic { isotropic_class: ints(&[1, 0, 0]), unipotent_power: 1 });
    }

    #[test]
    fn invariant_class_errors() {
        assert_eq!(parabolic_invariant_class(&m_par()).unwrap(), ints(&[1, 0, 0]));
        let lat = m_par().lattice().clone();
        assert_eq!(parabolic_invariant_class(&LatticeIsometry::identity(lat)), Err(LatticeError::NotParabolic));
        assert_eq!(parabolic_invariant_class(&pell()), Err(LatticeError::NotParabolic));
    }

    #[test]
    fn negated_parabolic_needs_a_power() {
        // -M_par has eigenvalue -1 with a Jordan block; its square is unipotent
        let h = m_par();
        let neg = verify_isometry(h.lattice().clone(), h.matrix().scale(&BigInt::from(-1))).unwrap();
        let c = classify_isometry(&neg).unwrap();
        assert!(matches!(c, IsometryClassification::Parabolic { unipotent_power: 2, .. }));
        let split = jordan_split(&neg).unwrap();
        assert_eq!(split.power_used, 2);
        assert_eq!(split.jordan_block_size, 3);
    }

    #[test]
    fn classification_survives_inversion() {
        assert!(classify_isometry(&m_par().inverse()).unwrap().is_parabolic());
        let IsometryClassification::Loxodromic { lambda, .. } = classify_isometry(&pell().inverse()).unwrap() else {
            panic!()
        };
        assert!((lambda - (3.0 + 2.0 * 2f64.sqrt())).abs() < 1e-11);
    }

    #[test]
    fn jordan_split_of_m_par() {
        let s = jordan_split(&m_par()).unwrap();
        assert_eq!(s.unipotent_part_basis.rows(), 3);
        assert_eq!(s.compact_part_basis.rows(), 0);
        assert_eq!(s.jordan_block_size, 3);
        assert!(s.identity_on_block_complement);
    }

    #[test]
    fn jordan_split_with_identity_summand() {
        let minus_two = Arc::new(GramLattice::diagonal(&[-2]).unwrap());
        let h = m_par().direct_sum(&LatticeIsometry::identity(minus_two));
        let s = jordan_split(&h).unwrap();
        assert_eq!(s.unipotent_part_basis.rows(), 4);
        assert_eq!(s.jordan_block_size, 3);
        assert!(s.identity_on_block_complement);
    }

    #[test]
    fn jordan_split_with_compact_summand() {
        let minus_two = Arc::new(GramLattice::diagonal(&[-2]).unwrap());
        let flip = verify_isometry(minus_two, IntMatrix::diagonal(&[-1])).unwrap();
        let s = jordan_split(&m_par().direct_sum(&flip)).unwrap();
        assert_eq!(s.unipotent_part_basis.rows(), 3);
        assert_eq!(s.compact_part_basis, IntMatrix::from_i64_rows(&[vec![0, 0, 0, 1]]));
    }

    #[test]
    fn jordan_split_rejects_elliptic() {
        let lat = m_par().lattice().clone();
        assert_eq!(jordan_split(&LatticeIsometry::identity(lat)), Err(LatticeError::NotParabolic));
    }
}
