use std::sync::Arc;

use num_bigint::BigInt;
use paralab::exact::IntMatrix;
use paralab::lattice::{
    classify_isometry, induced_form, inertia, sym_power, verify_isometry, GramLattice, IsometryClassification,
    LatticeIsometry,
};
use proptest::prelude::*;

fn lattice() -> Arc<GramLattice> {
    Arc::new(GramLattice::new(IntMatrix::from_i64_rows(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, -2]])).unwrap())
}

/// Generators of a subgroup of `O(U ⊕ ⟨-2⟩)`: a parabolic element, the swap
/// of the hyperbolic plane, and the reflection in the last coordinate.
fn generators() -> Vec<IntMatrix> {
    vec![
        IntMatrix::from_i64_rows(&[vec![1, 1, 2], vec![0, 1, 0], vec![0, 1, 1]]),
        IntMatrix::from_i64_rows(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]]),
        IntMatrix::from_i64_rows(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, -1]]),
    ]
}

fn word(letters: &[(usize, bool)]) -> LatticeIsometry {
    let l = lattice();
    letters.iter().fold(LatticeIsometry::identity(l.clone()), |acc, &(i, inv)| {
        let g = verify_isometry(l.clone(), generators()[i].clone()).unwrap();
        acc.compose(&if inv { g.inverse() } else { g })
    })
}

fn small_matrix(n: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(-3i64..=3, n * n).prop_map(move |v| IntMatrix::from_i64_rows(&v.chunks(n).map(|c| c.to_vec()).collect::<Vec<_>>()))
}

fn kind(c: &IsometryClassification) -> &'static str {
    c.name()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sym_power_is_functorial(a in small_matrix(3), b in small_matrix(3), p in 1usize..=3) {
        prop_assert_eq!(sym_power(&a.mul(&b), p), sym_power(&a, p).mul(&sym_power(&b, p)));
    }

    #[test]
    fn sym_power_of_identity_is_identity(n in 1usize..=4, p in 0usize..=3) {
        prop_assert!(sym_power(&IntMatrix::identity(n), p).is_identity());
    }

    #[test]
    fn sym_power_preserves_induced_form(letters in prop::collection::vec((0usize..3, any::<bool>()), 0..6), p in 1usize..=3) {
        let h = word(&letters);
        let s = sym_power(h.matrix(), p);
        let q = induced_form(lattice().gram(), p);
        prop_assert_eq!(s.transpose().mul(&q).mul(&s), q);
    }

    #[test]
    fn words_are_isometries(letters in prop::collection::vec((0usize..3, any::<bool>()), 0..8)) {
        let h = word(&letters);
        let g = lattice().gram().clone();
        prop_assert_eq!(h.matrix().transpose().mul(&g).mul(h.matrix()), g);
        prop_assert!(h.compose(&h.inverse()).is_identity());
    }

    #[test]
    fn classification_is_invariant_under_inverse(letters in prop::collection::vec((0usize..3, any::<bool>()), 1..6)) {
        let h = word(&letters);
        let a = classify_isometry(&h).unwrap();
        let b = classify_isometry(&h.inverse()).unwrap();
        prop_assert_eq!(kind(&a), kind(&b));
        match (a, b) {
            (IsometryClassification::Parabolic { isotropic_class: x, .. }, IsometryClassification::Parabolic { isotropic_class: y, .. }) => {
                // same isotropic ray, up to sign
                let neg: Vec<BigInt> = y.iter().map(|v| -v).collect();
                prop_assert!(x == y || x == neg);
            }
            (IsometryClassification::Loxodromic { lambda: x, .. }, IsometryClassification::Loxodromic { lambda: y, .. }) => {
                prop_assert!((x - y).abs() <= 1e-9 * x);
            }
            (IsometryClassification::Elliptic { order: x }, IsometryClassification::Elliptic { order: y }) => prop_assert_eq!(x, y),
            _ => unreachable!(),
        }
    }

    #[test]
    fn classification_is_invariant_under_conjugation(
        letters in prop::collection::vec((0usize..3, any::<bool>()), 1..5),
        conj in prop::collection::vec((0usize..3, any::<bool>()), 0..4),
    ) {
        let h = word(&letters);
        let g = word(&conj);
        let c = g.compose(&h).compose(&g.inverse());
        prop_assert_eq!(kind(&classify_isometry(&h).unwrap()), kind(&classify_isometry(&c).unwrap()));
    }

    #[test]
    fn inertia_is_invariant_under_unimodular_change(e in prop::collection::vec(-4i64..=4, 3), k in -3i64..=3) {
        let d: Vec<i64> = e.iter().map(|&x| if x == 0 { 1 } else { x }).collect();
        let g = IntMatrix::diagonal(&d);
        let a = IntMatrix::from_i64_rows(&[vec![1, k, 0], vec![0, 1, k], vec![0, 0, 1]]);
        prop_assert_eq!(inertia(&a.transpose().mul(&g).mul(&a)), inertia(&g));
    }
}

#[test]
fn parabolic_powers_have_quadratic_entries() {
    // (M - I)³ = 0, so Mⁿ = I + nN + n(n-1)/2 N² entrywise.
    let m = generators()[0].clone();
    let n_mat = m.minus_identity();
    assert!(n_mat.pow(3).is_zero());
    for n in [1u64, 2, 7, 100] {
        let bn = BigInt::from(n);
        let c2 = BigInt::from(n * (n - 1) / 2);
        let expected = IntMatrix::identity(3).add(&n_mat.scale(&bn)).add(&n_mat.mul(&n_mat).scale(&c2));
        assert_eq!(m.pow(n), expected);
    }
}

#[test]
fn pell_isometry_is_loxodromic_with_the_fundamental_unit() {
    let l = Arc::new(GramLattice::diagonal(&[1, -2]).unwrap());
    let h = verify_isometry(l, IntMatrix::from_i64_rows(&[vec![3, 4], vec![2, 3]])).unwrap();
    match classify_isometry(&h).unwrap() {
        IsometryClassification::Loxodromic { lambda, .. } => assert!((lambda - (3.0 + 2.0 * 2f64.sqrt())).abs() < 1e-12),
        other => panic!("{other:?}"),
    }
}

#[test]
fn finite_order_words_are_elliptic() {
    let swap = word(&[(1, false)]);
    assert!(matches!(classify_isometry(&swap).unwrap(), IsometryClassification::Elliptic { order: 2 }));
    let sr = word(&[(1, false), (2, false)]);
    assert!(matches!(classify_isometry(&sr).unwrap(), IsometryClassification::Elliptic { order: 2 }));
}
