use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use paralab::exact::IntMatrix;
use paralab::orbit::{
    orbit_closure, orbit_sample_oracle, relation_lattice, resonance_brute_force, resonance_detect, AlgebraicVector,
    NamedConstant, RelationLattice,
};
use proptest::prelude::*;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Rows: rational part, then one row per constant; columns are coordinates.
fn vector(names: &[&str], rows: Vec<Vec<BigRational>>) -> AlgebraicVector {
    let constants = names.iter().map(|n| NamedConstant::builtin(n).unwrap()).collect();
    AlgebraicVector::new(constants, rows).unwrap()
}

fn rc(t: &AlgebraicVector) -> (usize, BigInt) {
    let d = orbit_closure(t);
    (d.dimension, d.components)
}

fn coeff() -> impl Strategy<Value = BigRational> {
    (-6i64..=6, 1i64..=12).prop_map(|(n, d)| rat(n, d))
}

/// A vector in dimension 1..=3 over up to two constants.
fn algebraic() -> impl Strategy<Value = (Vec<&'static str>, Vec<Vec<BigRational>>)> {
    (1usize..=3, 0usize..=2).prop_flat_map(|(n, k)| {
        let names: Vec<&'static str> = ["sqrt2", "sqrt3"][..k].to_vec();
        prop::collection::vec(prop::collection::vec(coeff(), n), k + 1).prop_map(move |rows| (names.clone(), rows))
    })
}

/// Products of elementary matrices, so `det = ±1`.
fn unimodular(n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec((0..n, 0..n, -2i64..=2, any::<bool>()), 0..6).prop_map(move |ops| {
        let mut a: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        for (i, j, k, flip) in ops {
            if i != j {
                let row = a[j].clone();
                a[i].iter_mut().zip(&row).for_each(|(v, r)| *v += k * r);
            }
            if flip {
                a[i].iter_mut().for_each(|v| *v = -*v);
            }
        }
        a
    })
}

fn transform(a: &[Vec<i64>], rows: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    rows.iter()
        .map(|r| a.iter().map(|ai| ai.iter().zip(r).map(|(&x, v)| v * BigInt::from(x)).sum()).collect())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closure_is_invariant_under_integer_shift((names, rows) in algebraic(), z in prop::collection::vec(-4i64..=4, 3)) {
        let t = vector(&names, rows.clone());
        let mut shifted = rows;
        for (v, dz) in shifted[0].iter_mut().zip(&z) {
            *v += BigRational::from_integer((*dz).into());
        }
        prop_assert_eq!(rc(&t), rc(&vector(&names, shifted)));
    }

    #[test]
    fn closure_is_invariant_under_basis_change((names, rows) in algebraic(), a in unimodular(3)) {
        let n = rows[0].len();
        let a: Vec<Vec<i64>> = a[..n].iter().map(|r| r[..n].to_vec()).collect();
        // the top-left block of a unimodular matrix need not be unimodular
        let det = IntMatrix::from_i64_rows(&a).det();
        prop_assume!(det == BigInt::from(1) || det == BigInt::from(-1));
        let t = vector(&names, rows.clone());
        prop_assert_eq!(rc(&t), rc(&vector(&names, transform(&a, &rows))));
    }

    #[test]
    fn adding_relations_never_raises_dimension(
        rows in prop::collection::vec(prop::collection::vec(-4i64..=4, 3), 0..3),
        extra in prop::collection::vec(-4i64..=4, 3),
    ) {
        let base = if rows.is_empty() { IntMatrix::zeros(0, 3) } else { IntMatrix::from_i64_rows(&rows) };
        let mut more = rows.clone();
        more.push(extra);
        let a = RelationLattice::from_relations(&base);
        let b = RelationLattice::from_relations(&IntMatrix::from_i64_rows(&more));
        prop_assert!(b.rank >= a.rank);
        prop_assert!(3 - b.rank <= 3 - a.rank);
    }

    #[test]
    fn relations_pair_integrally((names, rows) in algebraic()) {
        let t = vector(&names, rows);
        let l = relation_lattice(&t);
        for m in l.generators.row_vecs() {
            // ⟨m, t⟩ has no irrational part and an integral rational part
            for row in t.irrational_rows() {
                let s: BigRational = m.iter().zip(row).map(|(a, b)| b * a).sum();
                prop_assert_eq!(s, BigRational::from_integer(0.into()));
            }
            let s: BigRational = m.iter().zip(t.rational_part()).map(|(a, b)| b * a).sum();
            prop_assert!(s.is_integer());
        }
    }

    #[test]
    fn rational_orbits_match_the_period(d in prop::collection::vec((-11i64..=11, 1i64..=12), 1..=2)) {
        // the orbit of a rational point is cyclic of order lcm of the reduced denominators
        let rows = [d.iter().map(|&(n, q)| rat(n, q)).collect::<Vec<_>>()];
        let order = rows[0].iter().fold(BigInt::from(1), |acc, v| acc.lcm(v.denom()));
        let t = AlgebraicVector::rational(rows[0].clone()).unwrap();
        prop_assert_eq!(rc(&t), (0, order.clone()));
        let o = orbit_sample_oracle(&t.float_values_mod1(), 1000, 0.01).unwrap();
        prop_assert_eq!((o.dimension, BigInt::from(o.components)), (0, order));
    }

    #[test]
    fn resonance_dimension_does_not_grow_with_the_bound((names, rows) in algebraic(), q in 2u32..=6) {
        let t = vector(&names, rows).float_values_mod1();
        let lo = resonance_detect(&t, q, 1e-9).unwrap();
        let hi = resonance_detect(&t, q + 2, 1e-9).unwrap();
        prop_assert!(hi.dimension <= lo.dimension);
    }

    #[test]
    fn resonance_detection_matches_brute_force((names, rows) in algebraic(), q in 1u32..=4) {
        let t = vector(&names, rows).float_values_mod1();
        let fast = resonance_detect(&t, q, 1e-9).unwrap();
        let slow = resonance_brute_force(&t, q, 1e-9);
        prop_assert_eq!(fast.relations, slow.relations);
        prop_assert_eq!(fast.dimension, slow.dimension);
    }
}

#[test]
fn exact_closure_matches_resonance_at_large_bound() {
    let t = vector(&["sqrt2"], vec![vec![rat(0, 1), rat(1, 3), rat(1, 2)], vec![rat(1, 1), rat(0, 1), rat(2, 1)]]);
    let exact = orbit_closure(&t);
    let float = resonance_detect(&t.float_values_mod1(), 8, 1e-9).unwrap();
    assert_eq!(exact.dimension, float.dimension);
    assert_eq!(exact.components, BigInt::from(float.components));
}
