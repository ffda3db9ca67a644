//! Hermite and Smith normal forms over the integers, integer kernels and
//! saturation of sublattices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;

/// Row-style Hermite normal form.
///
/// Returns `(H, U)` with `U` unimodular and `U * A = H`. Nonzero rows of `H`
/// come first, pivots are positive and entries above each pivot lie in
/// `[0, pivot)`.
pub fn row_hnf_with_transform(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let m = a.rows();
    let n = a.cols();
    let mut h = a.row_vecs();
    let mut u = IntMatrix::identity(m).row_vecs();
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        loop {
            let pivot = (r..m)
                .filter(|&i| !h[i][c].is_zero())
                .min_by(|&i, &j| h[i][c].abs().cmp(&h[j][c].abs()));
            let Some(p) = pivot else { break };
            h.swap(r, p);
            u.swap(r, p);
            let mut clean = true;
            for i in r + 1..m {
                if h[i][c].is_zero() {
                    continue;
                }
                let q = h[i][c].div_floor(&h[r][c]);
                sub_row_multiple(&mut h, i, r, &q);
                sub_row_multiple(&mut u, i, r, &q);
                if !h[i][c].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if h[r][c].is_zero() {
            continue;
        }
        if h[r][c].is_negative() {
            negate_row(&mut h, r);
            negate_row(&mut u, r);
        }
        for i in 0..r {
            let q = h[i][c].div_floor(&h[r][c]);
            if !q.is_zero() {
                sub_row_multiple(&mut h, i, r, &q);
                sub_row_multiple(&mut u, i, r, &q);
            }
        }
        r += 1;
    }
    (IntMatrix::from_rows(h), IntMatrix::from_rows(u))
}

fn sub_row_multiple(rows: &mut [Vec<BigInt>], target: usize, source: usize, q: &BigInt) {
    let (src, dst) = if source < target {
        let (lo, hi) = rows.split_at_mut(target);
        (&lo[source], &mut hi[0])
    } else {
        let (lo, hi) = rows.split_at_mut(source);
        (&hi[0], &mut lo[target])
    };
    for (d, s) in dst.iter_mut().zip(src.iter()) {
        *d -= q * s;
    }
}

fn negate_row(rows: &mut [Vec<BigInt>], i: usize) {
    for x in rows[i].iter_mut() {
        *x = -std::mem::take(x);
    }
}

/// Canonical (HNF) basis of the lattice spanned by the rows of `a`, with zero
/// rows dropped. The result has `cols` columns even when it has no rows.
pub fn lattice_basis(a: &IntMatrix) -> IntMatrix {
    let (h, _) = row_hnf_with_transform(a);
    let rows: Vec<Vec<BigInt>> = h.row_vecs().into_iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect();
    rows_or_empty(rows, a.cols())
}

pub(crate) fn rows_or_empty(rows: Vec<Vec<BigInt>>, cols: usize) -> IntMatrix {
    if rows.is_empty() {
        IntMatrix::zeros(0, cols)
    } else {
        IntMatrix::from_rows(rows)
    }
}

/// Basis (rows, in Hermite normal form) of `{x in Z^n : A x = 0}`.
///
/// The kernel of an integer matrix is always saturated in `Z^n`.
pub fn integer_kernel(a: &IntMatrix) -> IntMatrix {
    let n = a.cols();
    if a.rows() == 0 {
        return IntMatrix::identity(n);
    }
    let (h, u) = row_hnf_with_transform(&a.transpose());
    let rows: Vec<Vec<BigInt>> = (0..n)
        .filter(|&i| h.row(i).iter().all(Zero::is_zero))
        .map(|i| u.row(i).to_vec())
        .collect();
    lattice_basis(&rows_or_empty(rows, n))
}

/// Primitive closure `span_Q(L) ∩ Z^n` of the row lattice `L`.
pub fn saturate(basis: &IntMatrix) -> IntMatrix {
    let n = basis.cols();
    if basis.rows() == 0 {
        return IntMatrix::zeros(0, n);
    }
    let annihilator = integer_kernel(basis);
    if annihilator.rows() == 0 {
        return IntMatrix::identity(n);
    }
    integer_kernel(&annihilator)
}

/// Nonzero invariant factors of the Smith normal form, in divisibility order.
pub fn smith_invariants(a: &IntMatrix) -> Vec<BigInt> {
    let mut m = a.clone();
    loop {
        m = lattice_basis(&m);
        m = lattice_basis(&m.transpose());
        if is_diagonal(&m) {
            break;
        }
    }
    let mut d: Vec<BigInt> = (0..m.rows().min(m.cols())).map(|i| m[(i, i)].abs()).filter(|x| !x.is_zero()).collect();
    // enforce d_i | d_{i+1}
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let g = d[i].gcd(&d[j]);
            let l = &d[i] / &g * &d[j];
            d[i] = g;
            d[j] = l;
        }
    }
    d
}

fn is_diagonal(m: &IntMatrix) -> bool {
    (0..m.rows()).all(|i| (0..m.cols()).all(|j| i == j || m[(i, j)].is_zero()))
}

/// `Z^n / L` is torsion-free (all Smith invariants of the basis equal one).
pub fn is_saturated(basis: &IntMatrix) -> bool {
    smith_invariants(basis).iter().all(One::is_one)
}

/// Index of the row lattice `L` inside its saturation.
pub fn saturation_index(basis: &IntMatrix) -> BigInt {
    smith_invariants(basis).iter().product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::matrix::dot;

    #[test]
    fn hnf_transform_is_consistent() {
        let a = IntMatrix::from_i64_rows(&[vec![4, 6, 2], vec![6, 9, 3], vec![2, 3, 5]]);
        let (h, u) = row_hnf_with_transform(&a);
        assert_eq!(u.mul(&a), h);
        assert!(u.det().abs().is_one());
    }

    #[test]
    fn kernel_of_single_relation() {
        let a = IntMatrix::from_i64_rows(&[vec![0, 0, 1, -1]]);
        let k = integer_kernel(&a);
        assert_eq!(
            k,
            IntMatrix::from_i64_rows(&[vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 1]])
        );
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let a = IntMatrix::from_i64_rows(&[vec![3, 5, 7, 11], vec![2, -4, 6, 1]]);
        let k = integer_kernel(&a);
        assert_eq!(k.rows(), 2);
        for r in k.row_vecs() {
            for i in 0..a.rows() {
                assert!(dot(a.row(i), &r).is_zero());
            }
        }
        assert!(is_saturated(&k));
    }

    #[test]
    fn smith_of_index_six_lattice() {
        let a = IntMatrix::from_i64_rows(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(smith_invariants(&a), vec![BigInt::from(1), BigInt::from(6)]);
        assert_eq!(saturation_index(&a), BigInt::from(6));
        let s = saturate(&IntMatrix::from_i64_rows(&[vec![0, 2]]));
        assert_eq!(s, IntMatrix::from_i64_rows(&[vec![0, 1]]));
    }
}
