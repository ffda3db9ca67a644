//! Induced action on symmetric powers, in the monomial basis.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::exact::IntMatrix;

/// Monomials of degree `p` in `n` variables, as sorted index multisets, in
/// lexicographic order. There are `binom(n + p - 1, p)` of them.
pub fn monomials(n: usize, p: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, p: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(n, p, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, p, 0, &mut Vec::with_capacity(p), &mut out);
    out
}

/// Matrix of `Sym^p(M)`: column `α` holds the expansion of
/// `(M e_{α₁}) ⋯ (M e_{α_p})` in the monomial basis.
pub fn sym_power(m: &IntMatrix, p: usize) -> IntMatrix {
    assert!(m.is_square());
    let n = m.rows();
    let basis = monomials(n, p);
    let index: BTreeMap<&[usize], usize> = basis.iter().enumerate().map(|(i, b)| (b.as_slice(), i)).collect();
    let dim = basis.len();
    let mut out = IntMatrix::zeros(dim, dim);
    for (col, alpha) in basis.iter().enumerate() {
        let mut poly: BTreeMap<Vec<usize>, BigInt> = BTreeMap::new();
        poly.insert(Vec::new(), BigInt::from(1));
        for &i in alpha {
            let mut next: BTreeMap<Vec<usize>, BigInt> = BTreeMap::new();
            for (mono, coef) in &poly {
                for j in 0..n {
                    let entry = &m[(j, i)];
                    if entry.is_zero() {
                        continue;
                    }
                    let mut mono2 = mono.clone();
                    let pos = mono2.partition_point(|&x| x <= j);
                    mono2.insert(pos, j);
                    *next.entry(mono2).or_insert_with(BigInt::zero) += coef * entry;
                }
            }
            poly = next;
        }
        for (mono, coef) in poly {
            if !coef.is_zero() {
                out[(index[mono.as_slice()], col)] = coef;
            }
        }
    }
    out
}

/// Symmetric form induced on `Sym^p` by `G`: the pairing of two monomials is
/// the permanent of the corresponding `p×p` submatrix of `G`.
pub fn induced_form(g: &IntMatrix, p: usize) -> IntMatrix {
    let basis = monomials(g.rows(), p);
    let dim = basis.len();
    let mut out = IntMatrix::zeros(dim, dim);
    for (a, alpha) in basis.iter().enumerate() {
        for (b, beta) in basis.iter().enumerate() {
            out[(a, b)] = permanent(alpha.len(), |i, j| &g[(alpha[i], beta[j])]);
        }
    }
    out
}

fn permanent<'a>(p: usize, entry: impl Fn(usize, usize) -> &'a BigInt) -> BigInt {
    fn rec<'a>(row: usize, p: usize, used: &mut Vec<bool>, entry: &impl Fn(usize, usize) -> &'a BigInt) -> BigInt {
        if row == p {
            return BigInt::from(1);
        }
        let mut s = BigInt::zero();
        for j in 0..p {
            if used[j] {
                continue;
            }
            let e = entry(row, j);
            if e.is_zero() {
                continue;
            }
            used[j] = true;
            s += e * rec(row + 1, p, used, entry);
            used[j] = false;
        }
        s
    }
    rec(0, p, &mut vec![false; p], &entry)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn dimension_is_binomial() {
        for n in 1..5 {
            for p in 0..4 {
                assert_eq!(monomials(n, p).len(), binom(n + p - 1, p));
            }
        }
    }

    #[test]
    fn first_power_is_the_matrix() {
        let m = IntMatrix::from_i64_rows(&[vec![1, 1, 2], vec![0, 1, 0], vec![0, 1, 1]]);
        assert_eq!(sym_power(&m, 1), m);
    }

    #[test]
    fn identity_goes_to_identity() {
        assert_eq!(sym_power(&IntMatrix::identity(3), 2), IntMatrix::identity(6));
    }

    #[test]
    fn diagonal_matrix_gives_monomial_weights() {
        let d = IntMatrix::diagonal(&[2, 3]);
        // x², xy, y² scale by 4, 6, 9
        assert_eq!(sym_power(&d, 2), IntMatrix::diagonal(&[4, 6, 9]));
    }
}
