//! Exact LLL reduction for small integer lattices.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn gram_schmidt(b: &[Vec<BigInt>]) -> (Vec<Vec<BigRational>>, Vec<BigRational>) {
    let n = b.len();
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    let mut bstar: Vec<Vec<BigRational>> = Vec::with_capacity(n);
    let mut norms = Vec::with_capacity(n);
    for i in 0..n {
        let mut v: Vec<BigRational> = b[i].iter().map(|x| BigRational::from_integer(x.clone())).collect();
        for j in 0..i {
            let bi: Vec<BigRational> = b[i].iter().map(|x| BigRational::from_integer(x.clone())).collect();
            let num: BigRational = bi.iter().zip(&bstar[j]).map(|(x, y)| x * y).sum();
            mu[i][j] = num / &norms[j];
            for (vk, sk) in v.iter_mut().zip(&bstar[j]) {
                *vk -= &mu[i][j] * sk;
            }
        }
        norms.push(v.iter().map(|x| x * x).sum());
        bstar.push(v);
    }
    (mu, norms)
}

/// LLL-reduce the rows of `basis` (linearly independent) with `δ = 3/4`.
/// Gram-Schmidt data is recomputed after every change, which is fine for
/// the handful of rows used here.
pub fn lll_reduce(mut b: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let n = b.len();
    let delta = BigRational::new(3.into(), 4.into());
    let half = BigRational::new(1.into(), 2.into());
    let mut k = 1;
    while k < n {
        for j in (0..k).rev() {
            let (mu, _) = gram_schmidt(&b);
            if mu[k][j].abs() > half {
                let q = mu[k][j].round().to_integer();
                let bj = b[j].clone();
                for (x, y) in b[k].iter_mut().zip(&bj) {
                    *x -= &q * y;
                }
            }
        }
        let (mu, norms) = gram_schmidt(&b);
        let lhs = &norms[k];
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &norms[k - 1];
        if *lhs >= rhs {
            k += 1;
        } else {
            b.swap(k, k - 1);
            k = (k - 1).max(1);
        }
    }
    b
}

/// Squared euclidean length.
pub fn norm_sq(v: &[BigInt]) -> BigInt {
    dot(v, v)
}

/// Smallest nonzero row by euclidean length.
pub fn shortest_row(b: &[Vec<BigInt>]) -> Option<&Vec<BigInt>> {
    b.iter().filter(|v| v.iter().any(|x| !x.is_zero())).min_by_key(|v| norm_sq(v))
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ints;

    #[test]
    fn reduces_a_skewed_basis() {
        let b = vec![ints(&[1, 0, 0]), ints(&[4, 1, 0]), ints(&[7, 3, 1])];
        let r = lll_reduce(b);
        // unimodular image of Z^3: reduced basis consists of unit vectors
        assert!(r.iter().all(|v| norm_sq(v) == BigInt::from(1)));
    }

    #[test]
    fn finds_integer_relation() {
        // 1, x, x^2 with x = golden ratio: x^2 - x - 1 = 0
        let scale = BigInt::from(10).pow(20);
        let phi = "161803398874989484820".parse::<BigInt>().unwrap();
        let phi2 = "261803398874989484820".parse::<BigInt>().unwrap();
        let b = vec![
            vec![BigInt::from(1), BigInt::zero(), BigInt::zero(), scale.clone()],
            vec![BigInt::zero(), BigInt::from(1), BigInt::zero(), phi],
            vec![BigInt::zero(), BigInt::zero(), BigInt::from(1), phi2],
        ];
        let r = lll_reduce(b);
        let s = shortest_row(&r).unwrap();
        let rel: Vec<i64> = s[..3].iter().map(|x| i64::try_from(x.clone()).unwrap()).collect();
        assert!(rel == vec![1, 1, -1] || rel == vec![-1, -1, 1], "{rel:?}");
    }
}
