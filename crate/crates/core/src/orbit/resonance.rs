//! Small integer relations `⟨m, t⟩ ≈ 0 mod 1` of a floating vector, found
//! by LLL reduction of an embedding lattice followed by Fincke-Pohst
//! enumeration.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;

use super::{OrbitError, RelationLattice};
use crate::exact::IntMatrix;

const LLL_DELTA: f64 = 0.99;

/// Largest accepted `Q / tol`, so that embedding coordinates stay exact.
pub const MAX_SCALE: f64 = 1e15;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResonanceResult {
    /// Relations that are not proper multiples of another relation on the
    /// same ray, sign-normalized and sorted.
    pub relations: Vec<Vec<i64>>,
    pub lattice: RelationLattice,
    /// `n - rank`.
    pub dimension: usize,
    /// Index of the found lattice in its saturation.
    pub components: u64,
}

fn gram_schmidt(b: &[Vec<f64>]) -> (Vec<Vec<f64>>, Vec<f64>) {
    let n = b.len();
    let mut mu = vec![vec![0.0; n]; n];
    let mut star: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut norms = vec![0.0; n];
    for i in 0..n {
        let mut v = b[i].clone();
        for j in 0..i {
            mu[i][j] = dot(&b[i], &star[j]) / norms[j];
            for (x, y) in v.iter_mut().zip(&star[j]) {
                *x -= mu[i][j] * y;
            }
        }
        norms[i] = dot(&v, &v);
        star.push(v);
    }
    (mu, norms)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Floating-point LLL on the rows of `b`.
pub fn lll_f64(b: &mut [Vec<f64>]) {
    let n = b.len();
    if n < 2 {
        return;
    }
    let (mut mu, mut norms) = gram_schmidt(b);
    let mut k = 1;
    let mut guard = 0usize;
    while k < n && guard < 100_000 {
        guard += 1;
        for j in (0..k).rev() {
            let q = mu[k][j].round();
            if q != 0.0 {
                let bj = b[j].clone();
                for (x, y) in b[k].iter_mut().zip(&bj) {
                    *x -= q * y;
                }
                for l in 0..j {
                    mu[k][l] -= q * mu[j][l];
                }
                mu[k][j] -= q;
            }
        }
        if norms[k] >= (LLL_DELTA - mu[k][k - 1] * mu[k][k - 1]) * norms[k - 1] {
            k += 1;
        } else {
            b.swap(k, k - 1);
            (mu, norms) = gram_schmidt(b);
            k = (k - 1).max(1);
        }
    }
}

/// All nonzero vectors `Σ x_i b_i` of euclidean length at most `radius`, up to sign.
pub fn enumerate_short(b: &[Vec<f64>], radius: f64) -> Vec<Vec<f64>> {
    let n = b.len();
    let (mu, norms) = gram_schmidt(b);
    let r2 = radius * radius * (1.0 + 1e-9) + 1e-9;
    let mut out = Vec::new();
    let mut x = vec![0i64; n];
    fn rec(
        i: usize,
        partial: f64,
        x: &mut Vec<i64>,
        mu: &[Vec<f64>],
        norms: &[f64],
        r2: f64,
        b: &[Vec<f64>],
        out: &mut Vec<Vec<f64>>,
    ) {
        let n = x.len();
        let c: f64 = -(i + 1..n).map(|j| x[j] as f64 * mu[j][i]).sum::<f64>();
        let room = ((r2 - partial) / norms[i]).max(0.0).sqrt();
        let lo = (c - room).ceil() as i64;
        let hi = (c + room).floor() as i64;
        for xi in lo..=hi {
            let d = xi as f64 - c;
            let p = partial + d * d * norms[i];
            if p > r2 {
                continue;
            }
            x[i] = xi;
            if i == 0 {
                // keep one of ±v: first nonzero coefficient positive
                if let Some(&first) = x.iter().rev().find(|&&v| v != 0) {
                    if first > 0 {
                        let mut v = vec![0.0; b[0].len()];
                        for (k, &xk) in x.iter().enumerate() {
                            if xk != 0 {
                                for (a, bb) in v.iter_mut().zip(&b[k]) {
                                    *a += xk as f64 * bb;
                                }
                            }
                        }
                        out.push(v);
                    }
                }
            } else {
                rec(i - 1, p, x, mu, norms, r2, b, out);
            }
        }
        x[i] = 0;
    }
    if n > 0 {
        rec(n - 1, 0.0, &mut x, &mu, &norms, r2, b, &mut out);
    }
    out
}

fn frac_dist(x: f64) -> f64 {
    (x - x.round()).abs()
}

fn normalize(mut m: Vec<i64>) -> Vec<i64> {
    if m.iter().find(|&&v| v != 0).is_some_and(|&v| v < 0) {
        m.iter_mut().for_each(|v| *v = -*v);
    }
    m
}

fn residual(m: &[i64], t: &[f64]) -> f64 {
    frac_dist(m.iter().zip(t).map(|(a, b)| *a as f64 * b).sum())
}

/// Keep relations that are not `k·m'` for another relation `m'`.
pub(crate) fn ray_minimal(all: &BTreeSet<Vec<i64>>) -> Vec<Vec<i64>> {
    all.iter()
        .filter(|m| {
            let g = m.iter().fold(0i64, |a, &b| a.gcd(&b));
            !(2..=g).any(|k| g % k == 0 && all.contains(&m.iter().map(|x| x / k).collect::<Vec<_>>()))
        })
        .cloned()
        .collect()
}

pub(crate) fn summarize(n: usize, relations: Vec<Vec<i64>>) -> ResonanceResult {
    let rows: Vec<Vec<BigInt>> = relations.iter().map(|m| m.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let lattice = if rows.is_empty() {
        RelationLattice::from_relations(&IntMatrix::zeros(0, n))
    } else {
        RelationLattice::from_relations(&IntMatrix::from_rows(rows))
    };
    let components = u64::try_from(lattice.index()).unwrap_or(u64::MAX);
    ResonanceResult { dimension: n - lattice.rank, components, lattice, relations }
}

/// Find all `m` with `‖m‖∞ <= q` and `dist(⟨m,t⟩, ℤ) < tol`.
///
/// The lattice spanned by `(e_i, C·t_i)` and `(0, C)` with `C = q/tol`
/// contains `(m, C(⟨m,t⟩ - k))` for every `m`; wanted relations have
/// length at most `q·sqrt(n+1)` there.
pub fn resonance_detect(t: &[f64], q: u32, tol: f64) -> Result<ResonanceResult, OrbitError> {
    let n = t.len();
    if q == 0 {
        return Err(OrbitError::InvalidInput("denominator bound must be at least 1".into()));
    }
    if !(tol > 0.0 && tol < 0.5) || t.iter().any(|x| !x.is_finite()) || n == 0 {
        return Err(OrbitError::InvalidInput("need finite t and tol in (0, 1/2)".into()));
    }
    let qf = q as f64;
    let c = qf / tol;
    if c > MAX_SCALE {
        return Err(OrbitError::InvalidInput(format!("q/tol must not exceed {MAX_SCALE:e}")));
    }
    let tr: Vec<f64> = t.iter().map(|x| x - x.floor()).collect();
    let mut basis: Vec<Vec<f64>> = (0..=n)
        .map(|i| {
            let mut row = vec![0.0; n + 1];
            if i < n {
                row[i] = 1.0;
                row[n] = c * tr[i];
            } else {
                row[n] = c;
            }
            row
        })
        .collect();
    lll_f64(&mut basis);
    let mut found = BTreeSet::new();
    for v in enumerate_short(&basis, qf * ((n + 1) as f64).sqrt()) {
        let m: Vec<i64> = v[..n].iter().map(|x| x.round() as i64).collect();
        if m.iter().all(|&x| x == 0) || m.iter().any(|x| x.unsigned_abs() > q as u64) {
            continue;
        }
        if residual(&m, &tr) < tol {
            found.insert(normalize(m));
        }
    }
    Ok(summarize(n, ray_minimal(&found)))
}

/// Exhaustive search over the box, for testing and tiny inputs.
pub fn resonance_brute_force(t: &[f64], q: u32, tol: f64) -> ResonanceResult {
    let n = t.len();
    let q = q as i64;
    let mut found = BTreeSet::new();
    let mut m = vec![-q; n];
    loop {
        if m.iter().any(|&x| x != 0) && residual(&m, t) < tol {
            found.insert(normalize(m.clone()));
        }
        let mut i = 0;
        while i < n {
            m[i] += 1;
            if m[i] <= q {
                break;
            }
            m[i] = -q;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    summarize(n, ray_minimal(&found))
}
