use serde::{Deserialize, Serialize};

/// Tensor Gauss–Legendre rule of `order` points per panel, refined by doubling
/// the panels per axis until the two-rule error estimate is below `rel_tol`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureSpec {
    pub order: usize,
    pub rel_tol: f64,
    pub max_panels: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { order: 32, rel_tol: 1e-4, max_panels: 8 }
    }
}

/// Nodes and weights on `[-1, 1]`, by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p1 = z;
                p0 = 1.0;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Tensor-product composite rule on a box: `panels` per axis, `order` nodes each.
pub(crate) fn tensor_rule(lo: &[f64], hi: &[f64], order: usize, panels: usize) -> Vec<(Vec<f64>, f64)> {
    let (x, w) = gauss_legendre(order);
    let d = lo.len();
    let axes: Vec<Vec<(f64, f64)>> = (0..d)
        .map(|k| {
            let h = (hi[k] - lo[k]) / panels as f64;
            (0..panels)
                .flat_map(|p| {
                    let a = lo[k] + p as f64 * h;
                    x.iter().zip(&w).map(move |(xi, wi)| (a + 0.5 * h * (xi + 1.0), 0.5 * h * wi))
                })
                .collect()
        })
        .collect();
    let per = axes[0].len();
    let total = per.pow(d as u32);
    (0..total)
        .map(|mut code| {
            let mut p = vec![0.0; d];
            let mut wt = 1.0;
            for k in (0..d).rev() {
                let (xk, wk) = axes[k][code % per];
                code /= per;
                p[k] = xk;
                wt *= wk;
            }
            (p, wt)
        })
        .collect()
}

/// Neumaier-compensated sum in iteration order.
pub(crate) fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let (mut sum, mut c) = (0.0f64, 0.0f64);
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            c += (sum - t) + v;
        } else {
            c += (v - t) + sum;
        }
        sum = t;
    }
    sum + c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomials_exactly() {
        for n in [1, 2, 5, 16, 32] {
            let (x, w) = gauss_legendre(n);
            for deg in 0..2 * n {
                let q: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(deg as i32)).sum();
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((q - exact).abs() < 1e-13, "n={n} deg={deg}: {q}");
            }
        }
    }

    #[test]
    fn tensor_rule_gives_box_volume() {
        let r = tensor_rule(&[0.0, 1.0], &[2.0, 4.0], 4, 3);
        assert_eq!(r.len(), 144);
        assert!((compensated_sum(r.iter().map(|(_, w)| *w)) - 6.0).abs() < 1e-13);
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let v = [1e16, 1.0, -1e16];
        assert_eq!(compensated_sum(v), 1.0);
    }
}
