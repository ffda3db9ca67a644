use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{PeriodFamily, TorusError};

/// Reduce into `[0, 1)`.
pub fn reduce_mod1(x: f64) -> f64 {
    let r = x - x.floor();
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// Group law in the fiber: `x + t mod ℤ^{2g}`.
pub fn fiber_translate(x: &[f64], t: &[f64]) -> Vec<f64> {
    x.iter().zip(t).map(|(a, b)| reduce_mod1(a + b)).collect()
}

/// Betti coordinates `x = (a, b)` with `z = a + Τ(u) b`, in the period basis
/// or in an integral change of it.
#[derive(Clone, Debug)]
pub struct BettiChart {
    family: Arc<PeriodFamily>,
    basis_change: Option<(DMatrix<f64>, DMatrix<f64>)>,
}

impl BettiChart {
    pub fn new(family: Arc<PeriodFamily>) -> Self {
        Self { family, basis_change: None }
    }

    /// Use coordinates `A·x` for an integer matrix `A` with `det A = ±1`.
    pub fn with_basis_change(family: Arc<PeriodFamily>, a: &[Vec<i64>]) -> Result<Self, TorusError> {
        let n = 2 * family.g();
        if a.len() != n || a.iter().any(|r| r.len() != n) {
            return Err(TorusError::InvalidBasisChange);
        }
        let m = DMatrix::from_fn(n, n, |i, j| a[i][j] as f64);
        let det = m.determinant();
        if (det.abs() - 1.0).abs() > 1e-9 {
            return Err(TorusError::InvalidBasisChange);
        }
        let inv = m.clone().try_inverse().ok_or(TorusError::InvalidBasisChange)?.map(f64::round);
        Ok(Self { family, basis_change: Some((m, inv)) })
    }

    pub fn family(&self) -> &Arc<PeriodFamily> {
        &self.family
    }

    pub fn g(&self) -> usize {
        self.family.g()
    }

    /// Unreduced coordinates of `z` at `u`.
    pub fn lift(&self, u: &[f64], z: &[Complex64]) -> Result<Vec<f64>, TorusError> {
        let g = self.g();
        if z.len() != g {
            return Err(TorusError::DimensionMismatch { expected: g, found: z.len() });
        }
        let p = self.family.period_matrix(u)?;
        let zre = DVector::from_iterator(g, z.iter().map(|c| c.re));
        let zim = DVector::from_iterator(g, z.iter().map(|c| c.im));
        let b = &p.im_inv * zim;
        let a = zre - &p.re * &b;
        let x = DVector::from_iterator(2 * g, a.iter().chain(b.iter()).copied());
        Ok(self.to_chart(x))
    }

    /// Inverse synthesis `z = a + Τ(u) b`.
    pub fn synthesize(&self, u: &[f64], x: &[f64]) -> Result<Vec<Complex64>, TorusError> {
        let g = self.g();
        if x.len() != 2 * g {
            return Err(TorusError::DimensionMismatch { expected: 2 * g, found: x.len() });
        }
        let p = self.family.period_matrix(u)?;
        let mut v = DVector::from_column_slice(x);
        if let Some((_, inv)) = &self.basis_change {
            v = inv * v;
        }
        let re_im = p.real_basis() * v;
        Ok((0..g).map(|i| Complex64::new(re_im[i], re_im[g + i])).collect())
    }

    /// Matrix of multiplication by `i` on `ℂ^g` written in this chart at `u`.
    pub fn complex_structure(&self, u: &[f64]) -> Result<DMatrix<f64>, TorusError> {
        let g = self.g();
        let p = self.family.period_matrix(u)?;
        let mut j0 = DMatrix::zeros(2 * g, 2 * g);
        for i in 0..g {
            j0[(i, g + i)] = -1.0;
            j0[(g + i, i)] = 1.0;
        }
        let j = p.real_basis_inverse() * j0 * p.real_basis();
        Ok(match &self.basis_change {
            Some((a, inv)) => a * j * inv,
            None => j,
        })
    }

    fn to_chart(&self, x: DVector<f64>) -> Vec<f64> {
        match &self.basis_change {
            Some((a, _)) => (a * x).iter().copied().collect(),
            None => x.iter().copied().collect(),
        }
    }
}

/// Betti coordinates of `z` over `u`, reduced to `[0,1)^{2g}`.
pub fn betti_coordinates(chart: &BettiChart, u: &[f64], z: &[Complex64]) -> Result<Vec<f64>, TorusError> {
    Ok(chart.lift(u, z)?.into_iter().map(reduce_mod1).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Expression;
    use crate::torus::BaseDomain;

    fn chart(tau: &str) -> BettiChart {
        let d = BaseDomain::new(vec![-2.0, 0.5], vec![2.0, 3.0]).unwrap();
        BettiChart::new(Arc::new(PeriodFamily::new(1, d, vec![Expression::parse(tau).unwrap()]).unwrap()))
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn square_lattice_coordinates() {
        let ch = chart("i");
        assert_eq!(betti_coordinates(&ch, &[0.0, 1.0], &[c(0.0, 0.0)]).unwrap(), vec![0.0, 0.0]);
        assert_eq!(betti_coordinates(&ch, &[0.0, 1.0], &[c(0.5, 0.25)]).unwrap(), vec![0.5, 0.25]);
    }

    #[test]
    fn varying_period() {
        let ch = chart("u1");
        // b = Im z / Im Τ = 1/2, a = Re z - b Re Τ = 1 ≡ 0
        assert_eq!(betti_coordinates(&ch, &[0.0, 2.0], &[c(1.0, 1.0)]).unwrap(), vec![0.0, 0.5]);
        let x = betti_coordinates(&ch, &[1.0, 2.0], &[c(0.3, 1.0)]).unwrap();
        assert!((x[0] - reduce_mod1(0.3 - 0.5)).abs() < 1e-15 && x[1] == 0.5);
    }

    #[test]
    fn synthesis_inverts_the_chart() {
        let ch = chart("0.3 + u1^2/4 + i");
        let u = [0.7, 1.3];
        let z = [c(0.37, -0.81)];
        let x = ch.lift(&u, &z).unwrap();
        let back = ch.synthesize(&u, &x).unwrap();
        assert!((back[0] - z[0]).norm() < 1e-14);
    }

    #[test]
    fn complex_structure_squares_to_minus_one() {
        let ch = chart("u1");
        let j = ch.complex_structure(&[0.4, 1.7]).unwrap();
        assert!((&j * &j + DMatrix::identity(2, 2)).norm() < 1e-14);
    }

    #[test]
    fn basis_change_acts_linearly() {
        let ch = chart("u1");
        let swapped = BettiChart::with_basis_change(ch.family().clone(), &[vec![0, 1], vec![1, 0]]).unwrap();
        let u = [0.2, 1.5];
        let z = [c(0.3, 0.6)];
        let a = ch.lift(&u, &z).unwrap();
        let b = swapped.lift(&u, &z).unwrap();
        assert_eq!(a, vec![b[1], b[0]]);
        let back = swapped.synthesize(&u, &b).unwrap();
        assert!((back[0] - z[0]).norm() < 1e-14);
        let j = swapped.complex_structure(&u).unwrap();
        assert!((&j * &j + DMatrix::identity(2, 2)).norm() < 1e-14);
        assert!(BettiChart::with_basis_change(ch.family().clone(), &[vec![2, 0], vec![0, 1]]).is_err());
    }

    #[test]
    fn translation_is_a_group_law() {
        let x = [0.75, 0.1];
        let t = [0.5, 0.95];
        assert_eq!(fiber_translate(&x, &t), vec![0.25, reduce_mod1(1.05)]);
        assert_eq!(reduce_mod1(-1e-18), 0.0);
    }
}
