use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::TorusError;
use crate::expr::Expression;

/// Largest accepted condition number of `Im Τ`.
pub const MAX_CONDITION: f64 = 1e12;

/// Axis-aligned box in `ℝ^{2g}`, coordinates ordered `(Re u1, Im u1, Re u2, ...)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BaseDomain {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl BaseDomain {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self, TorusError> {
        if lo.len() != hi.len() || lo.is_empty() || lo.len() % 2 != 0 {
            return Err(TorusError::InvalidDomain("bounds must have equal, even, positive length".into()));
        }
        if lo.iter().zip(&hi).any(|(a, b)| !(a.is_finite() && b.is_finite() && a < b)) {
            return Err(TorusError::InvalidDomain("each lower bound must be below its upper bound".into()));
        }
        Ok(Self { lo, hi })
    }

    /// The same box `[lo, hi]` on every real axis.
    pub fn cube(g: usize, lo: f64, hi: f64) -> Result<Self, TorusError> {
        Self::new(vec![lo; 2 * g], vec![hi; 2 * g])
    }

    pub fn real_dim(&self) -> usize {
        self.lo.len()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.contains_with_margin(x, 0.0)
    }

    pub fn contains_with_margin(&self, x: &[f64], margin: f64) -> bool {
        x.len() == self.lo.len()
            && x.iter().zip(self.lo.iter().zip(&self.hi)).all(|(v, (a, b))| *v >= a + margin && *v <= b - margin)
    }

    pub fn min_side(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(a, b)| b - a).fold(f64::INFINITY, f64::min)
    }

    /// Map a point of the unit cube into the box shrunk by `margin`.
    pub fn from_unit(&self, p: &[f64], margin: f64) -> Vec<f64> {
        p.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .map(|(t, (a, b))| a + margin + t * (b - a - 2.0 * margin))
            .collect()
    }
}

/// `Τ(u)` split into real and imaginary parts, with `(Im Τ)⁻¹`.
#[derive(Clone, Debug)]
pub struct PeriodMatrix {
    pub re: DMatrix<f64>,
    pub im: DMatrix<f64>,
    pub im_inv: DMatrix<f64>,
    pub condition: f64,
}

impl PeriodMatrix {
    pub fn g(&self) -> usize {
        self.re.nrows()
    }

    /// Real `2g×2g` matrix `R = [[I, Re Τ], [0, Im Τ]]` sending `(a, b)` to `(Re z, Im z)`.
    pub fn real_basis(&self) -> DMatrix<f64> {
        let g = self.g();
        let mut r = DMatrix::zeros(2 * g, 2 * g);
        for i in 0..g {
            r[(i, i)] = 1.0;
            for j in 0..g {
                r[(i, g + j)] = self.re[(i, j)];
                r[(g + i, g + j)] = self.im[(i, j)];
            }
        }
        r
    }

    pub fn real_basis_inverse(&self) -> DMatrix<f64> {
        let g = self.g();
        let mut r = DMatrix::zeros(2 * g, 2 * g);
        let re_im_inv = &self.re * &self.im_inv;
        for i in 0..g {
            r[(i, i)] = 1.0;
            for j in 0..g {
                r[(i, g + j)] = -re_im_inv[(i, j)];
                r[(g + i, g + j)] = self.im_inv[(i, j)];
            }
        }
        r
    }
}

/// A family `ℂ^g/(ℤ^g + Τ(u)ℤ^g)` with `Τ` given by holomorphic expressions.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodFamily {
    g: usize,
    domain: BaseDomain,
    tau: Vec<Expression>,
}

impl PeriodFamily {
    /// `tau` is row-major `g×g`.
    pub fn new(g: usize, domain: BaseDomain, tau: Vec<Expression>) -> Result<Self, TorusError> {
        if g == 0 {
            return Err(TorusError::InvalidDomain("g must be positive".into()));
        }
        if domain.real_dim() != 2 * g {
            return Err(TorusError::DimensionMismatch { expected: 2 * g, found: domain.real_dim() });
        }
        if tau.len() != g * g {
            return Err(TorusError::DimensionMismatch { expected: g * g, found: tau.len() });
        }
        for e in &tau {
            check_expression(e, g, true)?;
        }
        Ok(Self { g, domain, tau })
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn domain(&self) -> &BaseDomain {
        &self.domain
    }

    pub fn tau(&self) -> &[Expression] {
        &self.tau
    }

    /// Evaluate `Τ` at real coordinates `u`, checking symmetry and that
    /// `Im Τ` is positive definite and well conditioned.
    pub fn period_matrix(&self, u: &[f64]) -> Result<PeriodMatrix, TorusError> {
        let z = self.complex_point(u)?;
        let g = self.g;
        let vals: Vec<Complex64> = self.tau.iter().map(|e| e.eval(&z)).collect();
        if vals.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(TorusError::NonFinite(u.to_vec()));
        }
        let scale = 1.0 + vals.iter().map(|v| v.norm()).fold(0.0, f64::max);
        for i in 0..g {
            for j in 0..i {
                if (vals[i * g + j] - vals[j * g + i]).norm() > 1e-12 * scale {
                    return Err(TorusError::NonSymmetricPeriod(u.to_vec()));
                }
            }
        }
        let re = DMatrix::from_fn(g, g, |i, j| vals[i * g + j].re);
        let im = DMatrix::from_fn(g, g, |i, j| 0.5 * (vals[i * g + j].im + vals[j * g + i].im));
        let eig = SymmetricEigen::new(im.clone());
        let lo = eig.eigenvalues.min();
        let hi = eig.eigenvalues.max();
        let condition = if lo > 0.0 { hi / lo } else { f64::INFINITY };
        if !(condition <= MAX_CONDITION) {
            return Err(TorusError::SingularPeriod { point: u.to_vec(), condition });
        }
        let inv_diag = eig.eigenvalues.map(|x| 1.0 / x);
        let im_inv = &eig.eigenvectors * DMatrix::from_diagonal(&inv_diag) * eig.eigenvectors.transpose();
        Ok(PeriodMatrix { re, im, im_inv, condition })
    }

    pub(crate) fn complex_point(&self, u: &[f64]) -> Result<Vec<Complex64>, TorusError> {
        if u.len() != 2 * self.g {
            return Err(TorusError::DimensionMismatch { expected: 2 * self.g, found: u.len() });
        }
        if !self.domain.contains(u) {
            return Err(TorusError::OutOfDomain(u.to_vec()));
        }
        Ok(u.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect())
    }
}

pub(crate) fn check_expression(e: &Expression, g: usize, holomorphic: bool) -> Result<(), TorusError> {
    if holomorphic && !e.is_holomorphic() {
        return Err(TorusError::NotHolomorphic(e.source().to_string()));
    }
    let needed = e.required_g();
    if needed > g {
        return Err(TorusError::TooManyVariables { source_text: e.source().to_string(), needed, g });
    }
    Ok(())
}
