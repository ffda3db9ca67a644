use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::chart::reduce_mod1;
use super::family::check_expression;
use super::{BettiChart, PeriodFamily, QuasiRandom, TorusError};
use crate::expr::Expression;

/// Relative singular-value cutoff for numerical rank.
pub const DEFAULT_RANK_TOL: f64 = 1e-7;

/// Relative finite-difference step, as a fraction of the smallest domain side.
pub const DEFAULT_FD_FRACTION: f64 = 1e-5;

/// Holomorphic section `w: U → ℂ^g` of a period family.
#[derive(Clone, Debug)]
pub struct HolomorphicSection {
    family: Arc<PeriodFamily>,
    w: Vec<Expression>,
}

impl HolomorphicSection {
    pub fn new(family: Arc<PeriodFamily>, w: Vec<Expression>) -> Result<Self, TorusError> {
        let g = family.g();
        if w.len() != g {
            return Err(TorusError::DimensionMismatch { expected: g, found: w.len() });
        }
        for e in &w {
            check_expression(e, g, true)?;
        }
        Ok(Self { family, w })
    }

    pub fn family(&self) -> &Arc<PeriodFamily> {
        &self.family
    }

    pub fn components(&self) -> &[Expression] {
        &self.w
    }

    pub fn eval(&self, u: &[f64]) -> Result<Vec<Complex64>, TorusError> {
        let z = self.family.complex_point(u)?;
        let v: Vec<Complex64> = self.w.iter().map(|e| e.eval(&z)).collect();
        if v.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(TorusError::NonFinite(u.to_vec()));
        }
        Ok(v)
    }
}

#[derive(Clone, Debug)]
pub enum FieldSource {
    /// Betti coordinates of a holomorphic section.
    HolomorphicInduced(HolomorphicSection),
    /// Arbitrary real-analytic map `U → ℝ^{2g}` (real parts are used).
    FreeAnalytic(Vec<Expression>),
}

/// Translation field `t: U → ℝ^{2g}/ℤ^{2g}`.
#[derive(Clone, Debug)]
pub struct TranslationField {
    chart: BettiChart,
    source: FieldSource,
}

impl TranslationField {
    pub fn holomorphic(section: HolomorphicSection) -> Self {
        Self { chart: BettiChart::new(section.family().clone()), source: FieldSource::HolomorphicInduced(section) }
    }

    pub fn holomorphic_in_chart(chart: BettiChart, section: HolomorphicSection) -> Self {
        Self { chart, source: FieldSource::HolomorphicInduced(section) }
    }

    pub fn free_analytic(family: Arc<PeriodFamily>, t: Vec<Expression>) -> Result<Self, TorusError> {
        let g = family.g();
        if t.len() != 2 * g {
            return Err(TorusError::DimensionMismatch { expected: 2 * g, found: t.len() });
        }
        for e in &t {
            check_expression(e, g, false)?;
        }
        Ok(Self { chart: BettiChart::new(family), source: FieldSource::FreeAnalytic(t) })
    }

    pub fn chart(&self) -> &BettiChart {
        &self.chart
    }

    pub fn family(&self) -> &Arc<PeriodFamily> {
        self.chart.family()
    }

    pub fn source(&self) -> &FieldSource {
        &self.source
    }

    pub fn g(&self) -> usize {
        self.chart.g()
    }

    pub fn is_holomorphic_induced(&self) -> bool {
        matches!(self.source, FieldSource::HolomorphicInduced(_))
    }

    /// A continuous lift of `t(u)` to `ℝ^{2g}`.
    pub fn lift(&self, u: &[f64]) -> Result<Vec<f64>, TorusError> {
        match &self.source {
            FieldSource::HolomorphicInduced(s) => self.chart.lift(u, &s.eval(u)?),
            FieldSource::FreeAnalytic(t) => {
                let z = self.family().complex_point(u)?;
                let v: Vec<f64> = t.iter().map(|e| e.eval(&z).re).collect();
                if v.iter().any(|x| !x.is_finite()) {
                    return Err(TorusError::NonFinite(u.to_vec()));
                }
                Ok(v)
            }
        }
    }
}

/// `t(u)` reduced to `[0,1)^{2g}`.
pub fn translation_vector(field: &TranslationField, u: &[f64]) -> Result<Vec<f64>, TorusError> {
    Ok(field.lift(u)?.into_iter().map(reduce_mod1).collect())
}

/// Central-difference Jacobian of `t` in the real base coordinates, with
/// mod-1 jumps across the stencil removed by nearest-integer correction.
pub fn betti_jacobian(field: &TranslationField, u: &[f64], fd_step: f64) -> Result<DMatrix<f64>, TorusError> {
    let n = 2 * field.g();
    if u.len() != n {
        return Err(TorusError::DimensionMismatch { expected: n, found: u.len() });
    }
    if !(fd_step > 0.0) || !field.family().domain().contains_with_margin(u, fd_step) {
        return Err(TorusError::StencilOutOfDomain { point: u.to_vec(), step: fd_step });
    }
    let mut jac = DMatrix::zeros(n, n);
    let mut p = u.to_vec();
    for k in 0..n {
        p[k] = u[k] + fd_step;
        let plus = translation_vector(field, &p)?;
        p[k] = u[k] - fd_step;
        let minus = translation_vector(field, &p)?;
        p[k] = u[k];
        for i in 0..n {
            let d = plus[i] - minus[i];
            jac[(i, k)] = (d - d.round()) / (2.0 * fd_step);
        }
    }
    Ok(jac)
}

/// Multiplication by `i` on the base, in coordinates `(Re u1, Im u1, ...)`.
fn base_complex_structure(g: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(2 * g, 2 * g);
    for k in 0..g {
        j[(2 * k, 2 * k + 1)] = -1.0;
        j[(2 * k + 1, 2 * k)] = 1.0;
    }
    j
}

/// `‖Dt·j_U − j(u)·Dt‖ / (1 + ‖Dt‖)` in the Frobenius norm.
pub fn intertwining_defect(field: &TranslationField, u: &[f64], fd_step: f64) -> Result<f64, TorusError> {
    if !field.is_holomorphic_induced() {
        return Err(TorusError::NotHolomorphicInduced);
    }
    let dt = betti_jacobian(field, u, fd_step)?;
    let ju = base_complex_structure(field.g());
    let jf = field.chart().complex_structure(u)?;
    Ok((&dt * ju - jf * &dt).norm() / (1.0 + dt.norm()))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GenericRank {
    pub rank: usize,
    pub even: bool,
    pub full_rank: usize,
    pub samples: usize,
    /// `histogram[r]` counts sample points of numerical rank `r`.
    pub histogram: Vec<usize>,
}

pub fn numerical_rank(m: &DMatrix<f64>, rank_tol: f64) -> usize {
    let sv = m.singular_values();
    let top = sv.max();
    if !(top > 1e-12) {
        return 0;
    }
    sv.iter().filter(|&&s| s > rank_tol * top).count()
}

/// Maximal numerical rank of `Dt` over quasi-random points of the domain.
pub fn generic_rank(
    field: &TranslationField,
    samples: usize,
    seed: u64,
    rank_tol: f64,
) -> Result<GenericRank, TorusError> {
    let domain = field.family().domain();
    let n = domain.real_dim();
    let fd_step = DEFAULT_FD_FRACTION * domain.min_side();
    let qr = QuasiRandom::new(n, seed);
    let ranks: Vec<usize> = (0..samples.max(1))
        .into_par_iter()
        .map(|i| {
            let u = domain.from_unit(&qr.point(i as u64), 2.0 * fd_step);
            betti_jacobian(field, &u, fd_step).map(|j| numerical_rank(&j, rank_tol))
        })
        .collect::<Result<_, _>>()?;
    let mut histogram = vec![0; n + 1];
    for &r in &ranks {
        histogram[r] += 1;
    }
    let rank = ranks.iter().copied().max().unwrap_or(0);
    Ok(GenericRank { rank, even: rank % 2 == 0, full_rank: n, samples: ranks.len(), histogram })
}
