use std::sync::Arc;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use super::quadrature::{compensated_sum, tensor_rule, QuadratureSpec};
use super::VolumeError;
use crate::expr::Expression;
use crate::torus::family::check_expression;
use crate::torus::{betti_jacobian, PeriodFamily, TorusError, TranslationField, DEFAULT_FD_FRACTION};

/// Multisection given by `d` graph branches `m: U → ℝ^{2g}` in Betti coordinates.
#[derive(Clone, Debug)]
pub struct Multisection {
    family: Arc<PeriodFamily>,
    branches: Vec<Vec<Expression>>,
}

impl Multisection {
    pub fn new(family: Arc<PeriodFamily>, branches: Vec<Vec<Expression>>) -> Result<Self, VolumeError> {
        let n = 2 * family.g();
        if branches.is_empty() {
            return Err(VolumeError::InvalidInput("a multisection needs at least one branch".into()));
        }
        for b in &branches {
            if b.len() != n {
                return Err(VolumeError::DimensionMismatch { expected: n, found: b.len() });
            }
            for e in b {
                check_expression(e, family.g(), false)?;
            }
        }
        Ok(Self { family, branches })
    }

    /// The zero section.
    pub fn zero(family: Arc<PeriodFamily>) -> Self {
        let n = 2 * family.g();
        Self { family, branches: vec![vec![Expression::constant(num_complex::Complex64::new(0.0, 0.0)); n]] }
    }

    pub fn family(&self) -> &Arc<PeriodFamily> {
        &self.family
    }

    pub fn degree(&self) -> usize {
        self.branches.len()
    }

    pub fn branches(&self) -> &[Vec<Expression>] {
        &self.branches
    }

    pub fn eval_branch(&self, i: usize, u: &[f64]) -> Result<Vec<f64>, VolumeError> {
        let z = self.family.complex_point(u)?;
        let v: Vec<f64> = self.branches[i].iter().map(|e| e.eval(&z).re).collect();
        if v.iter().any(|x| !x.is_finite()) {
            return Err(TorusError::NonFinite(u.to_vec()).into());
        }
        Ok(v)
    }

    fn jacobian(&self, i: usize, u: &[f64], h: f64) -> Result<DMatrix<f64>, VolumeError> {
        let n = u.len();
        let mut jac = DMatrix::zeros(n, n);
        let mut p = u.to_vec();
        for k in 0..n {
            p[k] = u[k] + h;
            let plus = self.eval_branch(i, &p)?;
            p[k] = u[k] - h;
            let minus = self.eval_branch(i, &p)?;
            p[k] = u[k];
            for r in 0..n {
                jac[(r, k)] = (plus[r] - minus[r]) / (2.0 * h);
            }
        }
        Ok(jac)
    }
}

/// `√det(I + JᵀJ)` for the graph differential `J = Dm + n·Dt`.
fn graph_element(dm: &DMatrix<f64>, dt: &DMatrix<f64>, n: f64) -> f64 {
    let j = dm + dt * n;
    let gram = DMatrix::identity(j.ncols(), j.ncols()) + j.transpose() * &j;
    gram.determinant().max(0.0).sqrt()
}

/// Volume element of the graph `u ↦ (u, m(u) + n·t(u))` at `u`.
pub fn wedge_volume_integrand(
    field: &TranslationField,
    multisection: &Multisection,
    branch: usize,
    n: i64,
    u: &[f64],
    fd_step: f64,
) -> Result<f64, VolumeError> {
    check_pair(field, multisection)?;
    if branch >= multisection.degree() {
        return Err(VolumeError::InvalidInput(format!("branch {branch} out of range")));
    }
    let dt = betti_jacobian(field, u, fd_step)?;
    let dm = multisection.jacobian(branch, u, fd_step)?;
    Ok(graph_element(&dm, &dt, n as f64))
}

fn check_pair(field: &TranslationField, ms: &Multisection) -> Result<(), VolumeError> {
    if field.g() != ms.family.g() {
        return Err(VolumeError::DimensionMismatch { expected: 2 * field.g(), found: 2 * ms.family.g() });
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VolumeSeries {
    pub iterates: Vec<i64>,
    pub volumes: Vec<f64>,
    pub quadrature_error: Vec<f64>,
}

impl VolumeSeries {
    pub fn csv_rows(&self) -> (Vec<String>, Vec<Vec<String>>) {
        let header = ["n", "volume", "error"].map(String::from).to_vec();
        let rows = (0..self.iterates.len())
            .map(|i| vec![self.iterates[i].to_string(), format!("{:?}", self.volumes[i]), format!("{:?}", self.quadrature_error[i])])
            .collect();
        (header, rows)
    }
}

/// Jacobians `(Dm_i, Dt)` at every node of a rule, with weights.
struct NodeData {
    weight: f64,
    dt: DMatrix<f64>,
    dms: Vec<DMatrix<f64>>,
}

fn node_data(field: &TranslationField, ms: &Multisection, order: usize, panels: usize) -> Result<Vec<NodeData>, VolumeError> {
    let domain = field.family().domain();
    let fd = DEFAULT_FD_FRACTION * domain.min_side();
    tensor_rule(&domain.lo, &domain.hi, order, panels)
        .into_par_iter()
        .map(|(u, weight)| {
            let dt = betti_jacobian(field, &u, fd)?;
            let dms = (0..ms.degree()).map(|i| ms.jacobian(i, &u, fd)).collect::<Result<_, _>>()?;
            Ok(NodeData { weight, dt, dms })
        })
        .collect()
}

fn integrate(nodes: &[NodeData], f: impl Fn(&NodeData) -> f64 + Sync) -> f64 {
    let vals: Vec<f64> = nodes.par_iter().map(|nd| nd.weight * f(nd)).collect();
    compensated_sum(vals)
}

fn branch_volume(nodes: &[NodeData], n: i64) -> f64 {
    integrate(nodes, |nd| nd.dms.iter().map(|dm| graph_element(dm, &nd.dt, n as f64)).sum())
}

/// Volumes of `fⁿ(M)` over the base for every `n`, with errors estimated from
/// the difference between the rule and its half-order companion.
pub fn pushforward_series(
    field: &TranslationField,
    multisection: &Multisection,
    iterates: &[i64],
    spec: &QuadratureSpec,
) -> Result<VolumeSeries, VolumeError> {
    check_pair(field, multisection)?;
    if spec.order < 2 || spec.max_panels == 0 {
        return Err(VolumeError::InvalidInput("quadrature order must be >= 2 and panels >= 1".into()));
    }
    let mut panels = 1;
    loop {
        let fine = node_data(field, multisection, spec.order, panels)?;
        let coarse = node_data(field, multisection, spec.order / 2, panels)?;
        let mut volumes = Vec::with_capacity(iterates.len());
        let mut errors = Vec::with_capacity(iterates.len());
        let mut worst: Option<(f64, f64)> = None;
        for &n in iterates {
            let v = branch_volume(&fine, n);
            let e = (v - branch_volume(&coarse, n)).abs();
            if e > spec.rel_tol * v.abs() && worst.map_or(true, |(_, we)| e > we) {
                worst = Some((v, e));
            }
            volumes.push(v);
            errors.push(e);
        }
        match worst {
            None => return Ok(VolumeSeries { iterates: iterates.to_vec(), volumes, quadrature_error: errors }),
            Some((estimate, error)) if 2 * panels > spec.max_panels => {
                return Err(VolumeError::QuadratureDidNotConverge { estimate, error, target: spec.rel_tol })
            }
            Some(_) => panels *= 2,
        }
    }
}

pub fn pushforward_volume(
    field: &TranslationField,
    multisection: &Multisection,
    n: i64,
    spec: &QuadratureSpec,
) -> Result<(f64, f64), VolumeError> {
    let s = pushforward_series(field, multisection, &[n], spec)?;
    Ok((s.volumes[0], s.quadrature_error[0]))
}

/// `∫_U |det Dt|`, the expected leading coefficient of a maximal-variation series.
pub fn det_integral(field: &TranslationField, spec: &QuadratureSpec) -> Result<f64, VolumeError> {
    let ms = Multisection::zero(field.family().clone());
    let nodes = node_data(field, &ms, spec.order, 1)?;
    Ok(integrate(&nodes, |nd| nd.dt.determinant().abs()))
}
