//! Toy model of two transversal fibrations on `T^{2g} × T^{2g}`: `f` translates
//! the second factor by `t_f` of the first, `g` the first by `t_g` of the second.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::density::torsion_points;
use super::oracle::torus_dist;
use super::OrbitError;
use crate::torus::{translation_vector, TranslationField};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GroupParams {
    pub k: u32,
    pub l: u32,
    pub n_iter: usize,
    pub epsilon: f64,
    pub starts: usize,
    pub seed: u64,
    /// Newton seeds per axis for locating the fixed sets.
    pub seeds_per_axis: usize,
    pub tol: f64,
    /// Net nodes per axis for the fixed-set covering radius.
    pub net_per_axis: usize,
}

impl Default for GroupParams {
    fn default() -> Self {
        Self {
            k: 1,
            l: 1,
            n_iter: 100_000,
            epsilon: 0.05,
            starts: 8,
            seed: 0,
            seeds_per_axis: 24,
            tol: 1e-9,
            net_per_axis: 41,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StartSummary {
    pub start: Vec<f64>,
    /// Fraction of the `ε`-cells of `T^{4g}` visited.
    pub cell_fraction: f64,
    pub fills: bool,
    pub distinct_points: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroupOrbitReport {
    pub g: usize,
    pub k: u32,
    pub l: u32,
    pub epsilon: f64,
    pub n_iter: usize,
    pub starts: Vec<StartSummary>,
    /// Fraction of random starts whose orbit `ε`-fills the space.
    pub fill_fraction: f64,
    pub fixed_f: usize,
    pub fixed_g: usize,
    /// `ℓ∞` covering radius of `F_k × G_l` on the torus, `None` if either is empty.
    pub fixed_covering_radius: Option<f64>,
}

fn to_base(field: &TranslationField, x: &[f64]) -> Vec<f64> {
    let d = field.family().domain();
    x.iter().zip(d.lo.iter().zip(&d.hi)).map(|(v, (lo, hi))| lo + v * (hi - lo)).collect()
}

fn to_unit(field: &TranslationField, b: &[f64]) -> Vec<f64> {
    let d = field.family().domain();
    b.iter().zip(d.lo.iter().zip(&d.hi)).map(|(v, (lo, hi))| (v - lo) / (hi - lo)).collect()
}

fn shift(y: &mut [f64], t: &[f64], k: f64) {
    for (a, b) in y.iter_mut().zip(t) {
        *a = (*a + k * b).rem_euclid(1.0);
        if *a >= 1.0 {
            *a = 0.0;
        }
    }
}

fn cell(p: &[f64], m: usize) -> Vec<u32> {
    p.iter().map(|x| ((x * m as f64) as usize).min(m - 1) as u32).collect()
}

/// `ℓ∞` covering radius of a point set on the unit torus against a regular net.
pub fn torus_covering_radius(set: &[Vec<f64>], dim: usize, per_axis: usize) -> Option<f64> {
    if set.is_empty() {
        return None;
    }
    let total = per_axis.pow(dim as u32);
    let r = (0..total)
        .into_par_iter()
        .map(|mut code| {
            let p: Vec<f64> = (0..dim)
                .map(|_| {
                    let i = code % per_axis;
                    code /= per_axis;
                    i as f64 / per_axis as f64
                })
                .collect();
            set.iter().map(|q| torus_dist(&p, q)).fold(f64::INFINITY, f64::min)
        })
        .reduce(|| 0.0, f64::max);
    Some(r)
}

fn walk(
    fields: (&TranslationField, &TranslationField),
    params: &GroupParams,
    start: Vec<f64>,
    rng: &mut ChaCha8Rng,
) -> Result<StartSummary, OrbitError> {
    let (tf, tg) = fields;
    let d = 2 * tf.g();
    let m = (1.0 / (2.0 * params.epsilon)).ceil() as usize;
    let total_cells = (m as f64).powi(2 * d as i32);
    let mut cells: HashSet<Vec<u32>> = HashSet::new();
    let mut points: HashSet<Vec<i64>> = HashSet::new();
    let mut p = start.clone();
    let mut last: Option<usize> = None;
    let quant = |p: &[f64]| p.iter().map(|x| (x * 1e9).round() as i64 % 1_000_000_000).collect::<Vec<_>>();
    for step in 0..=params.n_iter {
        cells.insert(cell(&p, m));
        points.insert(quant(&p));
        if step == params.n_iter {
            break;
        }
        let (x, y) = p.split_at_mut(d);
        // non-backtracking: never undo the previous step
        let mut c = rng.gen_range(0..3);
        if let Some(prev) = last {
            if c >= prev ^ 1 {
                c += 1;
            }
        } else {
            c = rng.gen_range(0..4);
        }
        last = Some(c);
        match c {
            c @ (0 | 1) => {
                let t = translation_vector(tf, &to_base(tf, x))?;
                shift(y, &t, if c == 0 { 1.0 } else { -1.0 } * params.k as f64);
            }
            c => {
                let t = translation_vector(tg, &to_base(tg, y))?;
                shift(x, &t, if c == 2 { 1.0 } else { -1.0 } * params.l as f64);
            }
        }
    }
    let cell_fraction = cells.len() as f64 / total_cells;
    Ok(StartSummary { start, cell_fraction, fills: cells.len() as f64 >= total_cells, distinct_points: points.len() })
}

/// Random walks of `Γ_{k,l} = <f^k, g^l>` from seeded starts, plus the common
/// fixed set `F_k × G_l` located by Newton refinement onto torsion values.
pub fn group_orbit_scan(
    field_f: &TranslationField,
    field_g: &TranslationField,
    params: &GroupParams,
) -> Result<GroupOrbitReport, OrbitError> {
    let g = field_f.g();
    if field_g.g() != g {
        return Err(OrbitError::DimensionMismatch { expected: 2 * g, found: 2 * field_g.g() });
    }
    if params.k == 0 || params.l == 0 || !(params.epsilon > 0.0 && params.epsilon < 0.5) {
        return Err(OrbitError::InvalidInput("k, l must be positive and epsilon in (0, 1/2)".into()));
    }
    let d = 2 * g;
    let starts: Vec<StartSummary> = (0..params.starts)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
            rng.set_stream(i as u64);
            let start: Vec<f64> = (0..2 * d).map(|_| rng.gen::<f64>()).collect();
            walk((field_f, field_g), params, start, &mut rng)
        })
        .collect::<Result<_, _>>()?;
    let filled = starts.iter().filter(|s| s.fills).count();

    let q = params.k.max(params.l).max(1);
    let ff: Vec<Vec<f64>> = torsion_points(field_f, params.k, params.seeds_per_axis, q, params.tol)
        .iter()
        .map(|b| to_unit(field_f, b))
        .collect();
    let fg: Vec<Vec<f64>> = torsion_points(field_g, params.l, params.seeds_per_axis, q, params.tol)
        .iter()
        .map(|b| to_unit(field_g, b))
        .collect();
    // the product metric is the max of the factor metrics
    let fixed_covering_radius = match (
        torus_covering_radius(&ff, d, params.net_per_axis),
        torus_covering_radius(&fg, d, params.net_per_axis),
    ) {
        (Some(a), Some(b)) => Some(a.max(b)),
        _ => None,
    };
    Ok(GroupOrbitReport {
        g,
        k: params.k,
        l: params.l,
        epsilon: params.epsilon,
        n_iter: params.n_iter,
        fill_fraction: filled as f64 / starts.len().max(1) as f64,
        starts,
        fixed_f: ff.len(),
        fixed_g: fg.len(),
        fixed_covering_radius,
    })
}
