//! Sampling oracle for orbit closures, independent of the exact computation.

use std::collections::HashMap;

use serde::Serialize;

use super::OrbitError;
use crate::torus::chart::reduce_mod1;

/// Threshold for detecting a return of the orbit to the origin.
pub const RETURN_TOL: f64 = 1e-9;

const GRID_OFFSET: f64 = 0.754_877_666_246_692_7;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleEstimate {
    pub dimension: usize,
    pub components: usize,
    /// Set when the orbit was seen to close up exactly.
    pub period: Option<usize>,
    /// Raw correlation dimension at the radius used.
    pub raw_dimension: f64,
    pub scale: f64,
    pub dimension_scale: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScaleEstimate {
    /// Cell side used for the component count.
    pub scale: f64,
    /// Smaller radius of the pair used for the dimension.
    pub dimension_scale: f64,
    pub dimension: usize,
    pub raw_dimension: f64,
    pub components: usize,
}

/// ℓ∞ distance on the torus.
pub fn torus_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = (x - y).abs();
            d.min(1.0 - d)
        })
        .fold(0.0, f64::max)
}

fn orbit_points(t: &[f64], n: usize) -> Vec<Vec<f64>> {
    (0..n).map(|j| t.iter().map(|x| reduce_mod1(j as f64 * x)).collect()).collect()
}

struct Dsu(Vec<u32>);

impl Dsu {
    fn find(&mut self, mut x: u32) -> u32 {
        while self.0[x as usize] != x {
            let p = self.0[x as usize];
            self.0[x as usize] = self.0[p as usize];
            x = p;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb) as usize] = ra.min(rb);
            true
        } else {
            false
        }
    }
}

/// Points bucketed into cubes of side at least `scale`, with wraparound.
pub(crate) struct TorusGrid<'a> {
    points: &'a [Vec<f64>],
    cells: usize,
    buckets: HashMap<u128, Vec<u32>>,
}

impl<'a> TorusGrid<'a> {
    pub(crate) fn new(points: &'a [Vec<f64>], scale: f64) -> Self {
        let cells = ((1.0 / scale).floor() as usize).clamp(1, 1 << 15);
        let mut g = Self { points, cells, buckets: HashMap::new() };
        for (i, p) in points.iter().enumerate() {
            let key = g.key(&g.cell_of(p));
            g.buckets.entry(key).or_default().push(i as u32);
        }
        g
    }

    /// Cells are shifted by an irrational offset so that rational subtori
    /// never run exactly along cell boundaries.
    fn cell_of(&self, p: &[f64]) -> Vec<usize> {
        p.iter()
            .enumerate()
            .map(|(i, x)| {
                let y = reduce_mod1(x + GRID_OFFSET * (i + 1) as f64);
                ((y * self.cells as f64) as usize).min(self.cells - 1)
            })
            .collect()
    }

    fn key(&self, c: &[usize]) -> u128 {
        c.iter().fold(0u128, |acc, &x| (acc << 16) | x as u128)
    }

    fn neighbor_cells(&self, base: &[usize], mut f: impl FnMut(u128)) {
        let d = base.len();
        let span: i64 = if self.cells >= 3 { 1 } else { 0 };
        let width = (2 * span + 1) as usize;
        let mut c = vec![0usize; d];
        for code in 0..width.pow(d as u32) {
            let mut rest = code;
            for (ci, &b) in c.iter_mut().zip(base) {
                let off = (rest % width) as i64 - span;
                rest /= width;
                *ci = (b as i64 + off).rem_euclid(self.cells as i64) as usize;
            }
            f(self.key(&c));
        }
    }

    /// Connected components of occupied cells, adjacency including diagonals.
    pub(crate) fn occupied_components(&self) -> usize {
        if self.cells < 3 {
            return 1;
        }
        let keys: Vec<u128> = self.buckets.keys().copied().collect();
        let index: HashMap<u128, u32> = keys.iter().enumerate().map(|(i, &k)| (k, i as u32)).collect();
        let mut dsu = Dsu((0..keys.len() as u32).collect());
        let mut components = keys.len();
        for (i, k) in keys.iter().enumerate() {
            let base = self.cell_of(&self.points[self.buckets[k][0] as usize]);
            self.neighbor_cells(&base, |nk| {
                if let Some(&j) = index.get(&nk) {
                    if dsu.union(i as u32, j) {
                        components -= 1;
                    }
                }
            });
        }
        components
    }
}

/// Distinct return times needed inside the smaller ball before the
/// correlation integral at that radius is trusted.
pub const MIN_RETURNS: usize = 64;

/// Correlation integral of the orbit over all pairs. The pair `(i, j)` is
/// within `r` exactly when `‖(j - i)·t‖ < r`, so the sum over pairs collapses
/// to `Σ_k (N - k)·[‖k·t‖ < r]` over return times `k`.
/// Returns `(radius, distinct return times, weighted count)` for radii
/// `scale·2^j` up to `1/4`.
fn correlation_ladder(return_dist: &[f64], scale: f64) -> Vec<(f64, usize, f64)> {
    let n = return_dist.len() + 1;
    let mut out = Vec::new();
    let mut r = scale;
    while r <= 0.25 {
        let (mut returns, mut weight) = (0usize, 0.0);
        for (k, d) in return_dist.iter().enumerate() {
            if *d < r {
                returns += 1;
                weight += (n - k - 1) as f64;
            }
        }
        out.push((r, returns, weight));
        r *= 2.0;
    }
    out
}

/// Estimate `(r, c)` for the closure of `{j·t mod 1}` from `n_points` samples.
///
/// A return to within [`RETURN_TOL`] of the origin gives a finite orbit.
/// Otherwise the component count comes from connectivity of the occupied
/// cells of side `cluster_tol`, and the dimension from the all-pairs
/// correlation integral between radii `r` and `2r`, where `r` is the first of
/// `cluster_tol·2^j` with [`MIN_RETURNS`] return times. Both are repeated one
/// scale up and must agree.
pub fn orbit_sample_oracle(t: &[f64], n_points: usize, cluster_tol: f64) -> Result<OracleEstimate, OrbitError> {
    if n_points < 1000 {
        return Err(OrbitError::InvalidInput("the oracle needs at least 1000 points".into()));
    }
    if !(cluster_tol > 0.0 && cluster_tol < 0.25) {
        return Err(OrbitError::InvalidInput("cluster_tol must lie in (0, 1/4)".into()));
    }
    if t.is_empty() || t.len() > 8 || t.iter().any(|x| !x.is_finite()) {
        return Err(OrbitError::InvalidInput("t must have 1 to 8 finite entries".into()));
    }
    let zero = vec![0.0; t.len()];
    let points = orbit_points(t, n_points);
    if let Some(j) = (1..n_points).find(|&j| torus_dist(&points[j], &zero) < RETURN_TOL) {
        return Ok(OracleEstimate { dimension: 0, components: j, period: Some(j), raw_dimension: 0.0, scale: RETURN_TOL, dimension_scale: RETURN_TOL });
    }
    let components = [cluster_tol, 2.0 * cluster_tol].map(|s| TorusGrid::new(&points, s).occupied_components());
    let return_dist: Vec<f64> = points[1..].iter().map(|p| torus_dist(p, &zero)).collect();
    let ladder = correlation_ladder(&return_dist, cluster_tol);
    let start = ladder.iter().position(|&(_, returns, _)| returns >= MIN_RETURNS);
    let estimate = |j: Option<usize>, components: usize, scale: f64| {
        let (dimension_scale, raw_dimension) = match j {
            Some(j) if j + 1 < ladder.len() => (ladder[j].0, (ladder[j + 1].2 / ladder[j].2).log2()),
            _ => (f64::NAN, f64::NAN),
        };
        let dimension = if raw_dimension.is_finite() { raw_dimension.round().max(0.0) as usize } else { usize::MAX };
        ScaleEstimate { scale, dimension_scale, dimension, raw_dimension, components }
    };
    let fine = estimate(start, components[0], cluster_tol);
    let coarse = estimate(start.map(|j| j + 1), components[1], 2.0 * cluster_tol);
    if fine.dimension != coarse.dimension || fine.components != coarse.components || fine.dimension > t.len() {
        return Err(OrbitError::InconclusiveAtScale { fine, coarse });
    }
    Ok(OracleEstimate {
        dimension: fine.dimension,
        components: fine.components,
        period: None,
        raw_dimension: fine.raw_dimension,
        scale: cluster_tol,
        dimension_scale: fine.dimension_scale,
    })
}
