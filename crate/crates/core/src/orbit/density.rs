//! Scans of a translation field over its base: per-point orbit-closure
//! strata, Newton refinement onto lower strata, and covering radii.

use nalgebra::{DMatrix, DVector};
use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cover::{covering_radius, unit_net};
use super::resonance::resonance_detect;
use super::OrbitError;
use crate::torus::{betti_jacobian, generic_rank, translation_vector, TranslationField, DEFAULT_FD_FRACTION, DEFAULT_RANK_TOL};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DensityParams {
    /// Grid nodes per real base axis; a single entry applies to every axis.
    pub grid: Vec<usize>,
    /// Relation bound `Q` for resonance detection.
    pub q: u32,
    pub tol: f64,
    /// Newton seeds per axis (cell centers), independent of the grid.
    pub seeds_per_axis: usize,
    /// Largest component count `c` requested for each stratum `r < 2g`.
    pub c_max: u32,
    /// `‖m‖∞` bound for single-relation targets.
    pub relation_bound: i64,
    /// Evaluation-net nodes per axis for covering radii (default by dimension).
    pub net_per_axis: Option<usize>,
    pub rank_samples: usize,
    pub seed: u64,
}

impl Default for DensityParams {
    fn default() -> Self {
        Self {
            grid: vec![200],
            q: 30,
            tol: 1e-9,
            seeds_per_axis: 32,
            c_max: 3,
            relation_bound: 3,
            net_per_axis: None,
            rank_samples: 64,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanPoint {
    pub b: Vec<f64>,
    pub t: Vec<f64>,
    pub r: usize,
    pub c: u64,
    pub relations: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RefinedPoint {
    pub b: Vec<f64>,
    pub t: Vec<f64>,
    /// Stratum aimed at.
    pub target: usize,
    pub r: usize,
    pub c: u64,
    pub relations: Vec<Vec<i64>>,
    /// `max |M·t(b) - target|` at the refined point.
    pub residual: f64,
    /// Kantorovich quantity `h = βγη`; existence is certified when `h <= 1/2`.
    pub kantorovich_h: Option<f64>,
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StratumCoverage {
    pub s: usize,
    pub grid_points: usize,
    pub refined_points: usize,
    /// Covering radius of the stratum in coordinates normalized to the unit cube.
    pub covering_radius: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RealizedPair {
    pub r: usize,
    pub c: u64,
    pub realized: bool,
    pub certified: bool,
    pub point: Option<RefinedPoint>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityReport {
    pub g: usize,
    pub grid: Vec<usize>,
    pub q: u32,
    pub tol: f64,
    pub generic_rank: usize,
    pub warnings: Vec<String>,
    pub coverage: Vec<StratumCoverage>,
    pub pairs: Vec<RealizedPair>,
    #[serde(skip)]
    pub points: Vec<ScanPoint>,
    pub refined: Vec<RefinedPoint>,
}

impl DensityReport {
    pub fn covering_radius(&self, s: usize) -> Option<f64> {
        self.coverage.iter().find(|c| c.s == s).and_then(|c| c.covering_radius)
    }

    /// Rows `(source, b_1..b_n, r, c, generators)` for the grid and refined points.
    pub fn csv_rows(&self) -> (Vec<String>, Vec<Vec<String>>) {
        let n = 2 * self.g;
        let mut header = vec!["source".to_string()];
        header.extend((1..=n).map(|i| format!("b{i}")));
        header.extend(["r", "c", "generators"].map(String::from));
        let fmt_rel = |rels: &[Vec<i64>]| {
            rels.iter()
                .map(|m| m.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
                .collect::<Vec<_>>()
                .join(";")
        };
        let mut rows = Vec::with_capacity(self.points.len() + self.refined.len());
        for p in &self.points {
            let mut row = vec!["grid".to_string()];
            row.extend(p.b.iter().map(|x| format!("{x:?}")));
            row.extend([p.r.to_string(), p.c.to_string(), fmt_rel(&p.relations)]);
            rows.push(row);
        }
        for p in &self.refined {
            let mut row = vec!["refined".to_string()];
            row.extend(p.b.iter().map(|x| format!("{x:?}")));
            row.extend([p.r.to_string(), p.c.to_string(), fmt_rel(&p.relations)]);
            rows.push(row);
        }
        (header, rows)
    }
}

fn lattice_nodes(lo: &[f64], hi: &[f64], per_axis: &[usize], centers: bool) -> Vec<Vec<f64>> {
    let d = lo.len();
    let total: usize = per_axis.iter().product();
    (0..total)
        .map(|mut code| {
            let mut b = vec![0.0; d];
            for k in (0..d).rev() {
                let n = per_axis[k];
                let i = code % n;
                code /= n;
                let f = if centers {
                    (i as f64 + 0.5) / n as f64
                } else if n == 1 {
                    0.5
                } else {
                    i as f64 / (n - 1) as f64
                };
                b[k] = lo[k] + f * (hi[k] - lo[k]);
            }
            b
        })
        .collect()
}

fn primitive_vectors(d: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut m = vec![-bound; d];
    loop {
        let first = m.iter().find(|&&x| x != 0);
        if first.is_some_and(|&x| x > 0) && m.iter().fold(0i64, |a, &b| a.gcd(&b)) == 1 {
            out.push(m.clone());
        }
        let mut i = 0;
        while i < d {
            m[i] += 1;
            if m[i] <= bound {
                break;
            }
            m[i] = -bound;
            i += 1;
        }
        if i == d {
            break;
        }
    }
    out
}

fn unit_rows(d: usize, subset: &[usize]) -> Vec<Vec<i64>> {
    subset.iter().map(|&i| (0..d).map(|j| i64::from(i == j)).collect()).collect()
}

fn subsets(d: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if d < k {
        return vec![];
    }
    let mut out = subsets(d - 1, k);
    for mut s in subsets(d - 1, k - 1) {
        s.push(d - 1);
        out.push(s);
    }
    out
}

/// Relation systems whose common zero set has codimension `d - s`.
fn systems(d: usize, s: usize, relation_bound: i64) -> Vec<Vec<Vec<i64>>> {
    if s == 0 {
        vec![unit_rows(d, &(0..d).collect::<Vec<_>>())]
    } else if s + 1 == d {
        primitive_vectors(d, relation_bound).into_iter().map(|m| vec![m]).collect()
    } else {
        subsets(d, d - s).iter().map(|sub| unit_rows(d, sub)).collect()
    }
}

fn apply(m: &[Vec<i64>], x: &[f64]) -> DVector<f64> {
    DVector::from_iterator(m.len(), m.iter().map(|row| row.iter().zip(x).map(|(a, b)| *a as f64 * b).sum()))
}

fn row_matrix(m: &[Vec<i64>]) -> DMatrix<f64> {
    DMatrix::from_fn(m.len(), m[0].len(), |i, j| m[i][j] as f64)
}

fn pinv_solve(j: &DMatrix<f64>, f: &DVector<f64>) -> Option<(DVector<f64>, f64)> {
    let svd = j.clone().svd(true, true);
    let smax = svd.singular_values.max();
    if !(smax > 1e-12) {
        return None;
    }
    let smin = svd.singular_values.min();
    if smin < 1e-10 * smax {
        return None;
    }
    let x = svd.solve(f, 0.0).ok()?;
    Some((x, smin))
}

struct Ctx<'a> {
    field: &'a TranslationField,
    fd: f64,
    side: f64,
    q: u32,
    tol: f64,
}

impl Ctx<'_> {
    fn jac(&self, m: &[Vec<i64>], b: &[f64]) -> Option<DMatrix<f64>> {
        Some(row_matrix(m) * betti_jacobian(self.field, b, self.fd).ok()?)
    }

    fn inside(&self, b: &[f64], margin: f64) -> bool {
        self.field.family().domain().contains_with_margin(b, margin)
    }

    /// Newton with pseudo-inverse steps for `M·lift(t(b)) = target`.
    fn newton(&self, b0: &[f64], m: &[Vec<i64>], target: &DVector<f64>) -> Option<(Vec<f64>, f64)> {
        let mut b = b0.to_vec();
        let mut res = f64::INFINITY;
        for _ in 0..40 {
            let f = apply(m, &self.field.lift(&b).ok()?) - target;
            res = f.amax();
            if res < 1e-13 {
                break;
            }
            let (step, _) = pinv_solve(&self.jac(m, &b)?, &f)?;
            let len = step.norm();
            let scale = if len > 0.25 * self.side { 0.25 * self.side / len } else { 1.0 };
            for (bi, si) in b.iter_mut().zip(step.iter()) {
                *bi -= scale * si;
            }
            if !self.inside(&b, 2.0 * self.fd) {
                return None;
            }
        }
        (res < 1e-11).then_some((b, res))
    }

    /// Kantorovich-style check at an approximate zero: `β = ‖J⁺‖`,
    /// `η = β‖F‖`, `γ` twice the largest observed Jacobian difference quotient.
    fn kantorovich(&self, b: &[f64], m: &[Vec<i64>], target: &DVector<f64>) -> Option<f64> {
        let f = apply(m, &self.field.lift(b).ok()?) - target;
        let j0 = self.jac(m, b)?;
        let (_, smin) = pinv_solve(&j0, &f)?;
        let beta = 1.0 / smin;
        let eta = beta * f.norm();
        let rho = 1e-3 * self.side;
        let mut lip: f64 = 0.0;
        for k in 0..b.len() {
            for sign in [-1.0, 1.0] {
                let mut p = b.to_vec();
                p[k] += sign * rho;
                if !self.inside(&p, 2.0 * self.fd) {
                    continue;
                }
                lip = lip.max((self.jac(m, &p)? - &j0).norm() / rho);
            }
        }
        let gamma = 2.0 * lip + 1e-9;
        let h = beta * gamma * eta;
        (self.inside(b, 2.0 * eta)).then_some(h)
    }

    fn finish(&self, b: Vec<f64>, residual: f64, target_s: usize, m: &[Vec<i64>], v: &DVector<f64>) -> Option<RefinedPoint> {
        let t = translation_vector(self.field, &b).ok()?;
        let res = resonance_detect(&t, self.q, self.tol).ok()?;
        let kantorovich_h = self.kantorovich(&b, m, v);
        let certified = residual == 0.0 || kantorovich_h.is_some_and(|h| h <= 0.5);
        Some(RefinedPoint {
            b,
            t,
            target: target_s,
            r: res.dimension,
            c: res.components,
            relations: res.relations,
            residual,
            kantorovich_h,
            certified,
        })
    }

    fn refine(&self, seed: &[f64], target_s: usize, m: &[Vec<i64>], v: DVector<f64>) -> Option<RefinedPoint> {
        let (b, residual) = self.newton(seed, m, &v)?;
        self.finish(b, residual, target_s, m, &v)
    }

    /// Nearest target of stratum `s` with `q·‖M‖∞ <= Q`, by estimated Newton step.
    fn best_target(&self, seed: &[f64], lift: &[f64], jac: &DMatrix<f64>, sys: &[Vec<Vec<i64>>]) -> Option<(Vec<Vec<i64>>, DVector<f64>)> {
        let mut best: Option<(f64, Vec<Vec<i64>>, DVector<f64>)> = None;
        for m in sys {
            let norm = m.iter().flatten().map(|x| x.abs()).max().unwrap_or(1).max(1) as u32;
            let jm = row_matrix(m) * jac;
            let cur = apply(m, lift);
            for q in 1..=self.q / norm {
                let qf = q as f64;
                let v = cur.map(|x| (x * qf).round() / qf);
                let Some((step, _)) = pinv_solve(&jm, &(&cur - &v)) else { continue };
                let len = step.norm();
                if best.as_ref().map_or(true, |(l, _, _)| len < *l) {
                    best = Some((len, m.clone(), v));
                }
            }
        }
        let _ = seed;
        best.map(|(_, m, v)| (m, v))
    }

    /// Targets with exact component count `c` for `r = 0` or `r = d - 1`.
    fn pair_target(&self, lift: &[f64], jac: &DMatrix<f64>, r: usize, c: u32, bound: i64) -> Option<(Vec<Vec<i64>>, DVector<f64>)> {
        let d = lift.len();
        let cf = c as f64;
        let mut best: Option<(f64, Vec<Vec<i64>>, DVector<f64>)> = None;
        let mut consider = |m: Vec<Vec<i64>>, v: DVector<f64>, cur: &DVector<f64>| {
            let jm = row_matrix(&m) * jac;
            if let Some((step, _)) = pinv_solve(&jm, &(cur - &v)) {
                let len = step.norm();
                if best.as_ref().map_or(true, |(l, _, _)| len < *l) {
                    best = Some((len, m, v));
                }
            }
        };
        if r == 0 {
            if c > self.q {
                return None;
            }
            let m = unit_rows(d, &(0..d).collect::<Vec<_>>());
            let cur = apply(&m, lift);
            let base: Vec<i64> = cur.iter().map(|x| (x * cf).round() as i64).collect();
            for code in 0..3usize.pow(d as u32) {
                let mut rest = code;
                let k: Vec<i64> = base
                    .iter()
                    .map(|&x| {
                        let off = (rest % 3) as i64 - 1;
                        rest /= 3;
                        x + off
                    })
                    .collect();
                if k.iter().fold(c as i64, |a, &b| a.gcd(&b)) != 1 {
                    continue;
                }
                let v = DVector::from_iterator(d, k.iter().map(|&x| x as f64 / cf));
                consider(m.clone(), v, &cur);
            }
        } else if r + 1 == d {
            for mvec in primitive_vectors(d, bound) {
                let norm = mvec.iter().map(|x| x.abs()).max().unwrap() as u32;
                if c * norm > self.q {
                    continue;
                }
                let m = vec![mvec];
                let cur = apply(&m, lift);
                let base = (cur[0] * cf).round() as i64;
                for j in [base - 1, base, base + 1] {
                    if j.gcd(&(c as i64)) == 1 {
                        consider(m.clone(), DVector::from_element(1, j as f64 / cf), &cur);
                    }
                }
            }
        }
        best.map(|(_, m, v)| (m, v))
    }
}

/// Base points in a seed grid where `k·t(b)` is integral, verified by resonance
/// detection and deduplicated.
pub(crate) fn torsion_points(field: &TranslationField, k: u32, seeds_per_axis: usize, q: u32, tol: f64) -> Vec<Vec<f64>> {
    let domain = field.family().domain();
    let d = 2 * field.g();
    let ctx = Ctx { field, fd: DEFAULT_FD_FRACTION * domain.min_side(), side: domain.min_side(), q, tol };
    let m = unit_rows(d, &(0..d).collect::<Vec<_>>());
    let kf = k as f64;
    let seeds = lattice_nodes(&domain.lo, &domain.hi, &vec![seeds_per_axis; d], true);
    let found: Vec<Vec<f64>> = seeds
        .par_iter()
        .filter_map(|seed| {
            let lift = field.lift(seed).ok()?;
            let v = DVector::from_iterator(d, lift.iter().map(|x| (x * kf).round() / kf));
            let (b, _) = ctx.newton(seed, &m, &v)?;
            let t = translation_vector(field, &b).ok()?;
            let res = resonance_detect(&t, q, tol).ok()?;
            (res.dimension == 0 && u64::from(k) % res.components == 0).then_some(b)
        })
        .collect();
    let mut seen = std::collections::HashSet::new();
    found
        .into_iter()
        .filter(|b| seen.insert(b.iter().map(|x| (x * 1e7).round() as i64).collect::<Vec<_>>()))
        .collect()
}

/// Classify a grid of base points and refine toward every stratum below `2g`.
pub fn density_scan(field: &TranslationField, params: &DensityParams) -> Result<DensityReport, OrbitError> {
    let g = field.g();
    let d = 2 * g;
    let domain = field.family().domain().clone();
    let grid: Vec<usize> = match params.grid.len() {
        1 => vec![params.grid[0]; d],
        n if n == d => params.grid.clone(),
        n => return Err(OrbitError::DimensionMismatch { expected: d, found: n }),
    };
    if grid.iter().any(|&n| n == 0) || params.seeds_per_axis == 0 {
        return Err(OrbitError::InvalidInput("grid and seed counts must be positive".into()));
    }
    if params.q == 0 {
        return Err(OrbitError::InvalidInput("q must be at least 1".into()));
    }
    let mut warnings = Vec::new();
    let rank = generic_rank(field, params.rank_samples.max(1), params.seed, DEFAULT_RANK_TOL)?;
    if rank.rank < d {
        warnings.push(format!(
            "RankDeficientField: generic rank {} < {}; only strata reachable by the image are realized",
            rank.rank, d
        ));
    }

    let nodes = lattice_nodes(&domain.lo, &domain.hi, &grid, false);
    let points: Vec<ScanPoint> = nodes
        .into_par_iter()
        .map(|b| -> Result<ScanPoint, OrbitError> {
            let t = translation_vector(field, &b)?;
            let res = resonance_detect(&t, params.q, params.tol)?;
            Ok(ScanPoint { b, t, r: res.dimension, c: res.components, relations: res.relations })
        })
        .collect::<Result<_, _>>()?;

    let ctx = Ctx {
        field,
        fd: DEFAULT_FD_FRACTION * domain.min_side(),
        side: domain.min_side(),
        q: params.q,
        tol: params.tol,
    };
    let seeds = lattice_nodes(&domain.lo, &domain.hi, &vec![params.seeds_per_axis; d], true);
    let strata_systems: Vec<Vec<Vec<Vec<i64>>>> = (0..d).map(|s| systems(d, s, params.relation_bound)).collect();
    let (ctx, strata_systems) = (&ctx, &strata_systems);
    let refined: Vec<RefinedPoint> = seeds
        .par_iter()
        .flat_map_iter(|seed| {
            let lift = field.lift(seed).ok();
            let jac = betti_jacobian(field, seed, ctx.fd).ok();
            (0..d).filter_map(move |s| {
                let (lift, jac) = (lift.as_ref()?, jac.as_ref()?);
                let (m, v) = ctx.best_target(seed, lift, jac, &strata_systems[s])?;
                ctx.refine(seed, s, &m, v).filter(|p| p.r == s)
            })
            .collect::<Vec<_>>()
        })
        .collect();

    let mut pairs = Vec::new();
    for r in [0, d - 1] {
        if r == d - 1 && r == 0 {
            continue;
        }
        for c in 1..=params.c_max {
            let found = seeds.par_iter().find_map_first(|seed| {
                let lift = field.lift(seed).ok()?;
                let jac = betti_jacobian(field, seed, ctx.fd).ok()?;
                let (m, v) = ctx.pair_target(&lift, &jac, r, c, params.relation_bound)?;
                ctx.refine(seed, r, &m, v).filter(|p| p.r == r && p.c == c as u64 && p.certified)
            });
            pairs.push(RealizedPair {
                r,
                c: c as u64,
                realized: found.is_some(),
                certified: found.as_ref().is_some_and(|p| p.certified),
                point: found,
            });
        }
    }

    let normalize = |b: &[f64]| -> Vec<f64> {
        b.iter().zip(domain.lo.iter().zip(&domain.hi)).map(|(x, (lo, hi))| (x - lo) / (hi - lo)).collect()
    };
    let net_n = params.net_per_axis.unwrap_or(match d {
        2 => 101,
        4 => 11,
        _ => 5,
    });
    let net = unit_net(d, net_n);
    let coverage = (0..=d)
        .map(|s| {
            let mut set: Vec<Vec<f64>> = points.iter().filter(|p| p.r == s).map(|p| normalize(&p.b)).collect();
            let grid_points = set.len();
            let refined_set: Vec<Vec<f64>> = refined
                .iter()
                .chain(pairs.iter().filter_map(|p| p.point.as_ref()))
                .filter(|p| p.r == s)
                .map(|p| normalize(&p.b))
                .collect();
            let refined_points = refined_set.len();
            set.extend(refined_set);
            StratumCoverage { s, grid_points, refined_points, covering_radius: covering_radius(&net, &set) }
        })
        .collect();

    Ok(DensityReport {
        g,
        grid,
        q: params.q,
        tol: params.tol,
        generic_rank: rank.rank,
        warnings,
        coverage,
        pairs,
        points,
        refined,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::examples::{upper_half_plane_field, zero_field};

    fn small(grid: usize) -> DensityParams {
        DensityParams { grid: vec![grid], seeds_per_axis: 8, c_max: 2, ..Default::default() }
    }

    #[test]
    fn helper_enumerations() {
        assert_eq!(primitive_vectors(2, 1), vec![vec![1, -1], vec![1, 0], vec![0, 1], vec![1, 1]]);
        assert_eq!(subsets(4, 2).len(), 6);
        assert_eq!(systems(2, 0, 3).len(), 1);
        assert_eq!(lattice_nodes(&[0.0], &[1.0], &[3], false), vec![vec![0.0], vec![0.5], vec![1.0]]);
    }

    #[test]
    fn zero_field_is_fixed_everywhere() {
        let rep = density_scan(&zero_field(), &small(5)).unwrap();
        assert!(rep.points.iter().all(|p| p.r == 0 && p.c == 1));
        assert!(!rep.warnings.is_empty());
        assert_eq!(rep.covering_radius(2), None);
    }

    #[test]
    fn maximal_variation_realizes_all_strata() {
        let rep = density_scan(&upper_half_plane_field(), &small(37)).unwrap();
        assert!(rep.warnings.is_empty());
        assert_eq!(rep.generic_rank, 2);
        for s in 0..=2 {
            assert!(rep.covering_radius(s).is_some(), "stratum {s}");
        }
        assert!(rep.pairs.iter().all(|p| p.realized && p.certified), "{:?}", rep.pairs);
        assert!(rep.refined.iter().all(|p| p.residual < 1e-11));
    }

    #[test]
    fn nested_grids_do_not_increase_radii() {
        let a = density_scan(&upper_half_plane_field(), &small(19)).unwrap();
        let b = density_scan(&upper_half_plane_field(), &small(37)).unwrap();
        for s in 0..=2 {
            let (ra, rb) = (a.covering_radius(s).unwrap(), b.covering_radius(s).unwrap());
            assert!(rb <= ra, "s={s}: {rb} > {ra}");
        }
    }
}
