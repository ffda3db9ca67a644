//! Covering radii of finite point sets against a fixed evaluation net.

use std::collections::HashMap;

use rayon::prelude::*;

/// Nodes `i/(n-1)` per axis of the unit cube (a single node `1/2` when `n = 1`).
pub fn unit_net(dim: usize, per_axis: usize) -> Vec<Vec<f64>> {
    let coord = |i: usize| if per_axis <= 1 { 0.5 } else { i as f64 / (per_axis - 1) as f64 };
    let total = per_axis.max(1).pow(dim as u32);
    (0..total)
        .map(|mut code| {
            (0..dim)
                .map(|_| {
                    let i = code % per_axis.max(1);
                    code /= per_axis.max(1);
                    coord(i)
                })
                .collect()
        })
        .collect()
}

/// Euclidean nearest-neighbor queries on points of the unit cube.
pub struct UnitCubeIndex<'a> {
    points: &'a [Vec<f64>],
    cells: usize,
    buckets: HashMap<Vec<usize>, Vec<u32>>,
}

impl<'a> UnitCubeIndex<'a> {
    pub fn new(points: &'a [Vec<f64>]) -> Self {
        let dim = points.first().map_or(1, |p| p.len()).max(1);
        let cells = ((points.len() as f64).powf(1.0 / dim as f64).round() as usize).clamp(1, 256);
        let mut buckets: HashMap<Vec<usize>, Vec<u32>> = HashMap::new();
        for (i, p) in points.iter().enumerate() {
            buckets.entry(cell_of(p, cells)).or_default().push(i as u32);
        }
        Self { points, cells, buckets }
    }

    pub fn nearest_distance(&self, p: &[f64]) -> Option<f64> {
        if self.points.is_empty() {
            return None;
        }
        let c = cell_of(p, self.cells);
        let h = 1.0 / self.cells as f64;
        let mut best = f64::INFINITY;
        for rho in 0..=self.cells {
            visit_shell(&c, rho, self.cells, |cell| {
                if let Some(b) = self.buckets.get(cell) {
                    for &j in b {
                        best = best.min(dist(p, &self.points[j as usize]));
                    }
                }
            });
            if best <= rho as f64 * h {
                break;
            }
        }
        Some(best)
    }
}

fn cell_of(p: &[f64], cells: usize) -> Vec<usize> {
    p.iter().map(|x| ((x.clamp(0.0, 1.0) * cells as f64) as usize).min(cells - 1)).collect()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Cells at Chebyshev distance exactly `rho` from `c`, clipped to the grid.
fn visit_shell(c: &[usize], rho: usize, cells: usize, mut f: impl FnMut(&[usize])) {
    let d = c.len();
    let width = 2 * rho + 1;
    let mut cell = vec![0usize; d];
    'outer: for code in 0..width.pow(d as u32) {
        let mut rest = code;
        let mut on_shell = false;
        for k in 0..d {
            let off = (rest % width) as i64 - rho as i64;
            rest /= width;
            if off.unsigned_abs() as usize == rho {
                on_shell = true;
            }
            let v = c[k] as i64 + off;
            if v < 0 || v >= cells as i64 {
                continue 'outer;
            }
            cell[k] = v as usize;
        }
        if on_shell || rho == 0 {
            f(&cell);
        }
    }
}

/// `max_{x in net} min_{y in set} |x - y|`, or `None` for an empty set.
pub fn covering_radius(net: &[Vec<f64>], set: &[Vec<f64>]) -> Option<f64> {
    if set.is_empty() {
        return None;
    }
    let index = UnitCubeIndex::new(set);
    let d: Vec<f64> = net.par_iter().map(|p| index.nearest_distance(p).unwrap()).collect();
    Some(d.into_iter().fold(0.0, f64::max))
}
