use serde::{Deserialize, Serialize};

use super::VolumeError;
use crate::orbit::torus_dist;
use crate::torus::chart::reduce_mod1;
use crate::torus::{translation_vector, TranslationField};

/// Multiplication by `D` on each fiber, with the zero section as origin.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicationMap {
    d: u32,
}

impl MultiplicationMap {
    pub fn new(d: u32) -> Result<Self, VolumeError> {
        if d < 2 {
            return Err(VolumeError::InvalidInput(format!("D must be at least 2, got {d}")));
        }
        Ok(Self { d })
    }

    pub fn d(&self) -> u32 {
        self.d
    }
}

pub fn apply_multiplication(map: MultiplicationMap, x: &[f64]) -> Vec<f64> {
    x.iter().map(|v| reduce_mod1(map.d as f64 * v)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConjugacyReport {
    pub d: u32,
    pub k: u32,
    pub samples: usize,
    pub max_defect: f64,
    /// `1e-9·D^k`, the allowed floating-point amplification.
    pub bound: f64,
    pub within_bound: bool,
}

/// Compare `f^{D^k}(s₀(u))`, computed by `D^k` fiber translations, with
/// `m_D^k(f(s₀(u)))`, computed by `k` multiplications.
pub fn conjugacy_check(field: &TranslationField, d: u32, k: u32, points: &[Vec<f64>]) -> Result<ConjugacyReport, VolumeError> {
    let map = MultiplicationMap::new(d)?;
    let power = (d as u64)
        .checked_pow(k)
        .filter(|&p| p <= 1 << 24)
        .ok_or_else(|| VolumeError::InvalidInput(format!("D^k = {d}^{k} is too large to iterate")))?;
    let mut max_defect: f64 = 0.0;
    for u in points {
        let t = translation_vector(field, u)?;
        let mut lhs = vec![0.0; t.len()];
        for _ in 0..power {
            lhs = crate::torus::fiber_translate(&lhs, &t);
        }
        let mut rhs = t.clone();
        for _ in 0..k {
            rhs = apply_multiplication(map, &rhs);
        }
        max_defect = max_defect.max(torus_dist(&lhs, &rhs));
    }
    let bound = 1e-9 * power as f64;
    Ok(ConjugacyReport { d, k, samples: points.len(), max_defect, bound, within_bound: max_defect <= bound })
}

/// A point of the fiber over `base`, in Betti coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiberPoint {
    pub base: Vec<f64>,
    pub x: Vec<f64>,
}

/// `x + (y - z)` in the common fiber.
pub fn fiber_add(x: &FiberPoint, y: &FiberPoint, z: &FiberPoint) -> Result<FiberPoint, VolumeError> {
    if x.base != y.base || x.base != z.base {
        return Err(VolumeError::BaseMismatch);
    }
    let n = x.x.len();
    for p in [y, z] {
        if p.x.len() != n {
            return Err(VolumeError::DimensionMismatch { expected: n, found: p.x.len() });
        }
    }
    let v = (0..n).map(|i| reduce_mod1(x.x[i] + (y.x[i] - z.x[i]))).collect();
    Ok(FiberPoint { base: x.base.clone(), x: v })
}
