//! Scrambled low-discrepancy points.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PRIMES: [u32; 24] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89];

/// Van der Corput radical inverse of `i` in base `b`.
pub fn radical_inverse(mut i: u64, b: u32) -> f64 {
    let b = b as u64;
    let inv = 1.0 / b as f64;
    let mut f = inv;
    let mut r = 0.0;
    while i > 0 {
        r += (i % b) as f64 * f;
        i /= b;
        f *= inv;
    }
    r
}

/// Halton sequence with a seeded Cranley-Patterson rotation. Point `i`
/// depends only on `i` and the seed.
#[derive(Clone, Debug)]
pub struct QuasiRandom {
    shift: Vec<f64>,
}

impl QuasiRandom {
    pub fn new(dim: usize, seed: u64) -> Self {
        assert!(dim <= PRIMES.len(), "at most {} dimensions", PRIMES.len());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self { shift: (0..dim).map(|_| rng.gen::<f64>()).collect() }
    }

    pub fn dim(&self) -> usize {
        self.shift.len()
    }

    pub fn point(&self, i: u64) -> Vec<f64> {
        self.shift
            .iter()
            .zip(PRIMES)
            .map(|(s, p)| {
                let v = radical_inverse(i + 1, p) + s;
                v - v.floor()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radical_inverse_base_two() {
        let v: Vec<f64> = (1..5).map(|i| radical_inverse(i, 2)).collect();
        assert_eq!(v, vec![0.5, 0.25, 0.75, 0.125]);
    }

    #[test]
    fn points_are_reproducible_and_spread() {
        let a = QuasiRandom::new(3, 7);
        let b = QuasiRandom::new(3, 7);
        assert_eq!(a.point(10), b.point(10));
        assert_ne!(a.point(10), QuasiRandom::new(3, 8).point(10));
        // every eighth of [0,1) in the first axis is hit by 64 points
        let mut hit = [false; 8];
        for i in 0..64 {
            hit[(a.point(i)[0] * 8.0) as usize] = true;
        }
        assert!(hit.iter().all(|&h| h));
    }
}
