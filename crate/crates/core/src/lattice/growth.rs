//! Norm growth of matrix iterates: polynomial exponents for parabolic
//! isometries, exponential rates for loxodromic ones.
//!
//! Norms are the maximum absolute entry. Iterates are computed exactly by
//! repeated squaring; past `max_bits` the computation either falls back to
//! renormalised floating point or reports an overflow.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sympow::sym_power;
use super::LatticeError;
use crate::exact::IntMatrix;

pub const NORM_NAME: &str = "max-abs-entry";

/// Default concavity tolerance (absorbs fit noise).
pub const DEFAULT_CONCAVITY_TOL: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GrowthMode {
    Polynomial,
    Exponential,
}

#[derive(Clone, Copy, Debug)]
pub struct GrowthOptions {
    pub max_bits: u64,
    pub float_fallback: bool,
}

impl Default for GrowthOptions {
    fn default() -> Self {
        Self { max_bits: 1 << 16, float_fallback: true }
    }
}

/// Geometric schedule `16, 32, …, 4096`.
pub fn default_schedule() -> Vec<u64> {
    (4..=12).map(|k| 1u64 << k).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthSample {
    pub n: u64,
    pub log_norm: f64,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthFit {
    pub mode: GrowthMode,
    pub norm: &'static str,
    /// Polynomial: log-log slope. Exponential: log of the rate.
    pub exponent: f64,
    /// Fitted constant `c` in `c n^exponent` or `c rate^n`.
    pub constant: f64,
    /// RMS residual of the log-log fit, or the last change of the rate
    /// estimate in exponential mode.
    pub residual: f64,
    pub rate: Option<f64>,
    pub rate_error: Option<f64>,
    /// `‖Mⁿ‖^{1/n}` at the last scheduled iterate.
    pub naive_root: Option<f64>,
    pub samples: Vec<GrowthSample>,
}

/// Natural log of `|x|`, valid far beyond the `f64` range.
pub fn log_abs(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.abs().to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (x.abs() >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

fn exact_log_norm(m: &IntMatrix, n: u64, max_bits: u64) -> Option<f64> {
    let mut base = m.clone();
    let mut acc = IntMatrix::identity(m.rows());
    let mut e = n;
    let too_big = |x: &IntMatrix| x.data().iter().any(|v| v.bits() > max_bits);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&base);
            if too_big(&acc) {
                return None;
            }
        }
        e >>= 1;
        if e > 0 {
            base = base.mul(&base);
            if too_big(&base) {
                return None;
            }
        }
    }
    Some(log_abs(&acc.max_abs()))
}

/// Matrix with a separate log-scale, renormalised after every product.
struct Scaled {
    n: usize,
    a: Vec<f64>,
    log_scale: f64,
}

impl Scaled {
    fn mul(&self, o: &Scaled) -> Scaled {
        let n = self.n;
        let mut c = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let x = self.a[i * n + k];
                if x == 0.0 {
                    continue;
                }
                for j in 0..n {
                    c[i * n + j] += x * o.a[k * n + j];
                }
            }
        }
        let s = c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let log_scale = self.log_scale + o.log_scale + if s > 0.0 { s.ln() } else { 0.0 };
        if s > 0.0 {
            c.iter_mut().for_each(|v| *v /= s);
        }
        Scaled { n, a: c, log_scale }
    }
}

fn float_log_norm(m: &IntMatrix, n: u64) -> f64 {
    let dim = m.rows();
    let mut base = Scaled { n: dim, a: m.to_f64(), log_scale: 0.0 };
    let mut acc = Scaled { n: dim, a: IntMatrix::identity(dim).to_f64(), log_scale: 0.0 };
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&base);
        }
        e >>= 1;
        if e > 0 {
            base = base.mul(&base);
        }
    }
    let top = acc.a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    acc.log_scale + top.ln()
}

fn check_schedule(schedule: &[u64]) -> Result<(), LatticeError> {
    if schedule.len() < 4 || schedule.windows(2).any(|w| w[0] >= w[1]) || schedule[0] == 0 {
        return Err(LatticeError::InvalidSchedule);
    }
    Ok(())
}

pub fn growth_exponent(
    m: &IntMatrix,
    mode: GrowthMode,
    schedule: &[u64],
    opts: GrowthOptions,
) -> Result<GrowthFit, LatticeError> {
    check_schedule(schedule)?;
    let samples: Vec<Result<GrowthSample, LatticeError>> = schedule
        .par_iter()
        .map(|&n| match exact_log_norm(m, n, opts.max_bits) {
            Some(log_norm) => Ok(GrowthSample { n, log_norm, exact: true }),
            None if opts.float_fallback => Ok(GrowthSample { n, log_norm: float_log_norm(m, n), exact: false }),
            None => Err(LatticeError::Overflow { n, max_bits: opts.max_bits }),
        })
        .collect();
    let samples = samples.into_iter().collect::<Result<Vec<_>, _>>()?;

    Ok(match mode {
        GrowthMode::Polynomial => {
            let xs: Vec<f64> = samples.iter().map(|s| (s.n as f64).ln()).collect();
            let ys: Vec<f64> = samples.iter().map(|s| s.log_norm).collect();
            let (slope, intercept, rms) = least_squares_line(&xs, &ys);
            GrowthFit {
                mode,
                norm: NORM_NAME,
                exponent: slope,
                constant: intercept.exp(),
                residual: rms,
                rate: None,
                rate_error: None,
                naive_root: None,
                samples,
            }
        }
        GrowthMode::Exponential => {
            let rates: Vec<f64> = samples
                .windows(2)
                .map(|w| ((w[1].log_norm - w[0].log_norm) / (w[1].n - w[0].n) as f64).exp())
                .collect();
            let rate = *rates.last().unwrap();
            let rate_error = (rate - rates[rates.len() - 2]).abs();
            let last = samples.last().unwrap();
            GrowthFit {
                mode,
                norm: NORM_NAME,
                exponent: rate.ln(),
                constant: (last.log_norm - last.n as f64 * rate.ln()).exp(),
                residual: rate_error,
                rate: Some(rate),
                rate_error: Some(rate_error),
                naive_root: Some((last.log_norm / last.n as f64).exp()),
                samples,
            }
        }
    })
}

/// Ordinary least squares `y = a x + b`; returns `(a, b, rms residual)`.
pub fn least_squares_line(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let a = sxy / sxx;
    let b = my - a * mx;
    let rms = (xs.iter().zip(ys).map(|(x, y)| (y - a * x - b).powi(2)).sum::<f64>() / n).sqrt();
    (a, b, rms)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumEntry {
    pub p: usize,
    pub s: f64,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthSpectrum {
    pub mode: GrowthMode,
    pub entries: Vec<SpectrumEntry>,
}

impl GrowthSpectrum {
    pub fn from_values(mode: GrowthMode, values: &[f64]) -> Self {
        let entries = values.iter().enumerate().map(|(p, &s)| SpectrumEntry { p, s, residual: 0.0 }).collect();
        Self { mode, entries }
    }

    pub fn values(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.s).collect()
    }
}

/// Growth exponents (or log-rates) of `Sym^p(M)` for `p = 0..=p_max`;
/// `s_0 = 0` exactly.
pub fn growth_spectrum(
    m: &IntMatrix,
    p_max: usize,
    mode: GrowthMode,
    schedule: &[u64],
    opts: GrowthOptions,
) -> Result<GrowthSpectrum, LatticeError> {
    let mut entries = vec![SpectrumEntry { p: 0, s: 0.0, residual: 0.0 }];
    for p in 1..=p_max {
        let fit = growth_exponent(&sym_power(m, p), mode, schedule, opts)?;
        entries.push(SpectrumEntry { p, s: fit.exponent, residual: fit.residual });
    }
    Ok(GrowthSpectrum { mode, entries })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConcavityReport {
    pub holds: bool,
    pub violations: Vec<usize>,
}

/// Checks `2 s_p <= s_{p-1} + s_{p+1} + tol` at every interior `p`.
pub fn concavity_check(spectrum: &GrowthSpectrum, tol: f64) -> Result<ConcavityReport, LatticeError> {
    let e = &spectrum.entries;
    if e.len() < 3 || e.iter().enumerate().any(|(i, x)| x.p != i) {
        return Err(LatticeError::InsufficientEntries { found: e.len() });
    }
    let violations: Vec<usize> =
        (1..e.len() - 1).filter(|&p| 2.0 * e[p].s > e[p - 1].s + e[p + 1].s + tol).collect();
    Ok(ConcavityReport { holds: violations.is_empty(), violations })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m_par() -> IntMatrix {
        IntMatrix::from_i64_rows(&[vec![1, 1, 2], vec![0, 1, 0], vec![0, 1, 1]])
    }

    #[test]
    fn log_abs_of_huge_integers() {
        let x = BigInt::from(3).pow(2000);
        assert!((log_abs(&x) - 2000.0 * 3f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn m_par_norm_is_n_squared() {
        // entries n² and 2n in the top row
        for n in [1u64, 2, 7, 100] {
            assert_eq!(m_par().pow(n).max_abs(), BigInt::from((n * n).max(2 * n)));
        }
    }

    #[test]
    fn float_fallback_agrees_with_exact() {
        let pell = IntMatrix::from_i64_rows(&[vec![3, 4], vec![2, 3]]);
        let exact = exact_log_norm(&pell, 300, u64::MAX).unwrap();
        let float = float_log_norm(&pell, 300);
        assert!((exact - float).abs() < 1e-10);
    }

    #[test]
    fn overflow_without_fallback() {
        let pell = IntMatrix::from_i64_rows(&[vec![3, 4], vec![2, 3]]);
        let opts = GrowthOptions { max_bits: 64, float_fallback: false };
        let err = growth_exponent(&pell, GrowthMode::Exponential, &[10, 20, 40, 80], opts).unwrap_err();
        assert!(matches!(err, LatticeError::Overflow { .. }));
    }

    #[test]
    fn schedule_validation() {
        let err = growth_exponent(&m_par(), GrowthMode::Polynomial, &[1, 2, 2, 3], GrowthOptions::default());
        assert_eq!(err.unwrap_err(), LatticeError::InvalidSchedule);
        let short = growth_exponent(&m_par(), GrowthMode::Polynomial, &[1, 2, 3], GrowthOptions::default());
        assert_eq!(short.unwrap_err(), LatticeError::InvalidSchedule);
    }

    #[test]
    fn concavity_examples() {
        let check = |v: &[f64]| concavity_check(&GrowthSpectrum::from_values(GrowthMode::Polynomial, v), 0.1);
        assert!(check(&[0.0, 2.0, 4.0, 6.0]).unwrap().holds);
        let r = check(&[0.0, 3.0, 4.0]).unwrap();
        assert_eq!(r, ConcavityReport { holds: false, violations: vec![1] });
        // printed inequality 2 s_p <= s_{p-1} + s_{p+1}: 4 > 0 + 3 at p = 1
        assert_eq!(check(&[0.0, 2.0, 3.0, 4.0]).unwrap().violations, vec![1]);
        assert!(matches!(check(&[0.0, 2.0]), Err(LatticeError::InsufficientEntries { .. })));
    }
}
