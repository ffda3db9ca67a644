use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::{VolumeError, VolumeSeries};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthFit {
    pub degree: usize,
    pub leading_coefficient: f64,
    /// Root-mean-square residual of the least-squares fit.
    pub residual: f64,
    /// Coefficients of `1, n, n², …` up to `max_degree`.
    pub coefficients: Vec<f64>,
}

/// Least-squares polynomial fit in `n`; the reported degree is the largest `d`
/// with `|c_d|·n_max^d > 10·residual`.
pub fn fit_growth(series: &VolumeSeries, max_degree: usize) -> Result<GrowthFit, VolumeError> {
    let m = series.iterates.len();
    if m != series.volumes.len() {
        return Err(VolumeError::DimensionMismatch { expected: m, found: series.volumes.len() });
    }
    if m < max_degree + 2 {
        return Err(VolumeError::IllConditionedFit(format!("{m} entries for degree {max_degree}")));
    }
    let n_max = series.iterates.iter().map(|n| n.unsigned_abs()).max().unwrap_or(0).max(1) as f64;
    // fit in s = n / n_max so the scaled coefficients are directly comparable
    let a = DMatrix::from_fn(m, max_degree + 1, |i, j| (series.iterates[i] as f64 / n_max).powi(j as i32));
    let y = DVector::from_column_slice(&series.volumes);
    let svd = a.clone().svd(true, true);
    let (smax, smin) = (svd.singular_values.max(), svd.singular_values.min());
    if !(smin > 1e-12 * smax) {
        return Err(VolumeError::IllConditionedFit(format!("condition number {:e}", smax / smin)));
    }
    let scaled = svd.solve(&y, 0.0).map_err(|e| VolumeError::IllConditionedFit(e.to_string()))?;
    let resid = &y - &a * &scaled;
    let residual = (resid.norm_squared() / m as f64).sqrt();
    let floor = residual.max(1e-12 * y.amax());
    let degree = (0..=max_degree).rev().find(|&d| scaled[d].abs() > 10.0 * floor).unwrap_or(0);
    let coefficients: Vec<f64> = scaled.iter().enumerate().map(|(d, c)| c / n_max.powi(d as i32)).collect();
    Ok(GrowthFit { degree, leading_coefficient: coefficients[degree], residual, coefficients })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(f: impl Fn(f64) -> f64) -> VolumeSeries {
        let iterates: Vec<i64> = (1..=16).collect();
        let volumes = iterates.iter().map(|&n| f(n as f64)).collect();
        VolumeSeries { iterates, volumes, quadrature_error: vec![0.0; 16] }
    }

    #[test]
    fn constant_series_has_degree_zero() {
        let fit = fit_growth(&series(|_| 3.5), 4).unwrap();
        assert_eq!(fit.degree, 0);
        assert!((fit.leading_coefficient - 3.5).abs() < 1e-12);
    }

    #[test]
    fn quadratic_is_recovered() {
        let fit = fit_growth(&series(|n| 1.0 + n * n), 4).unwrap();
        assert_eq!(fit.degree, 2);
        assert!((fit.leading_coefficient - 1.0).abs() < 1e-9);
        let fit = fit_growth(&series(|n| 0.5 * n.powi(3) - n), 3).unwrap();
        assert_eq!(fit.degree, 3);
    }

    #[test]
    fn too_short_series_is_rejected() {
        let s = VolumeSeries { iterates: vec![1, 2, 3], volumes: vec![1.0; 3], quadrature_error: vec![0.0; 3] };
        assert!(matches!(fit_growth(&s, 2), Err(VolumeError::IllConditionedFit(_))));
        let s = VolumeSeries { iterates: vec![2; 6], volumes: vec![1.0; 6], quadrature_error: vec![0.0; 6] };
        assert!(matches!(fit_growth(&s, 2), Err(VolumeError::IllConditionedFit(_))));
    }
}
