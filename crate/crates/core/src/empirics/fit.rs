//! Least-squares fit of `log M = theta log r + kappa log log r + c`.

use nalgebra::{DMatrix, DVector};
use serde_json::{json, Value};

use super::{EmpiricsError, SweepResult};

/// Treatment of the log-power `kappa`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kappa {
    /// Held at a predicted integer.
    Fixed(i64),
    /// Fitted together with `theta`.
    Free,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExponentFit {
    pub theta_hat: f64,
    pub kappa_hat: f64,
    pub kappa_fixed: bool,
    pub intercept: f64,
    pub stderr_theta: f64,
    pub r_squared: f64,
}

impl ExponentFit {
    pub fn to_json(&self) -> Value {
        json!({
            "theta_hat": self.theta_hat,
            "kappa_hat": self.kappa_hat,
            "kappa_fixed": self.kappa_fixed,
            "intercept": self.intercept,
            "stderr_theta": self.stderr_theta,
            "r_squared": self.r_squared,
        })
    }
}

const MIN_POINTS: usize = 4;

/// Ordinary least squares on the log model. Needs at least four points, all
/// with `r >= e^2` and a positive measurement.
pub fn fit_exponents(sweep: &SweepResult, kappa: Kappa) -> Result<ExponentFit, EmpiricsError> {
    fit_points(&sweep.r_values, &sweep.measurements, kappa)
}

pub fn fit_points(r_values: &[f64], measurements: &[f64], kappa: Kappa) -> Result<ExponentFit, EmpiricsError> {
    let rows = r_values.len();
    if rows < MIN_POINTS || measurements.len() != rows {
        return Err(EmpiricsError::TooFewPoints {
            got: rows.min(measurements.len()),
        });
    }
    let threshold = std::f64::consts::E.powi(2);
    for (&r, &m) in r_values.iter().zip(measurements) {
        if !(r >= threshold) {
            return Err(EmpiricsError::LevelBelowThreshold(r));
        }
        if !(m > 0.0) || !m.is_finite() {
            return Err(EmpiricsError::NonPositiveMeasurement { r, measurement: m });
        }
    }
    let log_r: Vec<f64> = r_values.iter().map(|r| r.ln()).collect();
    let log_log_r: Vec<f64> = log_r.iter().map(|l| l.ln()).collect();
    let fixed = match kappa {
        Kappa::Fixed(k) => Some(k as f64),
        Kappa::Free => None,
    };
    let cols = if fixed.is_some() { 2 } else { 3 };
    let design = DMatrix::from_fn(rows, cols, |i, j| match (j, fixed) {
        (0, _) => log_r[i],
        (1, None) => log_log_r[i],
        _ => 1.0,
    });
    let response = DVector::from_fn(rows, |i, _| {
        measurements[i].ln() - fixed.map_or(0.0, |k| k * log_log_r[i])
    });

    let svd = design.clone().svd(true, true);
    let largest = svd.singular_values.max();
    let tolerance = largest * 1e-10 * rows as f64;
    if svd.rank(tolerance) < cols {
        return Err(EmpiricsError::SingularDesign);
    }
    let beta = svd
        .solve(&response, tolerance)
        .map_err(|_| EmpiricsError::SingularDesign)?;
    let residual = &response - &design * &beta;
    let rss = residual.norm_squared();
    let mean = response.mean();
    let tss: f64 = response.iter().map(|v| (v - mean).powi(2)).sum();
    // data constant up to rounding: the fit is exact by definition
    let r_squared = if tss > 1e-24 * (1.0 + mean * mean) * rows as f64 {
        1.0 - rss / tss
    } else {
        1.0
    };
    let sigma2 = rss / (rows - cols) as f64;
    let normal_inverse = (design.transpose() * &design)
        .try_inverse()
        .ok_or(EmpiricsError::SingularDesign)?;
    let stderr_theta = (sigma2 * normal_inverse[(0, 0)]).max(0.0).sqrt();
    Ok(ExponentFit {
        theta_hat: beta[0],
        kappa_hat: fixed.unwrap_or_else(|| beta[1]),
        kappa_fixed: fixed.is_some(),
        intercept: beta[cols - 1],
        stderr_theta,
        r_squared,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn schedule(lo: f64, hi: f64, points: usize) -> Vec<f64> {
        (0..points)
            .map(|i| 10f64.powf(lo + (hi - lo) * i as f64 / (points - 1) as f64))
            .collect()
    }

    #[test]
    fn free_fit_recovers_planted_exponents() {
        let r = schedule(2.0, 8.0, 13);
        let m: Vec<f64> = r.iter().map(|r| 3.0 * r.sqrt() * r.ln()).collect();
        let fit = fit_points(&r, &m, Kappa::Free).unwrap();
        assert!(
            (fit.theta_hat - 0.5).abs() <= 0.02 && (fit.kappa_hat - 1.0).abs() <= 0.02,
            "{fit:?}"
        );
        assert!(fit.r_squared > 0.999_999);
    }

    #[test]
    fn fixed_fit_pure_power() {
        let r = schedule(2.0, 6.0, 9);
        let m: Vec<f64> = r.iter().map(|r| 7.0 * r.powf(2.0 / 3.0)).collect();
        let fit = fit_points(&r, &m, Kappa::Fixed(0)).unwrap();
        assert!((fit.theta_hat - 2.0 / 3.0).abs() < 1e-10);
        assert!((fit.intercept - 7f64.ln()).abs() < 1e-9);
        assert!(fit.stderr_theta < 1e-8);
    }

    #[test]
    fn constant_data() {
        let r = schedule(2.0, 5.0, 7);
        let fit = fit_points(&r, &[5.0; 7], Kappa::Fixed(0)).unwrap();
        assert!(fit.theta_hat.abs() < 1e-10);
        assert_eq!(fit.r_squared, 1.0);
    }

    #[test]
    fn errors() {
        let r = schedule(2.0, 5.0, 3);
        assert_eq!(
            fit_points(&r, &[1.0; 3], Kappa::Free),
            Err(EmpiricsError::TooFewPoints { got: 3 })
        );
        assert!(matches!(
            fit_points(&[1.0, 100.0, 1000.0, 10000.0], &[1.0; 4], Kappa::Free),
            Err(EmpiricsError::LevelBelowThreshold(_))
        ));
        assert_eq!(
            fit_points(&[100.0; 5], &[1.0, 2.0, 3.0, 4.0, 5.0], Kappa::Fixed(0)),
            Err(EmpiricsError::SingularDesign)
        );
        assert!(matches!(
            fit_points(&[100.0, 200.0, 300.0, 400.0], &[1.0, 0.0, 3.0, 4.0], Kappa::Fixed(0)),
            Err(EmpiricsError::NonPositiveMeasurement { .. })
        ));
    }
}
