use super::MeasurementRecord;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum FitMode {
    /// `y = a + b·x`; absorbs an instrument zero offset.
    #[default]
    FreeIntercept,
    /// `y = b·x`.
    ThroughOrigin,
}

/// Least-squares line through the Biot predictor `l·c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    /// Degrees per (dm·g/mL).
    pub slope: f64,
    /// Degrees.
    pub intercept: f64,
    /// In [0, 1]. Uncentered in through-origin mode.
    pub r_squared: f64,
    pub n_points: usize,
    /// Specific rotation, deg·dm⁻¹·(g/mL)⁻¹. Equal to the slope since the
    /// predictor already carries the path length.
    pub specific_rotation_estimate: f64,
    /// Standard error of the slope; `None` with no residual degrees of
    /// freedom.
    pub slope_std_error: Option<f64>,
}

/// Ordinary least squares of `y` on `x`.
pub fn fit_line(x: &[f64], y: &[f64], mode: FitMode) -> Result<FitResult> {
    assert_eq!(x.len(), y.len(), "x and y must have equal length");
    let n = x.len();
    if n < 2 {
        return Err(Error::TooFewPoints(n));
    }
    let nf = n as f64;
    let sum_sq: f64 = x.iter().map(|v| v * v).sum();

    let (slope, intercept, dof, spread, total) = match mode {
        FitMode::FreeIntercept => {
            let mx = x.iter().sum::<f64>() / nf;
            let my = y.iter().sum::<f64>() / nf;
            let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
            if sxx == 0.0 || sxx <= 1e-14 * sum_sq {
                return Err(Error::DegeneratePredictor);
            }
            let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
            let syy: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
            let slope = sxy / sxx;
            (slope, my - slope * mx, n - 2, sxx, syy)
        }
        FitMode::ThroughOrigin => {
            if sum_sq == 0.0 {
                return Err(Error::DegeneratePredictor);
            }
            let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
            let syy: f64 = y.iter().map(|v| v * v).sum();
            (sxy / sum_sq, 0.0, n - 1, sum_sq, syy)
        }
    };

    let ssr: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - intercept - slope * a).powi(2))
        .sum();
    let r_squared = if total > 0.0 {
        (1.0 - ssr / total).clamp(0.0, 1.0)
    } else {
        1.0
    };
    let slope_std_error = (dof > 0).then(|| (ssr / dof as f64 / spread).sqrt());

    Ok(FitResult {
        slope,
        intercept,
        r_squared,
        n_points: n,
        specific_rotation_estimate: slope,
        slope_std_error,
    })
}

/// Fits Biot's law `θ = S·l·c` to the readings of one sample: observed
/// rotation (degrees) against `l·c` (dm·g/mL).
pub fn fit_biot(records: &[MeasurementRecord], mode: FitMode) -> Result<FitResult> {
    if records.len() < 2 {
        return Err(Error::TooFewPoints(records.len()));
    }
    let first = &records[0].sample_name;
    if let Some(other) = records.iter().find(|r| &r.sample_name != first) {
        return Err(Error::MixedSamples(
            first.clone(),
            other.sample_name.clone(),
        ));
    }
    let x: Vec<f64> = records
        .iter()
        .map(|r| r.path_length_dm * r.concentration_g_per_ml())
        .collect();
    let y: Vec<f64> = records.iter().map(|r| r.observed_rotation_deg).collect();
    fit_line(&x, &y, mode)
}
