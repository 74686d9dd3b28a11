//! Gaussian kernel density estimates for Monte Carlo samples.

use std::f64::consts::PI;

use crate::error::{Error, Result};

fn mean_sd(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

fn check_samples(samples: &[f64]) -> Result<f64> {
    if samples.len() < 2 {
        return Err(Error::InvalidInput(format!(
            "density estimation needs at least 2 samples, got {}",
            samples.len()
        )));
    }
    let (_, sd) = mean_sd(samples);
    if sd == 0.0 || !sd.is_finite() {
        return Err(Error::Degenerate(
            "samples have zero variance: the density is a single spike".into(),
        ));
    }
    Ok(sd)
}

/// Silverman's rule of thumb `1.06 s N^{-1/5}`.
pub fn silverman_bandwidth(samples: &[f64]) -> Result<f64> {
    let sd = check_samples(samples)?;
    Ok(1.06 * sd * (samples.len() as f64).powf(-0.2))
}

/// Density estimate at each grid point.
pub fn kde(samples: &[f64], bandwidth: f64, grid: &[f64]) -> Result<Vec<f64>> {
    check_samples(samples)?;
    if !(bandwidth > 0.0 && bandwidth.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "bandwidth must be positive, got {bandwidth}"
        )));
    }
    let norm = 1.0 / (samples.len() as f64 * bandwidth * (2.0 * PI).sqrt());
    Ok(grid
        .iter()
        .map(|&x| {
            samples
                .iter()
                .map(|s| (-0.5 * ((x - s) / bandwidth).powi(2)).exp())
                .sum::<f64>()
                * norm
        })
        .collect())
}

/// Evenly spaced grid covering the samples plus three bandwidths either side.
pub fn default_grid(samples: &[f64], bandwidth: f64, points: usize) -> Vec<f64> {
    let lo = samples.iter().copied().fold(f64::INFINITY, f64::min) - 3.0 * bandwidth;
    let hi = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max) + 3.0 * bandwidth;
    let step = (hi - lo) / (points.max(2) - 1) as f64;
    (0..points.max(2)).map(|k| lo + k as f64 * step).collect()
}
