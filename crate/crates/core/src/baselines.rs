//! Conventional local Whittle estimation and its tapered variants.
//!
//! All three minimise the same form
//!
//! ```text
//! R_LW(d) = log( mean_j lambda_j^{2d} I(lambda_j) ) - 2 d mean_j log lambda_j
//! ```
//!
//! over a fixed periodogram and differ only in how that periodogram is built:
//!
//! - untapered: `I_x` at `lambda_1..lambda_m`;
//! - Hurvich-Chen: first differences tapered by `(1 - e^{i 2 pi t / N}) / 2`
//!   with ordinates placed at the half-frequencies `lambda_{j+1/2}`,
//!   estimating `d - 1` and adding the difference back;
//! - Velasco: a Bartlett (triangular, order 2) data taper with only every
//!   second Fourier frequency `lambda_2, lambda_4, ..` up to `lambda_m`.
//!
//! Transforms at Fourier frequencies annihilate constants, so these
//! estimators ignore the configured mean correction.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::elw::{EstimateResult, EstimatorConfig};
use crate::error::{Error, Result};
use crate::optimize::{grid_golden_minimize, SearchSettings};
use crate::spectrum::{fourier_freq, DftPlan};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TaperKind {
    None,
    HurvichChen,
    VelascoBartlett,
}

impl TaperKind {
    /// Inflation of the asymptotic variance `1 / (4m)`.
    pub fn variance_factor(self) -> f64 {
        match self {
            TaperKind::None => 1.0,
            TaperKind::HurvichChen => 1.5,
            TaperKind::VelascoBartlett => 2.1,
        }
    }
}

/// Periodogram ordinates paired with their frequencies.
struct LwProblem {
    log_freqs: Vec<f64>,
    pgram: Vec<f64>,
    mean_log_freq: f64,
}

impl LwProblem {
    fn new(freqs: Vec<f64>, pgram: Vec<f64>) -> Self {
        let log_freqs: Vec<f64> = freqs.iter().map(|l| l.ln()).collect();
        let mean_log_freq = log_freqs.iter().sum::<f64>() / log_freqs.len() as f64;
        Self {
            log_freqs,
            pgram,
            mean_log_freq,
        }
    }

    fn objective(&self, d: f64) -> Option<f64> {
        // Factor out the largest weight so lambda^{2d} I cannot overflow for |d| large.
        let logs: Vec<f64> = self
            .log_freqs
            .iter()
            .zip(&self.pgram)
            .filter(|(_, &i)| i > 0.0)
            .map(|(lf, i)| 2.0 * d * lf + i.ln())
            .collect();
        let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if !top.is_finite() {
            return None;
        }
        let sum: f64 = logs.iter().map(|l| (l - top).exp()).sum();
        let g_log = top + (sum / self.pgram.len() as f64).ln();
        Some(g_log - 2.0 * d * self.mean_log_freq)
    }

    fn g_hat(&self, d: f64) -> f64 {
        self.log_freqs
            .iter()
            .zip(&self.pgram)
            .map(|(lf, i)| (2.0 * d * lf).exp() * i)
            .sum::<f64>()
            / self.pgram.len() as f64
    }

    fn minimize(&self, search: SearchSettings) -> Result<(f64, f64, usize)> {
        if self.pgram.iter().all(|&i| i == 0.0) {
            return Err(Error::Degenerate(
                "periodogram is identically zero at the frequencies used".into(),
            ));
        }
        let min = grid_golden_minimize(|d| self.objective(d), search).ok_or_else(|| {
            Error::EstimationFailed("objective not evaluable anywhere on the search grid".into())
        })?;
        Ok((min.x, min.value, min.n_evals))
    }
}

fn is_constant(x: &[f64]) -> bool {
    x.iter().all(|&v| v == x[0])
}

/// Conventional (untapered) local Whittle estimate.
pub fn lw_estimate(x: &[f64], cfg: &EstimatorConfig) -> Result<EstimateResult> {
    let warnings = cfg.validate(x.len())?;
    let n = x.len();
    let problem = LwProblem::new(
        (1..=cfg.m).map(|j| fourier_freq(j, n)).collect(),
        DftPlan::new(n).periodogram(x, cfg.m),
    );
    let (d_hat, value, evals) = problem.minimize(cfg.search())?;
    Ok(EstimateResult::assemble(
        cfg,
        d_hat,
        problem.g_hat(d_hat),
        crate::elw::standard_error(cfg.m),
        value,
        evals,
        warnings,
    ))
}

/// Local Whittle estimate on a tapered periodogram.
pub fn tapered_estimate(
    x: &[f64],
    cfg: &EstimatorConfig,
    taper: TaperKind,
) -> Result<EstimateResult> {
    let warnings = cfg.validate(x.len())?;
    if is_constant(x) {
        return Err(Error::Degenerate("series is constant".into()));
    }
    let se = taper.variance_factor().sqrt() * crate::elw::standard_error(cfg.m);
    let (problem, shift) = match taper {
        TaperKind::None => return lw_estimate(x, cfg),
        TaperKind::HurvichChen => (hurvich_chen_problem(x, cfg.m)?, 1.0),
        TaperKind::VelascoBartlett => (velasco_problem(x, cfg.m), 0.0),
    };
    let search = SearchSettings {
        lo: cfg.delta1 - shift,
        hi: cfg.delta2 - shift,
        ..cfg.search()
    };
    let (d_diff, value, evals) = problem.minimize(search)?;
    Ok(EstimateResult::assemble(
        cfg,
        d_diff + shift,
        problem.g_hat(d_diff),
        se,
        value,
        evals,
        warnings,
    ))
}

/// Tapered transform `(2 pi sum |h_t|^2)^{-1/2} sum_t h_t a_t e^{it lambda}` at
/// the Fourier frequencies `js` of a series of length `a.len()`.
fn tapered_pgram(a: &[f64], taper: &[Complex64], js: &[usize]) -> Vec<f64> {
    let n = a.len();
    let energy: f64 = taper.iter().map(|h| h.norm_sqr()).sum();
    let scale = 1.0 / (2.0 * PI * energy);
    // h_t a_t is complex for the HC taper, so transform real and imaginary parts.
    let re: Vec<f64> = a.iter().zip(taper).map(|(v, h)| v * h.re).collect();
    let im: Vec<f64> = a.iter().zip(taper).map(|(v, h)| v * h.im).collect();
    let plan = DftPlan::new(n);
    let w_re = plan.full(&re);
    let w_im = plan.full(&im);
    let norm = (2.0 * PI * n as f64).sqrt();
    js.iter()
        .map(|&j| {
            let w = (w_re[j] + Complex64::i() * w_im[j]) * norm;
            w.norm_sqr() * scale
        })
        .collect()
}

fn hurvich_chen_problem(x: &[f64], m: usize) -> Result<LwProblem> {
    let diff: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let len = diff.len();
    if 2 * m >= len {
        return Err(Error::InvalidParameter(format!(
            "bandwidth {m} too large for {len} differenced observations"
        )));
    }
    let taper: Vec<Complex64> = (1..=len)
        .map(|t| 0.5 * (1.0 - Complex64::cis(2.0 * PI * t as f64 / len as f64)))
        .collect();
    let js: Vec<usize> = (1..=m).collect();
    // h_t e^{it lambda_j} mixes lambda_j and lambda_{j+1}; the ordinate sits at lambda_{j+1/2}.
    Ok(LwProblem::new(
        js.iter()
            .map(|&j| 2.0 * PI * (j as f64 + 0.5) / len as f64)
            .collect(),
        tapered_pgram(&diff, &taper, &js),
    ))
}

fn velasco_problem(x: &[f64], m: usize) -> LwProblem {
    let n = x.len();
    let taper: Vec<Complex64> = (1..=n)
        .map(|t| Complex64::new(1.0 - (1.0 - 2.0 * t as f64 / n as f64).abs(), 0.0))
        .collect();
    let js: Vec<usize> = (2..=m).step_by(2).collect();
    LwProblem::new(
        js.iter().map(|&j| fourier_freq(j, n)).collect(),
        tapered_pgram(x, &taper, &js),
    )
}
