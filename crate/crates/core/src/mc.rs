//! Monte Carlo replication harness: bias / s.d. / MSE tables and density
//! curves for a set of estimators over a list of true memory parameters.
//!
//! Replication `r` draws its innovations from stream `r` under the master
//! seed and reuses them for every `d` and every estimator. Estimates are
//! gathered in replication order before any aggregation, so reports are
//! bit-identical for any worker count.

use serde::{Deserialize, Serialize};

use crate::baselines::{lw_estimate, tapered_estimate, TaperKind};
use crate::elw::{estimate, EstimatorConfig, MeanMode};
use crate::error::{Error, Result};
use crate::fracfilter::fracint;
use crate::kde::{default_grid, kde, silverman_bandwidth};
use crate::parallel::map_indexed;
use crate::simulate::NormalStream;

/// Largest tolerated share of failed replications per (estimator, d) cell.
pub const MAX_FAILURE_RATE: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EstimatorKind {
    Elw,
    Lw,
    Hc,
    Velasco,
}

impl EstimatorKind {
    pub const ALL: [EstimatorKind; 4] = [Self::Elw, Self::Lw, Self::Hc, Self::Velasco];

    pub fn name(self) -> &'static str {
        match self {
            Self::Elw => "elw",
            Self::Lw => "lw",
            Self::Hc => "hc",
            Self::Velasco => "velasco",
        }
    }

    pub fn run(self, x: &[f64], cfg: &EstimatorConfig) -> Result<crate::elw::EstimateResult> {
        match self {
            Self::Elw => estimate(x, cfg),
            Self::Lw => lw_estimate(x, cfg),
            Self::Hc => tapered_estimate(x, cfg, TaperKind::HurvichChen),
            Self::Velasco => tapered_estimate(x, cfg, TaperKind::VelascoBartlett),
        }
    }
}

impl std::fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for EstimatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown estimator '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub n: usize,
    pub m: usize,
    pub reps: usize,
    pub d_values: Vec<f64>,
    pub estimators: Vec<EstimatorKind>,
    pub seed: u64,
    pub workers: usize,
    pub delta1: f64,
    pub delta2: f64,
    pub grid_step: f64,
    pub tol: f64,
    /// Number of grid points per density curve; 0 disables densities.
    pub density_points: usize,
}

impl McConfig {
    /// Desk-scale defaults: n = 500, m = 56, 1000 replications, bounds [-6, 6].
    pub fn new(d_values: Vec<f64>, estimators: Vec<EstimatorKind>) -> Self {
        let n = 500;
        let est = EstimatorConfig::for_length(n);
        Self {
            n,
            m: est.m,
            reps: 1000,
            d_values,
            estimators,
            seed: 20_070_101,
            workers: 1,
            delta1: est.delta1,
            delta2: est.delta2,
            grid_step: est.grid_step,
            tol: est.tol,
            density_points: 0,
        }
    }

    pub fn estimator_config(&self) -> EstimatorConfig {
        EstimatorConfig {
            m: self.m,
            delta1: self.delta1,
            delta2: self.delta2,
            mean_mode: MeanMode::None,
            grid_step: self.grid_step,
            tol: self.tol,
            ci_level: 0.95,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.reps == 0 {
            return Err(Error::InvalidParameter("reps must be at least 1".into()));
        }
        if self.d_values.is_empty() {
            return Err(Error::InvalidParameter("d list is empty".into()));
        }
        if self.estimators.is_empty() {
            return Err(Error::InvalidParameter("estimator list is empty".into()));
        }
        self.estimator_config().validate(self.n)?;
        if let Some(d) = self
            .d_values
            .iter()
            .find(|&&d| !(d.is_finite() && d >= self.delta1 && d <= self.delta2))
        {
            return Err(Error::InvalidParameter(format!(
                "true d = {d} lies outside the bounds [{}, {}]",
                self.delta1, self.delta2
            )));
        }
        Ok(())
    }
}

/// Moments of one (estimator, d) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McRow {
    pub estimator: EstimatorKind,
    pub d: f64,
    pub bias: f64,
    pub sd: f64,
    pub mse: f64,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityCurve {
    pub estimator: EstimatorKind,
    pub d: f64,
    pub bandwidth: f64,
    pub x: Vec<f64>,
    pub density: Vec<f64>,
}

/// Successful estimates of one cell, in replication order.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    pub estimator: EstimatorKind,
    pub d: f64,
    pub estimates: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McReport {
    pub n: usize,
    pub m: usize,
    pub reps: usize,
    pub seed: u64,
    pub rows: Vec<McRow>,
    pub densities: Vec<DensityCurve>,
    #[serde(skip)]
    pub samples: Vec<SampleSet>,
}

/// Bias, sample s.d. and MSE of `estimates` around `truth`. The s.d. of a
/// single estimate is 0.
pub fn moments(estimates: &[f64], truth: f64) -> (f64, f64, f64) {
    let k = estimates.len() as f64;
    let mean = estimates.iter().sum::<f64>() / k;
    let bias = mean - truth;
    let sd = if estimates.len() > 1 {
        (estimates.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (k - 1.0)).sqrt()
    } else {
        0.0
    };
    let mse = estimates.iter().map(|e| (e - truth).powi(2)).sum::<f64>() / k;
    (bias, sd, mse)
}

/// One replication: estimates indexed `[d][estimator]`.
fn replicate(
    cfg: &McConfig,
    est_cfg: &EstimatorConfig,
    rep: usize,
) -> Result<Vec<Vec<Option<f64>>>> {
    let u = NormalStream::new(cfg.seed, rep as u64).take(cfg.n);
    cfg.d_values
        .iter()
        .map(|&d| {
            let x = fracint(&u, d)?;
            Ok(cfg
                .estimators
                .iter()
                .map(|k| match k.run(&x, est_cfg) {
                    Ok(r) => Some(r.d_hat),
                    Err(e) => {
                        log::debug!("replication {rep}, d = {d}, {k}: {e}");
                        None
                    }
                })
                .collect())
        })
        .collect()
}

pub fn run_mc(cfg: &McConfig) -> Result<McReport> {
    cfg.validate()?;
    let est_cfg = cfg.estimator_config();
    let per_rep = map_indexed(cfg.reps, cfg.workers, |r| replicate(cfg, &est_cfg, r))?
        .into_iter()
        .collect::<Result<Vec<_>>>()?;

    let mut rows = Vec::new();
    let mut samples = Vec::new();
    let mut densities = Vec::new();
    for (di, &d) in cfg.d_values.iter().enumerate() {
        for (ei, &estimator) in cfg.estimators.iter().enumerate() {
            let estimates: Vec<f64> = per_rep.iter().filter_map(|rep| rep[di][ei]).collect();
            let failures = cfg.reps - estimates.len();
            if failures as f64 > MAX_FAILURE_RATE * cfg.reps as f64 || estimates.is_empty() {
                return Err(Error::Harness(format!(
                    "{estimator} at d = {d}: {failures} of {} replications failed",
                    cfg.reps
                )));
            }
            let (bias, sd, mse) = moments(&estimates, d);
            rows.push(McRow {
                estimator,
                d,
                bias,
                sd,
                mse,
                failures,
            });
            if cfg.density_points > 0 {
                densities.push(density_curve(estimator, d, &estimates, cfg.density_points)?);
            }
            samples.push(SampleSet {
                estimator,
                d,
                estimates,
            });
        }
    }
    Ok(McReport {
        n: cfg.n,
        m: cfg.m,
        reps: cfg.reps,
        seed: cfg.seed,
        rows,
        densities,
        samples,
    })
}

fn density_curve(
    estimator: EstimatorKind,
    d: f64,
    estimates: &[f64],
    points: usize,
) -> Result<DensityCurve> {
    let bandwidth = silverman_bandwidth(estimates)?;
    let x = default_grid(estimates, bandwidth, points);
    let density = kde(estimates, bandwidth, &x)?;
    Ok(DensityCurve {
        estimator,
        d,
        bandwidth,
        x,
        density,
    })
}

/// 17 significant digits, so values round-trip exactly.
pub fn format_number(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_error(e: impl std::fmt::Display) -> Error {
    Error::Harness(format!("csv: {e}"))
}

impl McReport {
    /// Columns `estimator,d,bias,sd,mse,failures`.
    pub fn table_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["estimator", "d", "bias", "sd", "mse", "failures"])
            .map_err(csv_error)?;
        for r in &self.rows {
            w.write_record([
                r.estimator.name().to_string(),
                format_number(r.d),
                format_number(r.bias),
                format_number(r.sd),
                format_number(r.mse),
                r.failures.to_string(),
            ])
            .map_err(csv_error)?;
        }
        into_string(w)
    }

    /// Columns `estimator,d,x,density`.
    pub fn density_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["estimator", "d", "x", "density"])
            .map_err(csv_error)?;
        for c in &self.densities {
            for (x, f) in c.x.iter().zip(&c.density) {
                w.write_record([
                    c.estimator.name().to_string(),
                    format_number(c.d),
                    format_number(*x),
                    format_number(*f),
                ])
                .map_err(csv_error)?;
            }
        }
        into_string(w)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Harness(format!("json: {e}")))
    }

    pub fn row(&self, estimator: EstimatorKind, d: f64) -> Option<&McRow> {
        self.rows
            .iter()
            .find(|r| r.estimator == estimator && r.d == d)
    }

    pub fn samples_for(&self, estimator: EstimatorKind, d: f64) -> Option<&[f64]> {
        self.samples
            .iter()
            .find(|s| s.estimator == estimator && s.d == d)
            .map(|s| s.estimates.as_slice())
    }
}

fn into_string(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(csv_error)?;
    String::from_utf8(bytes).map_err(csv_error)
}
