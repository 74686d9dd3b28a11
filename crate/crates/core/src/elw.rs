//! Exact local Whittle estimation.
//!
//! For a trial `d` the data are filtered by `(1 - L)^d` and the concentrated
//! objective
//!
//! ```text
//! R(d) = log G(d) - 2 d mean_j log lambda_j,    G(d) = mean_j I_{(1-L)^d x}(lambda_j)
//! ```
//!
//! is minimised over `[delta1, delta2]` with `j = 1..m`.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};
use crate::fracfilter::{FracFilter, PreparedSeries};
use crate::optimize::{grid_golden_minimize, SearchSettings};
use crate::simulate::standard_normal_quantile;
use crate::spectrum::{fourier_freq, DftPlan};

/// Two-sided 97.5% standard normal quantile.
pub const Z_975: f64 = 1.959964;

/// Widest optimisation interval covered by the asymptotic theory.
pub const MAX_THEORY_WIDTH: f64 = 4.5;

/// Distance from `d = 0` or `d = 1` inside which weighted mean correction
/// triggers a coverage caveat.
const MEAN_CAVEAT_RADIUS: f64 = 0.1;

/// How the unknown level of the series is removed before filtering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeanMode {
    #[default]
    None,
    SampleMean,
    FirstObs,
    /// `w(d) mean + (1 - w(d)) x_1`, re-evaluated at every trial `d`.
    Weighted,
}

impl std::str::FromStr for MeanMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Self::None),
            "sample-mean" => Ok(Self::SampleMean),
            "first-obs" => Ok(Self::FirstObs),
            "weighted" => Ok(Self::Weighted),
            other => Err(Error::InvalidParameter(format!(
                "unknown mean mode '{other}'"
            ))),
        }
    }
}

/// Weight on the sample mean: 1 below 1/2, 0 above 3/4, quintic smoothstep between.
pub fn mean_weight(d: f64) -> f64 {
    if d <= 0.5 {
        1.0
    } else if d >= 0.75 {
        0.0
    } else {
        let u = 4.0 * d - 2.0;
        1.0 - u * u * u * (u * (6.0 * u - 15.0) + 10.0)
    }
}

/// The level subtracted from the series under `mode` at trial value `d`.
pub fn mean_level(x: &[f64], mode: MeanMode, d: f64) -> f64 {
    let mean = || x.iter().sum::<f64>() / x.len() as f64;
    match mode {
        MeanMode::None => 0.0,
        MeanMode::SampleMean => mean(),
        MeanMode::FirstObs => x[0],
        MeanMode::Weighted => {
            let w = mean_weight(d);
            if w == 1.0 {
                mean()
            } else if w == 0.0 {
                x[0]
            } else {
                w * mean() + (1.0 - w) * x[0]
            }
        }
    }
}

pub fn apply_mean_mode(x: &[f64], mode: MeanMode, d: f64) -> Vec<f64> {
    if x.is_empty() || mode == MeanMode::None {
        return x.to_vec();
    }
    let level = mean_level(x, mode, d);
    x.iter().map(|v| v - level).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimatorConfig {
    pub m: usize,
    pub delta1: f64,
    pub delta2: f64,
    pub mean_mode: MeanMode,
    pub grid_step: f64,
    pub tol: f64,
    pub ci_level: f64,
}

/// `floor(n^0.65)`.
pub fn default_bandwidth(n: usize) -> usize {
    (n as f64).powf(0.65).floor() as usize
}

impl EstimatorConfig {
    /// Defaults for a series of length `n`: `m = floor(n^0.65)`, bounds `[-6, 6]`.
    pub fn for_length(n: usize) -> Self {
        Self {
            m: default_bandwidth(n),
            delta1: -6.0,
            delta2: 6.0,
            mean_mode: MeanMode::None,
            grid_step: 0.05,
            tol: 1e-6,
            ci_level: 0.95,
        }
    }

    pub fn with_bounds(mut self, delta1: f64, delta2: f64) -> Self {
        self.delta1 = delta1;
        self.delta2 = delta2;
        self
    }

    pub fn with_m(mut self, m: usize) -> Self {
        self.m = m;
        self
    }

    pub fn with_mean_mode(mut self, mode: MeanMode) -> Self {
        self.mean_mode = mode;
        self
    }

    /// Checks the configuration against a series of length `n`; returns the
    /// non-fatal warnings it implies.
    pub fn validate(&self, n: usize) -> Result<Vec<Warning>> {
        if self.m == 0 || 2 * self.m >= n {
            return Err(Error::InvalidParameter(format!(
                "bandwidth m must satisfy 1 <= m < n/2, got m = {} with n = {n}",
                self.m
            )));
        }
        ensure_finite("delta1", self.delta1)?;
        ensure_finite("delta2", self.delta2)?;
        if self.delta1 >= self.delta2 {
            return Err(Error::InvalidParameter(format!(
                "bounds must satisfy delta1 < delta2, got [{}, {}]",
                self.delta1, self.delta2
            )));
        }
        if !(self.tol > 0.0 && self.grid_step > self.tol) {
            return Err(Error::InvalidParameter(format!(
                "need grid_step > tol > 0, got grid_step = {}, tol = {}",
                self.grid_step, self.tol
            )));
        }
        if !(self.ci_level > 0.0 && self.ci_level < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "ci level must lie in (0, 1), got {}",
                self.ci_level
            )));
        }
        let width = self.delta2 - self.delta1;
        Ok(if width > MAX_THEORY_WIDTH {
            vec![Warning::WideBounds { width }]
        } else {
            Vec::new()
        })
    }

    pub(crate) fn search(&self) -> SearchSettings {
        SearchSettings {
            lo: self.delta1,
            hi: self.delta2,
            grid_step: self.grid_step,
            tol: self.tol,
        }
    }

    pub(crate) fn z_value(&self) -> f64 {
        if self.ci_level == 0.95 {
            Z_975
        } else {
            standard_normal_quantile(0.5 + 0.5 * self.ci_level)
        }
    }
}

/// Non-fatal diagnostics attached to an estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Warning {
    /// Optimisation interval wider than 9/2.
    WideBounds { width: f64 },
    /// Weighted mean correction with an estimate near 0 or 1, where interval
    /// coverage is not established.
    MeanCorrectionCaveat { d_hat: f64 },
}

impl std::fmt::Display for Warning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Warning::WideBounds { width } => write!(
                f,
                "optimisation interval width {width} exceeds 9/2; consistency is only established for narrower intervals"
            ),
            Warning::MeanCorrectionCaveat { d_hat } => write!(
                f,
                "weighted mean correction with d_hat = {d_hat} near 0 or 1: confidence interval coverage is not established here"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateResult {
    pub d_hat: f64,
    pub g_hat: f64,
    pub se: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub objective_at_min: f64,
    pub n_evals: usize,
    pub boundary_hit: bool,
    pub m: usize,
    pub warnings: Vec<Warning>,
}

impl EstimateResult {
    pub(crate) fn assemble(
        cfg: &EstimatorConfig,
        d_hat: f64,
        g_hat: f64,
        se: f64,
        objective_at_min: f64,
        n_evals: usize,
        mut warnings: Vec<Warning>,
    ) -> Self {
        let half = cfg.z_value() * se;
        if cfg.mean_mode == MeanMode::Weighted
            && (d_hat.abs() < MEAN_CAVEAT_RADIUS || (d_hat - 1.0).abs() < MEAN_CAVEAT_RADIUS)
        {
            warnings.push(Warning::MeanCorrectionCaveat { d_hat });
        }
        Self {
            d_hat,
            g_hat,
            se,
            ci_low: d_hat - half,
            ci_high: d_hat + half,
            objective_at_min,
            n_evals,
            boundary_hit: (d_hat - cfg.delta1).abs() <= cfg.tol
                || (d_hat - cfg.delta2).abs() <= cfg.tol,
            m: cfg.m,
            warnings,
        }
    }
}

/// `1 / (2 sqrt(m))`.
pub fn standard_error(m: usize) -> f64 {
    0.5 / (m as f64).sqrt()
}

/// `mean_{j=1..m} log lambda_j`.
pub(crate) fn mean_log_freq(m: usize, n: usize) -> f64 {
    (1..=m).map(|j| fourier_freq(j, n).ln()).sum::<f64>() / m as f64
}

/// Reusable evaluator of `G(d)` and `R(d)` for one series.
pub struct ElwObjective {
    n: usize,
    m: usize,
    mean_mode: MeanMode,
    filter: FracFilter,
    dft: DftPlan,
    raw: Vec<f64>,
    prepared: Option<PreparedSeries>,
    mean_log_freq: f64,
}

impl ElwObjective {
    pub fn new(x: &[f64], m: usize, mean_mode: MeanMode) -> Result<Self> {
        let n = x.len();
        if m == 0 || m >= n {
            return Err(Error::InvalidParameter(format!(
                "bandwidth must lie in 1..={} for n = {n}, got {m}",
                n.saturating_sub(1)
            )));
        }
        let filter = FracFilter::new(n);
        // Weighted correction depends on d, so the series is re-prepared per call.
        let prepared = match mean_mode {
            MeanMode::Weighted => None,
            mode => Some(filter.prepare(&apply_mean_mode(x, mode, 0.0))),
        };
        Ok(Self {
            n,
            m,
            mean_mode,
            dft: DftPlan::new(n),
            filter,
            raw: x.to_vec(),
            prepared,
            mean_log_freq: mean_log_freq(m, n),
        })
    }

    pub fn g_hat(&self, d: f64) -> f64 {
        let filtered = match &self.prepared {
            Some(p) => self.filter.apply(p, d),
            None => {
                let shifted = apply_mean_mode(&self.raw, self.mean_mode, d);
                self.filter.apply(&self.filter.prepare(&shifted), d)
            }
        };
        self.dft.periodogram(&filtered, self.m).iter().sum::<f64>() / self.m as f64
    }

    pub fn objective(&self, d: f64) -> Result<f64> {
        let g = self.g_hat(d);
        if g == 0.0 {
            return Err(Error::Degenerate(format!(
                "filtered series has zero periodogram mass at d = {d}"
            )));
        }
        let r = g.ln() - 2.0 * d * self.mean_log_freq;
        if r.is_finite() {
            Ok(r)
        } else {
            Err(Error::EstimationFailed(format!(
                "objective not finite at d = {d}"
            )))
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }
}

/// `G(d) = mean_{j=1..m} I_{(1-L)^d x}(lambda_j)`. Returns 0 for a series
/// whose filtered periodogram vanishes.
pub fn g_hat(x: &[f64], d: f64, m: usize) -> Result<f64> {
    ensure_finite("d", d)?;
    let g = ElwObjective::new(x, m, MeanMode::None)?.g_hat(d);
    if g == 0.0 {
        log::warn!("degenerate input: filtered periodogram is identically zero at d = {d}");
    }
    Ok(g)
}

/// `R(d) = log G(d) - 2 d mean_j log lambda_j`.
pub fn objective_r(x: &[f64], d: f64, m: usize) -> Result<f64> {
    ensure_finite("d", d)?;
    ElwObjective::new(x, m, MeanMode::None)?.objective(d)
}

/// Exact local Whittle estimate of `d`.
pub fn estimate(x: &[f64], cfg: &EstimatorConfig) -> Result<EstimateResult> {
    let warnings = cfg.validate(x.len())?;
    let objective = ElwObjective::new(x, cfg.m, cfg.mean_mode)?;
    let mut last_error = None;
    let minimum = grid_golden_minimize(
        |d| match objective.objective(d) {
            Ok(v) => Some(v),
            Err(e) => {
                last_error = Some(e);
                None
            }
        },
        cfg.search(),
    );
    let Some(minimum) = minimum else {
        return Err(match last_error {
            Some(Error::Degenerate(msg)) => Error::Degenerate(msg),
            _ => Error::EstimationFailed(
                "objective not evaluable anywhere on the search grid".into(),
            ),
        });
    };
    Ok(EstimateResult::assemble(
        cfg,
        minimum.x,
        objective.g_hat(minimum.x),
        standard_error(cfg.m),
        minimum.value,
        minimum.n_evals,
        warnings,
    ))
}
