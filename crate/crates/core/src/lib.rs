//! Exact local Whittle estimation of the memory parameter `d` of a
//! fractionally integrated process.
//!
//! The crate is organised bottom-up:
//!
//! - [`fracfilter`]: truncated binomial coefficients and the filters
//!   `(1 - L)^d` / `(1 - L)^{-d}` applied with a zero pre-sample.
//! - [`spectrum`]: discrete Fourier transforms, periodograms and the exact
//!   finite-sample decomposition of the transform of a filtered series.
//! - [`elw`]: the exact local Whittle objective and estimator.
//! - [`baselines`]: the conventional local Whittle estimator and two tapered
//!   variants.
//! - [`simulate`]: reproducible generation of `I(d)` processes.
//! - [`mc`] and [`kde`]: the Monte Carlo replication harness and kernel
//!   density curves.
//!
//! Replication loops run on rayon when the `parallel` feature (default) is
//! enabled and fall back to a plain sequential loop otherwise.

pub mod baselines;
pub mod elw;
mod error;
pub mod fracfilter;
pub mod kde;
pub mod mc;
pub mod optimize;
mod parallel;
pub mod series;
pub mod simulate;
pub mod spectrum;

pub use baselines::{lw_estimate, tapered_estimate, TaperKind};
pub use elw::{estimate, EstimateResult, EstimatorConfig, MeanMode, Warning};
pub use error::{Error, Result};
pub use fracfilter::{frac_coeffs, fracdiff, fracint, FracCoeffs};
pub use mc::{run_mc, EstimatorKind, McConfig, McReport};
pub use series::TimeSeries;
pub use simulate::{gen_fractional, Innovation, SimSpec};
