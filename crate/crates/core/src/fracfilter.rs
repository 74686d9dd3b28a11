//! Truncated fractional difference and integration filters.
//!
//! `(1 - L)^d x_t = sum_{k=0}^{t-1} pi_k(d) x_{t-k}` for `t = 1..n`, where
//! `pi_k(d) = (-d)_k / k!` and observations before `t = 1` are zero. The
//! truncated operators for `d` and `-d` are exact inverses of one another on
//! such causal sequences.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};

/// Series shorter than this are filtered by the direct double loop.
pub const DIRECT_THRESHOLD: usize = 128;

/// Filters whose coefficients vanish beyond this many taps (nonnegative
/// integer `d`) are applied directly regardless of length.
const SPARSE_TAPS: usize = 32;

/// Binomial coefficients `pi_0(d)..pi_K(d)` of `(1 - L)^d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FracCoeffs {
    pub d: f64,
    pub coeffs: Vec<f64>,
}

impl FracCoeffs {
    /// Truncation order `K`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Number of leading coefficients up to and including the last nonzero one.
    pub fn support(&self) -> usize {
        self.coeffs
            .iter()
            .rposition(|&c| c != 0.0)
            .map_or(0, |i| i + 1)
    }
}

/// `pi_k(d) = (-d)_k / k!` for `k = 0..=order` via the recursion
/// `pi_k = pi_{k-1} (k - 1 - d) / k`.
pub fn frac_coeffs(d: f64, order: usize) -> Result<FracCoeffs> {
    ensure_finite("d", d)?;
    Ok(FracCoeffs {
        d,
        coeffs: coeffs_unchecked(d, order + 1),
    })
}

pub(crate) fn coeffs_unchecked(d: f64, len: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(len);
    let mut c = 1.0;
    for k in 0..len {
        if k > 0 {
            c *= (k as f64 - 1.0 - d) / k as f64;
        }
        out.push(c);
    }
    out
}

/// `(1 - L)^d x` with zero pre-sample.
pub fn fracdiff(x: &[f64], d: f64) -> Result<Vec<f64>> {
    ensure_finite("d", d)?;
    if x.is_empty() {
        return Err(Error::InvalidInput("series is empty".into()));
    }
    let filter = FracFilter::new(x.len());
    Ok(filter.apply(&filter.prepare(x), d))
}

/// `(1 - L)^{-d} u` with zero pre-sample.
pub fn fracint(u: &[f64], d: f64) -> Result<Vec<f64>> {
    fracdiff(u, -d)
}

/// A series held in the form the filter needs: the raw values and, for long
/// series, their zero-padded spectrum.
#[derive(Debug, Clone)]
pub struct PreparedSeries {
    values: Vec<f64>,
    spectrum: Option<Vec<Complex64>>,
}

impl PreparedSeries {
    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Fractional filter for series of one fixed length `n`.
///
/// Holds FFT plans only; every call allocates its own buffers so a single
/// filter can be shared between threads.
#[derive(Clone)]
pub struct FracFilter {
    n: usize,
    padded: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for FracFilter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FracFilter")
            .field("n", &self.n)
            .field("padded", &self.padded)
            .finish()
    }
}

impl FracFilter {
    pub fn new(n: usize) -> Self {
        let padded = (2 * n).next_power_of_two().max(2);
        let mut planner = FftPlanner::new();
        Self {
            n,
            padded,
            forward: planner.plan_fft_forward(padded),
            inverse: planner.plan_fft_inverse(padded),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    fn uses_fft(&self) -> bool {
        self.n >= DIRECT_THRESHOLD
    }

    /// # Panics
    /// If `x.len()` differs from the filter length.
    pub fn prepare(&self, x: &[f64]) -> PreparedSeries {
        assert_eq!(x.len(), self.n, "series length does not match filter");
        let spectrum = self.uses_fft().then(|| {
            let mut buf = self.padded_buffer(x);
            self.forward.process(&mut buf);
            buf
        });
        PreparedSeries {
            values: x.to_vec(),
            spectrum,
        }
    }

    /// `(1 - L)^d` applied to a prepared series.
    pub fn apply(&self, x: &PreparedSeries, d: f64) -> Vec<f64> {
        let coeffs = coeffs_unchecked(d, self.n);
        let support = coeffs.iter().rposition(|&c| c != 0.0).map_or(0, |i| i + 1);
        match &x.spectrum {
            Some(spec) if support > SPARSE_TAPS => self.apply_fft(spec, &coeffs),
            _ => convolve_direct(&x.values, &coeffs[..support]),
        }
    }

    fn padded_buffer(&self, x: &[f64]) -> Vec<Complex64> {
        let mut buf = vec![Complex64::new(0.0, 0.0); self.padded];
        for (b, &v) in buf.iter_mut().zip(x) {
            b.re = v;
        }
        buf
    }

    fn apply_fft(&self, x_spec: &[Complex64], coeffs: &[f64]) -> Vec<f64> {
        let mut buf = self.padded_buffer(coeffs);
        let mut scratch = vec![
            Complex64::new(0.0, 0.0);
            self.forward
                .get_inplace_scratch_len()
                .max(self.inverse.get_inplace_scratch_len())
        ];
        self.forward.process_with_scratch(&mut buf, &mut scratch);
        for (b, s) in buf.iter_mut().zip(x_spec) {
            *b *= s;
        }
        self.inverse.process_with_scratch(&mut buf, &mut scratch);
        let scale = 1.0 / self.padded as f64;
        buf[..self.n].iter().map(|c| c.re * scale).collect()
    }
}

/// Causal convolution truncated to the input length; `coeffs` may be shorter
/// than `x` when the tail is zero.
fn convolve_direct(x: &[f64], coeffs: &[f64]) -> Vec<f64> {
    (0..x.len())
        .map(|t| {
            coeffs
                .iter()
                .take(t + 1)
                .enumerate()
                .map(|(k, &c)| c * x[t - k])
                .sum()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn integer_orders_terminate() {
        assert_eq!(
            frac_coeffs(0.0, 4).unwrap().coeffs,
            vec![1.0, 0.0, 0.0, 0.0, 0.0]
        );
        assert_eq!(
            frac_coeffs(1.0, 4).unwrap().coeffs,
            vec![1.0, -1.0, 0.0, 0.0, 0.0]
        );
        assert_eq!(
            frac_coeffs(2.0, 4).unwrap().coeffs,
            vec![1.0, -2.0, 1.0, 0.0, 0.0]
        );
        assert_eq!(frac_coeffs(3.0, 10).unwrap().support(), 4);
    }

    #[test]
    fn half_order_matches_gamma_ratio() {
        // Gamma(k - d) / (Gamma(-d) Gamma(k + 1)) at d = 0.5
        use statrs::function::gamma::gamma;
        let c = frac_coeffs(0.5, 2).unwrap();
        for k in 0..=2 {
            let oracle = gamma(k as f64 - 0.5) / (gamma(-0.5) * gamma(k as f64 + 1.0));
            assert_relative_eq!(c.coeffs[k], oracle, max_relative = 1e-12);
        }
        assert_relative_eq!(c.coeffs[1], -0.5);
        assert_relative_eq!(c.coeffs[2], -0.125);
    }

    #[test]
    fn large_orders_stay_finite() {
        for d in [-6.0, -2.5, 0.4, 5.5] {
            let c = frac_coeffs(d, 4096).unwrap();
            assert!(c.coeffs.iter().all(|v| v.is_finite()));
            assert_eq!(c.order(), 4096);
        }
    }

    #[test]
    fn rejects_non_finite_d() {
        assert!(matches!(
            frac_coeffs(f64::NAN, 3),
            Err(Error::InvalidParameter(_))
        ));
        assert!(fracdiff(&[1.0], f64::INFINITY).is_err());
        assert!(matches!(fracdiff(&[], 0.3), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn small_examples() {
        assert_eq!(
            fracdiff(&[5.0, 5.0, 5.0], 1.0).unwrap(),
            vec![5.0, 0.0, 0.0]
        );
        assert_eq!(fracint(&[1.0, 0.0, 0.0, 0.0], 1.0).unwrap(), vec![1.0; 4]);
        assert_eq!(fracint(&[1.0, 1.0], 0.5).unwrap(), vec![1.0, 1.5]);
        let x = [0.3, -1.2, 4.0, 2.5];
        assert_eq!(fracdiff(&x, 0.0).unwrap(), x.to_vec());
        assert_eq!(fracint(&x, 0.0).unwrap(), x.to_vec());
    }

    #[test]
    fn identity_is_exact_on_fft_lengths() {
        let x: Vec<f64> = (0..300).map(|t| (t as f64 * 0.37).sin() * 3.0).collect();
        assert_eq!(fracdiff(&x, 0.0).unwrap(), x);
    }

    #[test]
    fn fft_and_direct_paths_agree() {
        let x: Vec<f64> = (0..400)
            .map(|t| ((t * 7919) % 101) as f64 / 50.0 - 1.0)
            .collect();
        let filter = FracFilter::new(x.len());
        let prepared = filter.prepare(&x);
        for d in [-1.7, -0.4, 0.45, 1.3, 2.2] {
            let coeffs = coeffs_unchecked(d, x.len());
            let fast = filter.apply(&prepared, d);
            let slow = convolve_direct(&x, &coeffs);
            let scale = slow.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            for (a, b) in fast.iter().zip(&slow) {
                assert!((a - b).abs() <= 1e-11 * scale, "d={d}: {a} vs {b}");
            }
        }
    }
}
