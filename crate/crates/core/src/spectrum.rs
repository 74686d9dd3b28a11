//! Discrete Fourier transforms and periodograms at the Fourier frequencies
//! `lambda_j = 2 pi j / n`, plus the pieces of the exact decomposition of
//! the transform of a fractionally differenced series:
//!
//! ```text
//! w_u(l) = D_n(e^{il}; d) w_x(l) - (2 pi n)^{-1/2} e^{inl} Xtilde_{l,n}(d),   u = (1 - L)^d x
//! ```
//!
//! Transforms use `w_a(l) = (2 pi n)^{-1/2} sum_{t=1}^n a_t e^{itl}`.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};
use crate::fracfilter::{coeffs_unchecked, fracdiff};

/// `lambda_j = 2 pi j / n`.
pub fn fourier_freq(j: usize, n: usize) -> f64 {
    2.0 * PI * j as f64 / n as f64
}

/// Transform and periodogram of one series at `lambda_1..lambda_J`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralView {
    pub n: usize,
    pub freqs: Vec<f64>,
    pub dft: Vec<Complex64>,
    pub pgram: Vec<f64>,
}

/// Full-grid transform of series of a fixed length.
#[derive(Clone)]
pub struct DftPlan {
    n: usize,
    fft: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for DftPlan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DftPlan").field("n", &self.n).finish()
    }
}

impl DftPlan {
    pub fn new(n: usize) -> Self {
        // Positive exponent, so the unnormalised inverse transform.
        let fft = FftPlanner::new().plan_fft_inverse(n.max(1));
        Self { n, fft }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// `w_a(lambda_j)` for `j = 0..n`.
    ///
    /// # Panics
    /// If `a.len()` differs from the plan length.
    pub fn full(&self, a: &[f64]) -> Vec<Complex64> {
        assert_eq!(a.len(), self.n, "series length does not match plan");
        let mut buf: Vec<Complex64> = a.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.fft.process(&mut buf);
        // The FFT sums from t = 0; shifting to t = 1 multiplies by e^{i lambda_j}.
        let scale = (2.0 * PI * self.n as f64).powf(-0.5);
        for (j, w) in buf.iter_mut().enumerate() {
            *w *= Complex64::cis(fourier_freq(j, self.n)) * scale;
        }
        buf
    }

    /// Periodogram ordinates `I_a(lambda_j)` for `j = 1..=count`.
    pub fn periodogram(&self, a: &[f64], count: usize) -> Vec<f64> {
        // The phase factor does not change |w|, so skip it.
        assert_eq!(a.len(), self.n, "series length does not match plan");
        let mut buf: Vec<Complex64> = a.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.fft.process(&mut buf);
        let scale = 1.0 / (2.0 * PI * self.n as f64);
        buf[1..=count]
            .iter()
            .map(|w| w.norm_sqr() * scale)
            .collect()
    }

    pub fn grid(&self, a: &[f64], count: usize) -> Result<SpectralView> {
        check_count(count, self.n)?;
        let full = self.full(a);
        let dft = full[1..=count].to_vec();
        Ok(SpectralView {
            n: self.n,
            freqs: (1..=count).map(|j| fourier_freq(j, self.n)).collect(),
            pgram: dft.iter().map(|w| w.norm_sqr()).collect(),
            dft,
        })
    }
}

fn check_count(count: usize, n: usize) -> Result<()> {
    if count == 0 || count >= n {
        return Err(Error::InvalidParameter(format!(
            "frequency count must lie in 1..={} for n = {n}, got {count}",
            n.saturating_sub(1)
        )));
    }
    Ok(())
}

/// Transform and periodogram of `a` at `lambda_1..lambda_count`.
pub fn dft_grid(a: &[f64], count: usize) -> Result<SpectralView> {
    check_count(count, a.len())?;
    DftPlan::new(a.len()).grid(a, count)
}

/// `D_n(e^{il}; d) = sum_{k=0}^n pi_k(d) e^{ikl}`.
pub fn dn_poly(lambda: f64, d: f64, n: usize) -> Result<Complex64> {
    ensure_finite("lambda", lambda)?;
    ensure_finite("d", d)?;
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    Ok(coeffs_unchecked(d, n + 1)
        .iter()
        .enumerate()
        .map(|(k, &c)| c * Complex64::cis(k as f64 * lambda))
        .sum())
}

/// `Xtilde_{l,n}(d) = sum_{p=0}^{n-1} dtilde_p e^{-ipl} x_{n-p}` with
/// `dtilde_p = sum_{k=p+1}^n pi_k(d) e^{ikl}`, built as a suffix sum.
pub fn tail_correction(x: &[f64], lambda: f64, d: f64) -> Result<Complex64> {
    ensure_finite("lambda", lambda)?;
    ensure_finite("d", d)?;
    let n = x.len();
    if n == 0 {
        return Err(Error::InvalidInput("series is empty".into()));
    }
    let coeffs = coeffs_unchecked(d, n + 1);
    let mut dtilde = Complex64::new(0.0, 0.0);
    let mut total = Complex64::new(0.0, 0.0);
    for p in (0..n).rev() {
        dtilde += coeffs[p + 1] * Complex64::cis((p + 1) as f64 * lambda);
        total += dtilde * Complex64::cis(-(p as f64) * lambda) * x[n - 1 - p];
    }
    Ok(total)
}

/// Normalised residual of the exact decomposition at `lambda_j`:
/// `|w_u - D_n w_x + (2 pi n)^{-1/2} e^{inl} Xtilde| / (|w_u| + 1)`
/// with `u = (1 - L)^d x`. Rounding-level for every `d`.
pub fn verify_lemma51(x: &[f64], d: f64, j: usize) -> Result<f64> {
    let n = x.len();
    check_count(j, n)?;
    let u = fracdiff(x, d)?;
    let plan = DftPlan::new(n);
    let w_u = plan.full(&u)[j];
    let w_x = plan.full(x)[j];
    let lambda = fourier_freq(j, n);
    let d_n = dn_poly(lambda, d, n)?;
    let tail = tail_correction(x, lambda, d)?;
    let boundary = Complex64::cis(n as f64 * lambda) * tail * (2.0 * PI * n as f64).powf(-0.5);
    Ok((w_u - d_n * w_x + boundary).norm() / (w_u.norm() + 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(n: usize, salt: u64) -> Vec<f64> {
        let mut s = salt.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 1;
        (0..n)
            .map(|_| {
                s ^= s << 13;
                s ^= s >> 7;
                s ^= s << 17;
                (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
            })
            .collect()
    }

    // Direct O(n^2) version of the tail sum.
    fn tail_correction_direct(x: &[f64], lambda: f64, d: f64) -> Complex64 {
        let n = x.len();
        let c = coeffs_unchecked(d, n + 1);
        let mut total = Complex64::new(0.0, 0.0);
        for p in 0..n {
            let mut dt = Complex64::new(0.0, 0.0);
            for (k, ck) in c.iter().enumerate().skip(p + 1) {
                dt += ck * Complex64::cis(k as f64 * lambda);
            }
            total += dt * Complex64::cis(-(p as f64) * lambda) * x[n - 1 - p];
        }
        total
    }

    #[test]
    fn constant_series_vanishes_off_zero() {
        let a = vec![3.5; 40];
        let view = dft_grid(&a, 39).unwrap();
        assert!(view.dft.iter().all(|w| w.norm() < 1e-12));
    }

    #[test]
    fn impulse_has_unit_phase_at_t1() {
        let n = 32;
        let mut a = vec![0.0; n];
        a[0] = 1.0;
        let view = dft_grid(&a, n - 1).unwrap();
        let scale = (2.0 * PI * n as f64).powf(-0.5);
        for (j, w) in view.dft.iter().enumerate() {
            let expect = Complex64::cis(fourier_freq(j + 1, n)) * scale;
            assert!((w - expect).norm() < 1e-15);
        }
    }

    #[test]
    fn matches_direct_sum() {
        let n = 64;
        let a = series(n, 3);
        let view = dft_grid(&a, n - 1).unwrap();
        for (idx, w) in view.dft.iter().enumerate() {
            let lambda = fourier_freq(idx + 1, n);
            let direct: Complex64 = a
                .iter()
                .enumerate()
                .map(|(t, &v)| v * Complex64::cis((t + 1) as f64 * lambda))
                .sum::<Complex64>()
                * (2.0 * PI * n as f64).powf(-0.5);
            assert!((w - direct).norm() <= 1e-12 * direct.norm().max(1e-3));
        }
    }

    #[test]
    fn periodogram_agrees_with_grid() {
        let a = series(100, 9);
        let plan = DftPlan::new(100);
        let fast = plan.periodogram(&a, 49);
        let view = plan.grid(&a, 49).unwrap();
        for (p, q) in fast.iter().zip(&view.pgram) {
            assert!((p - q).abs() <= 1e-14 * q.max(1e-12));
        }
    }

    #[test]
    fn count_out_of_range() {
        assert!(dft_grid(&[1.0, 2.0, 3.0], 0).is_err());
        assert!(dft_grid(&[1.0, 2.0, 3.0], 3).is_err());
        assert!(dft_grid(&[1.0, 2.0, 3.0], 2).is_ok());
    }

    #[test]
    fn dn_poly_small_orders() {
        let lambda = 0.7;
        assert_eq!(dn_poly(lambda, 0.0, 9).unwrap(), Complex64::new(1.0, 0.0));
        let one = dn_poly(lambda, 1.0, 5).unwrap();
        assert!((one - (1.0 - Complex64::cis(lambda))).norm() < 1e-15);
    }

    #[test]
    fn dn_poly_tracks_power_law_near_origin() {
        let n = 256;
        let d = 0.4;
        let lambda = fourier_freq(3, n);
        let dn = dn_poly(lambda, d, n).unwrap();
        let approx = lambda.powf(d) * Complex64::cis(-PI / 2.0 * d);
        assert!((dn / approx - 1.0).norm() < 0.15);
    }

    #[test]
    fn tail_correction_trivial_cases() {
        let x = series(50, 1);
        assert_eq!(
            tail_correction(&x, 0.3, 0.0).unwrap(),
            Complex64::new(0.0, 0.0)
        );
        assert_eq!(tail_correction(&[0.0; 20], 0.3, 1.7).unwrap().norm(), 0.0);
    }

    #[test]
    fn tail_correction_matches_direct() {
        let n = 200;
        let x = series(n, 5);
        let lambda = fourier_freq(5, n);
        let fast = tail_correction(&x, lambda, 1.3).unwrap();
        let slow = tail_correction_direct(&x, lambda, 1.3);
        assert!((fast - slow).norm() <= 1e-10 * slow.norm());
    }

    #[test]
    fn decomposition_is_exact() {
        let x = series(256, 11);
        assert_eq!(verify_lemma51(&x, 0.0, 4).unwrap(), 0.0);
        assert!(verify_lemma51(&x, 2.3, 7).unwrap() <= 1e-9);
        assert!(verify_lemma51(&x, 2.3, 256).is_err());
    }
}
