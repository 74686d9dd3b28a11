//! Reproducible simulation of type-II fractionally integrated processes
//! `x_t = (1 - L)^{-d} u_t 1{t >= 1}`.
//!
//! Innovations come from a ChaCha stream keyed by `(seed, stream)`, so
//! replication `r` of an experiment is a pure function of the master seed and
//! `r` no matter which thread runs it. Gaussian draws use the inverse CDF of
//! the uniform stream.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fracfilter::fracint;
use crate::series::TimeSeries;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Innovation {
    GaussianIid,
    /// `u_t = sum_j c_j e_{t-j}` with i.i.d. standard normal `e`.
    LinearFilter {
        coeffs: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimSpec {
    pub n: usize,
    pub d: f64,
    pub seed: u64,
    /// Replication index; selects an independent stream under `seed`.
    pub stream: u64,
    pub innovation: Innovation,
}

impl SimSpec {
    pub fn gaussian(n: usize, d: f64, seed: u64) -> Self {
        Self {
            n,
            d,
            seed,
            stream: 0,
            innovation: Innovation::GaussianIid,
        }
    }

    pub fn with_stream(mut self, stream: u64) -> Self {
        self.stream = stream;
        self
    }
}

/// Standard normal draws from the stream `(seed, stream)`.
pub struct NormalStream {
    rng: ChaCha20Rng,
}

impl NormalStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { rng }
    }

    /// Uniform on the open interval (0, 1) with 53 random bits.
    pub fn next_uniform(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    pub fn next_normal(&mut self) -> f64 {
        standard_normal_quantile(self.next_uniform())
    }

    pub fn take(&mut self, count: usize) -> Vec<f64> {
        (0..count).map(|_| self.next_normal()).collect()
    }
}

/// Innovations `u_1..u_n` for `spec`.
pub fn innovations(spec: &SimSpec) -> Result<Vec<f64>> {
    if spec.n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let mut stream = NormalStream::new(spec.seed, spec.stream);
    match &spec.innovation {
        Innovation::GaussianIid => Ok(stream.take(spec.n)),
        Innovation::LinearFilter { coeffs } => {
            if coeffs.is_empty() {
                return Err(Error::InvalidParameter("filter has no coefficients".into()));
            }
            if coeffs.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidParameter(
                    "filter coefficients must be finite".into(),
                ));
            }
            // q pre-sample shocks so every u_t sees the full filter.
            let q = coeffs.len() - 1;
            let eps = stream.take(spec.n + q);
            Ok((0..spec.n)
                .map(|t| {
                    coeffs
                        .iter()
                        .enumerate()
                        .map(|(j, c)| c * eps[t + q - j])
                        .sum()
                })
                .collect())
        }
    }
}

/// Simulated `I(d)` series.
pub fn gen_fractional(spec: &SimSpec) -> Result<TimeSeries> {
    crate::error::ensure_finite("d", spec.d)?;
    let u = innovations(spec)?;
    Ok(TimeSeries::new(fracint(&u, spec.d)?)?.with_true_d(spec.d))
}

/// Inverse standard normal CDF (Wichura's AS 241, PPND16; relative accuracy
/// about 1e-16).
pub fn standard_normal_quantile(p: f64) -> f64 {
    if p <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if p >= 1.0 {
        return f64::INFINITY;
    }
    let q = p - 0.5;
    if q.abs() <= 0.425 {
        let r = 0.180625 - q * q;
        return q * poly(&A, r) / poly(&B, r);
    }
    let r = if q < 0.0 { p } else { 1.0 - p };
    let r = (-r.ln()).sqrt();
    let value = if r <= 5.0 {
        let r = r - 1.6;
        poly(&C, r) / poly(&D, r)
    } else {
        let r = r - 5.0;
        poly(&E, r) / poly(&F, r)
    };
    if q < 0.0 {
        -value
    } else {
        value
    }
}

fn poly(coeffs: &[f64; 8], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

const A: [f64; 8] = [
    3.387_132_872_796_366_5,
    1.331_416_678_917_843_8e2,
    1.971_590_950_306_551_3e3,
    1.373_169_376_550_946e4,
    4.592_195_393_154_987e4,
    6.726_577_092_700_87e4,
    3.343_057_558_358_813e4,
    2.509_080_928_730_122_7e3,
];
const B: [f64; 8] = [
    1.0,
    4.231_333_070_160_091e1,
    6.871_870_074_920_579e2,
    5.394_196_021_424_751e3,
    2.121_379_430_158_659_7e4,
    3.930_789_580_009_271e4,
    2.872_908_573_572_194_3e4,
    5.226_495_278_852_545e3,
];
const C: [f64; 8] = [
    1.423_437_110_749_683_5,
    4.630_337_846_156_546,
    5.769_497_221_460_691,
    3.647_848_324_763_204_5,
    1.270_458_252_452_368_4,
    2.417_807_251_774_506e-1,
    2.272_384_498_926_918_4e-2,
    7.745_450_142_783_414e-4,
];
const D: [f64; 8] = [
    1.0,
    2.053_191_626_637_759,
    1.676_384_830_183_803_8,
    6.897_673_349_851e-1,
    1.481_039_764_274_800_7e-1,
    1.519_866_656_361_645_7e-2,
    5.475_938_084_995_345e-4,
    1.050_750_071_644_416_9e-9,
];
const E: [f64; 8] = [
    6.657_904_643_501_103,
    5.463_784_911_164_114,
    1.784_826_539_917_291_3,
    2.965_605_718_285_048_7e-1,
    2.653_218_952_657_612_4e-2,
    1.242_660_947_388_078_4e-3,
    2.711_555_568_743_487_6e-5,
    2.010_334_399_292_288_1e-7,
];
const F: [f64; 8] = [
    1.0,
    5.998_322_065_558_88e-1,
    1.369_298_809_227_358e-1,
    1.487_536_129_085_061_5e-2,
    7.868_691_311_456_133e-4,
    1.846_318_317_510_054_8e-5,
    1.421_511_758_316_446e-7,
    2.044_263_103_389_939_7e-15,
];

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::distribution::{ContinuousCDF, Normal};

    #[test]
    fn quantile_matches_reference_cdf() {
        let normal = Normal::new(0.0, 1.0).unwrap();
        for p in [
            1e-300,
            1e-12,
            1e-5,
            0.01,
            0.2,
            0.5,
            0.8,
            0.975,
            0.999_999,
            1.0 - 1e-12,
        ] {
            let z = standard_normal_quantile(p);
            let back = normal.cdf(z);
            assert!(
                ((back - p) / p.min(1.0 - p)).abs() < 1e-9,
                "p={p}, z={z}, back={back}"
            );
        }
        assert!((standard_normal_quantile(0.975) - 1.959_963_984_540_054).abs() < 1e-14);
        assert_eq!(standard_normal_quantile(0.5), 0.0);
    }

    #[test]
    fn streams_are_deterministic_and_distinct() {
        let a = NormalStream::new(42, 0).take(16);
        let b = NormalStream::new(42, 0).take(16);
        let c = NormalStream::new(42, 1).take(16);
        let d = NormalStream::new(43, 0).take(16);
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
    }

    #[test]
    fn zero_and_unit_orders() {
        let spec = SimSpec::gaussian(50, 0.0, 7);
        let u = innovations(&spec).unwrap();
        assert_eq!(gen_fractional(&spec).unwrap().as_slice(), &u[..]);

        let spec = SimSpec::gaussian(50, 1.0, 7);
        let x = gen_fractional(&spec).unwrap();
        let mut acc = 0.0;
        for (xt, ut) in x.as_slice().iter().zip(&u) {
            acc += ut;
            assert!((xt - acc).abs() < 1e-12);
        }
        assert_eq!(x.true_d(), Some(1.0));
    }

    #[test]
    fn repeatable() {
        let spec = SimSpec::gaussian(500, 0.4, 99).with_stream(3);
        assert_eq!(
            gen_fractional(&spec).unwrap(),
            gen_fractional(&spec).unwrap()
        );
    }

    #[test]
    fn unit_variance_innovations() {
        let u = NormalStream::new(2024, 0).take(10_000);
        let mean = u.iter().sum::<f64>() / u.len() as f64;
        let var = u.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (u.len() - 1) as f64;
        assert!((0.94..=1.06).contains(&var), "{var}");
        assert!(mean.abs() < 0.04);
    }

    #[test]
    fn linear_filter_innovations() {
        let spec = SimSpec {
            innovation: Innovation::LinearFilter {
                coeffs: vec![1.0, 0.5],
            },
            ..SimSpec::gaussian(5, 0.0, 11)
        };
        let eps = NormalStream::new(11, 0).take(6);
        let u = innovations(&spec).unwrap();
        for t in 0..5 {
            assert!((u[t] - (eps[t + 1] + 0.5 * eps[t])).abs() < 1e-15);
        }
        let bad = SimSpec {
            innovation: Innovation::LinearFilter {
                coeffs: vec![1.0, f64::NAN],
            },
            ..SimSpec::gaussian(5, 0.0, 11)
        };
        assert!(matches!(
            gen_fractional(&bad),
            Err(Error::InvalidParameter(_))
        ));
    }
}
