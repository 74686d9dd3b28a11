use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Real-valued observations `x_1..x_n`, optionally tagged with the memory
/// parameter used to simulate them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    values: Vec<f64>,
    true_d: Option<f64>,
}

impl TimeSeries {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidInput("series is empty".into()));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "non-finite value at observation {}",
                pos + 1
            )));
        }
        Ok(Self {
            values,
            true_d: None,
        })
    }

    pub fn with_true_d(mut self, d: f64) -> Self {
        self.true_d = Some(d);
        self
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn true_d(&self) -> Option<f64> {
        self.true_d
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

impl AsRef<[f64]> for TimeSeries {
    fn as_ref(&self) -> &[f64] {
        &self.values
    }
}
