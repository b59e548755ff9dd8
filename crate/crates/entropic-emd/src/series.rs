//! The universal signal carrier: a uniformly sampled real-valued series.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A uniformly sampled real-valued signal.
///
/// The time axis is implicit: sample `n` sits at `n * sampling_period`
/// seconds. Every sample is finite and the series is never empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSeries")]
pub struct TimeSeries {
    samples: Vec<f64>,
    sampling_period: f64,
}

#[derive(Deserialize)]
struct RawSeries {
    sampling_period: f64,
    samples: Vec<f64>,
}

impl TryFrom<RawSeries> for TimeSeries {
    type Error = Error;

    fn try_from(raw: RawSeries) -> Result<Self> {
        TimeSeries::new(raw.samples, raw.sampling_period)
    }
}

impl TimeSeries {
    /// Builds a series, validating the invariants: at least one sample,
    /// positive sampling period, all samples finite.
    pub fn new(samples: Vec<f64>, sampling_period: f64) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::invalid("samples", "series must not be empty"));
        }
        if sampling_period <= 0.0 || !sampling_period.is_finite() {
            return Err(Error::invalid(
                "sampling_period",
                format!("must be a positive finite number, got {sampling_period}"),
            ));
        }
        if let Some((i, &v)) = samples.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite {
                value: v,
                location: format!("sample index {i}"),
            });
        }
        Ok(Self {
            samples,
            sampling_period,
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn sampling_period(&self) -> f64 {
        self.sampling_period
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        false // invariant: at least one sample
    }

    /// Time in seconds of sample `index`.
    pub fn time_at(&self, index: usize) -> f64 {
        index as f64 * self.sampling_period
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    /// A new series over `range`, keeping the sampling period.
    pub fn slice(&self, range: std::ops::Range<usize>) -> Result<Self> {
        if range.start >= range.end || range.end > self.len() {
            return Err(Error::invalid(
                "range",
                format!(
                    "{}..{} out of bounds for length {}",
                    range.start,
                    range.end,
                    self.len()
                ),
            ));
        }
        TimeSeries::new(self.samples[range].to_vec(), self.sampling_period)
    }

    /// Element-wise difference `self - other`.
    pub fn sub(&self, other: &TimeSeries) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    /// Element-wise sum `self + other`.
    pub fn add(&self, other: &TimeSeries) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub(crate) fn zip_with(&self, other: &TimeSeries, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        let samples = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(&a, &b)| f(a, b))
            .collect();
        TimeSeries::new(samples, self.sampling_period)
    }
}
