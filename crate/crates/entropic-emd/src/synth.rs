//! Synthetic intermittent-sinusoid generation for tests and demos.
//!
//! The generator produces a low-frequency carrier with a high-frequency
//! burst confined to a known sample range, plus optional Gaussian noise.
//! The burst component is returned separately as ground truth so that
//! detection and repair quality can be scored.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::TimeSeries;

/// Parameters of a carrier-plus-burst test signal.
///
/// The burst is the fine-scale intruder: its frequency must exceed the
/// carrier's, and its support `[burst_onset, burst_offset)` lies inside
/// the signal. The burst envelope is rectangular (hard onset/offset).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntermittencyScenario {
    /// Carrier frequency in Hz.
    pub carrier_frequency: f64,
    pub carrier_amplitude: f64,
    /// Burst frequency in Hz; must be greater than the carrier frequency.
    pub burst_frequency: f64,
    pub burst_amplitude: f64,
    /// First sample index of the burst (inclusive).
    pub burst_onset: usize,
    /// One past the last burst sample (exclusive).
    pub burst_offset: usize,
    /// Standard deviation of additive Gaussian noise; zero disables noise.
    pub noise_stddev: f64,
    /// Total number of samples.
    pub length: usize,
    /// Sampling period in seconds.
    pub sampling_period: f64,
}

impl IntermittencyScenario {
    pub fn validate(&self) -> Result<()> {
        if self.length == 0 {
            return Err(Error::invalid("length", "must be at least 1"));
        }
        if self.sampling_period <= 0.0 || !self.sampling_period.is_finite() {
            return Err(Error::invalid(
                "sampling_period",
                "must be positive and finite",
            ));
        }
        if self.burst_onset >= self.burst_offset {
            return Err(Error::invalid(
                "burst_onset",
                format!(
                    "burst_onset ({}) must be less than burst_offset ({})",
                    self.burst_onset, self.burst_offset
                ),
            ));
        }
        if self.burst_offset > self.length {
            return Err(Error::invalid(
                "burst_offset",
                format!(
                    "burst_offset ({}) must not exceed length ({})",
                    self.burst_offset, self.length
                ),
            ));
        }
        for (name, v) in [
            ("carrier_frequency", self.carrier_frequency),
            ("burst_frequency", self.burst_frequency),
            ("carrier_amplitude", self.carrier_amplitude),
            ("burst_amplitude", self.burst_amplitude),
        ] {
            if !v.is_finite() {
                return Err(Error::invalid(name, "must be finite"));
            }
        }
        if self.burst_frequency <= self.carrier_frequency {
            return Err(Error::invalid(
                "burst_frequency",
                format!(
                    "burst_frequency ({}) must exceed carrier_frequency ({})",
                    self.burst_frequency, self.carrier_frequency
                ),
            ));
        }
        if self.noise_stddev < 0.0 || !self.noise_stddev.is_finite() {
            return Err(Error::invalid(
                "noise_stddev",
                "must be nonnegative and finite",
            ));
        }
        Ok(())
    }
}

/// Generates the scenario's signal together with its ground-truth burst.
///
/// The signal is `carrier + burst + noise`; the returned ground truth is
/// the burst term alone, exactly zero outside `[burst_onset, burst_offset)`.
/// Identical `(scenario, seed)` pairs produce bit-identical output.
pub fn make_intermittent_signal(
    scenario: &IntermittencyScenario,
    seed: u64,
) -> Result<(TimeSeries, TimeSeries)> {
    scenario.validate()?;

    let ts = scenario.sampling_period;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = Vec::with_capacity(scenario.length);
    let mut truth = Vec::with_capacity(scenario.length);

    for n in 0..scenario.length {
        let t = n as f64 * ts;
        let carrier = scenario.carrier_amplitude
            * (std::f64::consts::TAU * scenario.carrier_frequency * t).sin();
        let burst = if n >= scenario.burst_onset && n < scenario.burst_offset {
            scenario.burst_amplitude * (std::f64::consts::TAU * scenario.burst_frequency * t).sin()
        } else {
            0.0
        };
        let noise = if scenario.noise_stddev > 0.0 {
            scenario.noise_stddev * rng.sample::<f64, _>(StandardNormal)
        } else {
            0.0
        };
        samples.push(carrier + burst + noise);
        truth.push(burst);
    }

    Ok((TimeSeries::new(samples, ts)?, TimeSeries::new(truth, ts)?))
}

/// The canonical demo scenario: 1 Hz carrier, 20 Hz burst over samples
/// [2000, 3000) of a 6000-sample record at 1 kHz, noise-free.
pub fn canonical_scenario() -> IntermittencyScenario {
    IntermittencyScenario {
        carrier_frequency: 1.0,
        carrier_amplitude: 1.0,
        burst_frequency: 20.0,
        burst_amplitude: 0.5,
        burst_onset: 2000,
        burst_offset: 3000,
        noise_stddev: 0.0,
        length: 6000,
        sampling_period: 1e-3,
    }
}
