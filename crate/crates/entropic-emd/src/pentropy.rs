//! Ordinal patterns and sliding-window permutation entropy.
//!
//! Each length-m tuple of consecutive samples is reduced to the
//! permutation describing its rank order; entropy of the pattern
//! distribution over a window measures local signal complexity in nats,
//! bounded by ln(m!). The gradient transform reduces a series to its
//! per-step rise/fall signs so the entropy reacts to frequency changes
//! but not amplitude changes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::TimeSeries;

/// Orders above this make the m! pattern table impractically large.
pub const MAX_ORDER: usize = 10;

const FACTORIALS: [usize; MAX_ORDER + 1] =
    [1, 1, 2, 6, 24, 120, 720, 5040, 40320, 362_880, 3_628_800];

/// How equal values inside a tuple are ranked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TieRule {
    /// Equal values rank in order of appearance (stable).
    IndexOrder,
}

/// Windowing parameters for entropy profiles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeConfig {
    /// Sliding window length in samples (τ).
    pub window_length: usize,
    /// Ordinal pattern length (m).
    pub order: usize,
    /// Window advance per profile value.
    pub step: usize,
    pub tie_rule: TieRule,
    /// Divide entropies by ln(m!) to land in [0, 1].
    pub normalize: bool,
}

impl Default for PeConfig {
    fn default() -> Self {
        Self {
            window_length: 120,
            order: 3,
            step: 1,
            tie_rule: TieRule::IndexOrder,
            normalize: false,
        }
    }
}

impl PeConfig {
    pub fn validate(&self) -> Result<()> {
        if self.order < 2 {
            return Err(Error::invalid("order", "must be at least 2"));
        }
        if self.order > MAX_ORDER {
            return Err(Error::invalid(
                "order",
                format!("orders above {MAX_ORDER} are not supported (m! patterns)"),
            ));
        }
        if self.window_length < self.order {
            return Err(Error::invalid(
                "window_length",
                format!("must be at least the order ({})", self.order),
            ));
        }
        if self.step == 0 {
            return Err(Error::invalid("step", "must be at least 1"));
        }
        Ok(())
    }

    /// A window yields window_length − order + 1 tuples; estimates are
    /// considered statistically valid only when that count exceeds 100.
    pub fn is_statistically_valid(&self) -> bool {
        self.window_length - self.order + 1 > 100
    }

    /// Largest possible entropy for this order: ln(m!).
    pub fn max_entropy(&self) -> f64 {
        (FACTORIALS[self.order] as f64).ln()
    }
}

/// The rank-order permutation of a sample tuple.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrdinalPattern {
    ranks: Vec<usize>,
}

impl OrdinalPattern {
    /// `ranks[k]` is the rank of the k-th tuple value, ties by index.
    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// Lehmer rank of the permutation: a unique index in 0..m!.
    pub fn index(&self) -> usize {
        let m = self.ranks.len();
        let mut idx = 0;
        for k in 0..m {
            let smaller_after = self.ranks[k + 1..]
                .iter()
                .filter(|&&r| r < self.ranks[k])
                .count();
            idx += smaller_after * FACTORIALS[m - 1 - k];
        }
        idx
    }
}

/// Ranks a tuple of samples into its ordinal pattern.
pub fn ordinal_pattern(window: &[f64], tie_rule: TieRule) -> Result<OrdinalPattern> {
    if window.len() < 2 {
        return Err(Error::TooShort {
            operation: "ordinal_pattern",
            needed: 2,
            got: window.len(),
        });
    }
    let TieRule::IndexOrder = tie_rule;
    let ranks = (0..window.len())
        .map(|k| {
            window
                .iter()
                .enumerate()
                .filter(|&(j, &v)| v < window[k] || (v == window[k] && j < k))
                .count()
        })
        .collect();
    Ok(OrdinalPattern { ranks })
}

/// Lehmer rank of a tuple's pattern, computed without materializing the
/// ranks: with index-order ties, a later equal value always ranks higher,
/// so only strictly smaller later values count.
fn lehmer_index(window: &[f64]) -> usize {
    let m = window.len();
    let mut idx = 0;
    for k in 0..m {
        let smaller_after = window[k + 1..].iter().filter(|&&v| v < window[k]).count();
        idx += smaller_after * FACTORIALS[m - 1 - k];
    }
    idx
}

/// Probability of each of the m! patterns among the segment's
/// τ − m + 1 consecutive tuples, indexed by Lehmer rank.
pub fn pattern_distribution(segment: &[f64], order: usize, tie_rule: TieRule) -> Result<Vec<f64>> {
    if !(2..=MAX_ORDER).contains(&order) {
        return Err(Error::invalid(
            "order",
            format!("must be between 2 and {MAX_ORDER}, got {order}"),
        ));
    }
    let TieRule::IndexOrder = tie_rule;
    if segment.len() < order {
        return Err(Error::TooShort {
            operation: "pattern_distribution",
            needed: order,
            got: segment.len(),
        });
    }
    let mut counts = vec![0usize; FACTORIALS[order]];
    for window in segment.windows(order) {
        counts[lehmer_index(window)] += 1;
    }
    let total = (segment.len() - order + 1) as f64;
    Ok(counts.into_iter().map(|c| c as f64 / total).collect())
}

/// Shannon entropy of a probability vector in nats; zero entries
/// contribute nothing.
pub fn entropy_of_distribution(probabilities: &[f64]) -> f64 {
    let mut h = 0.0;
    for &p in probabilities {
        if p > 0.0 {
            h -= p * p.ln();
        }
    }
    h
}

/// Entropy of nonzero pattern counts; `touched` must be ascending so the
/// summation order is fixed regardless of how counts were accumulated.
fn entropy_from_counts(counts: &[usize], touched: &[usize], total: f64) -> f64 {
    let mut h = 0.0;
    for &idx in touched {
        let p = counts[idx] as f64 / total;
        h -= p * p.ln();
    }
    h
}

/// Permutation entropy of one segment in nats (or normalized to [0, 1]
/// when the config says so). The segment may be any length ≥ the order;
/// `config.window_length` is not consulted here.
pub fn permutation_entropy(segment: &[f64], config: &PeConfig) -> Result<f64> {
    config.validate()?;
    if segment.len() < config.order {
        return Err(Error::TooShort {
            operation: "permutation_entropy",
            needed: config.order,
            got: segment.len(),
        });
    }
    let mut counts = vec![0usize; FACTORIALS[config.order]];
    let mut touched = Vec::new();
    for window in segment.windows(config.order) {
        let idx = lehmer_index(window);
        if counts[idx] == 0 {
            touched.push(idx);
        }
        counts[idx] += 1;
    }
    touched.sort_unstable();
    let total = (segment.len() - config.order + 1) as f64;
    let mut h = entropy_from_counts(&counts, &touched, total);
    if config.normalize {
        h /= config.max_entropy();
    }
    Ok(h)
}

/// Where each profile value sits on the sample axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Alignment {
    /// Values are anchored to the center of their window.
    WindowCenter,
}

/// A sliding-window entropy profile with its provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyProfile {
    pub values: Vec<f64>,
    pub config: PeConfig,
    pub alignment: Alignment,
    /// Sample index the first profile value is anchored to.
    pub first_index: usize,
}

impl EntropyProfile {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Sample index the k-th profile value is anchored to.
    pub fn anchor_index(&self, k: usize) -> usize {
        self.first_index + k * self.config.step
    }
}

/// Permutation entropy of every length-τ window, advancing by the
/// configured step; emits a warning (not an error) when windows are too
/// short to be statistically valid.
pub fn entropy_profile(series: &TimeSeries, config: &PeConfig) -> Result<EntropyProfile> {
    config.validate()?;
    let n = series.len();
    let tau = config.window_length;
    if n < tau {
        return Err(Error::TooShort {
            operation: "entropy_profile",
            needed: tau,
            got: n,
        });
    }
    if !config.is_statistically_valid() {
        log::warn!(
            "window_length {} with order {} yields only {} tuples per window (need > 100 for stable estimates)",
            tau,
            config.order,
            tau - config.order + 1
        );
    }

    let samples = series.samples();
    let total = (tau - config.order + 1) as f64;
    let max_h = config.max_entropy();
    let mut counts = vec![0usize; FACTORIALS[config.order]];
    let mut touched: Vec<usize> = Vec::new();
    let mut values = Vec::with_capacity((n - tau) / config.step + 1);

    let mut start = 0;
    while start + tau <= n {
        for &idx in &touched {
            counts[idx] = 0;
        }
        touched.clear();
        for window in samples[start..start + tau].windows(config.order) {
            let idx = lehmer_index(window);
            if counts[idx] == 0 {
                touched.push(idx);
            }
            counts[idx] += 1;
        }
        touched.sort_unstable();
        let mut h = entropy_from_counts(&counts, &touched, total);
        if config.normalize {
            h /= max_h;
        }
        values.push(h);
        start += config.step;
    }

    Ok(EntropyProfile {
        values,
        config: *config,
        alignment: Alignment::WindowCenter,
        first_index: tau / 2,
    })
}

/// Sign of each forward difference: +1 rising, −1 falling, 0 flat.
/// Output is one sample shorter than the input.
pub fn gradient_transform(series: &TimeSeries) -> Result<TimeSeries> {
    if series.len() < 2 {
        return Err(Error::TooShort {
            operation: "gradient_transform",
            needed: 2,
            got: series.len(),
        });
    }
    let signs = series
        .samples()
        .windows(2)
        .map(|w| {
            if w[1] > w[0] {
                1.0
            } else if w[1] < w[0] {
                -1.0
            } else {
                0.0
            }
        })
        .collect();
    TimeSeries::new(signs, series.sampling_period())
}
