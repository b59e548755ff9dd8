//! Intermittency detection and repair on top of EMD and permutation
//! entropy.
//!
//! Detection thresholds the entropy profile at the statistical mode of its
//! maxima envelope: sustained runs strictly above that level are where the
//! signal's fine-scale intruder lives. Those spans are decomposed locally,
//! their high-entropy IMF prefix is subtracted (with a short crossfade so
//! the splice itself doesn't ring), and both resulting tracks are
//! decomposed again. The subtraction is a partition: repaired series plus
//! extracted component always rebuilds the input.

use serde::{Deserialize, Serialize};

use crate::emd::{
    decompose, envelope_values, extrema_in, BoundaryPolicy, Decomposition, SiftConfig,
};
use crate::error::{Error, Result};
use crate::pentropy::{
    entropy_profile, gradient_transform, permutation_entropy, EntropyProfile, PeConfig,
};
use crate::series::TimeSeries;

/// Detection knobs around the entropy profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectorConfig {
    pub pe_config: PeConfig,
    /// Histogram bins used for the statistical mode of the envelope.
    pub mode_bins: usize,
    /// Segments with a gap smaller than this many samples are merged.
    pub merge_gap: usize,
    /// Above-threshold runs spanning fewer samples than this are noise.
    pub min_segment_length: usize,
    /// Profile the sign-of-difference series instead of the raw signal.
    pub use_gradient: bool,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        let pe_config = PeConfig::default();
        Self {
            pe_config,
            mode_bins: 64,
            merge_gap: pe_config.window_length / 2,
            min_segment_length: pe_config.window_length,
            use_gradient: true,
        }
    }
}

impl DetectorConfig {
    pub fn validate(&self) -> Result<()> {
        self.pe_config.validate()?;
        if self.mode_bins < 2 {
            return Err(Error::invalid("mode_bins", "must be at least 2"));
        }
        if self.min_segment_length < self.pe_config.order {
            return Err(Error::invalid(
                "min_segment_length",
                format!(
                    "must be at least the pattern order ({})",
                    self.pe_config.order
                ),
            ));
        }
        Ok(())
    }
}

/// A detected high-entropy span of the input, `start..end` in sample
/// indices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub start: usize,
    /// One past the last sample (exclusive).
    pub end: usize,
    /// Largest profile value inside the span, in nats.
    pub peak_entropy: f64,
}

impl Segment {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        false // invariant: start < end
    }
}

/// Everything the repair pipeline produced.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RepairReport {
    pub segments: Vec<Segment>,
    /// Entropy threshold the detection used, in nats.
    pub threshold: f64,
    /// One decomposition per segment, computed on the extracted slice.
    pub local_decompositions: Vec<Decomposition>,
    /// Per segment, which local IMFs were classified as intermittent.
    pub removed_imf_indices: Vec<Vec<usize>>,
    /// The removed content placed on the full time axis, zero outside
    /// segments.
    pub intermittent_component: TimeSeries,
    /// Input minus the intermittent component.
    pub repaired_series: TimeSeries,
    pub final_repaired_decomposition: Decomposition,
    /// Absent when the extracted component has too few extrema to sift.
    pub final_intermittent_decomposition: Option<Decomposition>,
}

/// Natural-spline envelope through the profile's local maxima, evaluated
/// at every profile position. With fewer than 2 maxima the profile comes
/// back unchanged.
pub fn pe_maxima_envelope(profile: &EntropyProfile) -> EntropyProfile {
    let (maxima, _) = extrema_in(&profile.values);
    if maxima.len() < 2 {
        return profile.clone();
    }
    let values = envelope_values(&profile.values, &maxima, BoundaryPolicy::Mirror)
        .expect("at least 2 in-range knots");
    EntropyProfile { values, ..*profile }
}

/// Statistical mode of the envelope values: the center of the most
/// populated of `mode_bins` equal-width bins over [min, max], ties to the
/// lower bin. A flat envelope is its own mode.
pub fn envelope_mode(envelope: &EntropyProfile, mode_bins: usize) -> f64 {
    let values = &envelope.values;
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max <= min {
        return min;
    }
    let width = (max - min) / mode_bins as f64;
    let mut counts = vec![0usize; mode_bins];
    for &v in values {
        let bin = (((v - min) / width) as usize).min(mode_bins - 1);
        counts[bin] += 1;
    }
    let best = counts
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
        .map(|(i, _)| i)
        .unwrap_or(0);
    min + (best as f64 + 0.5) * width
}

/// Finds high-entropy spans of the series.
///
/// The entropy profile (of the gradient series when configured) is
/// thresholded at the mode of its maxima envelope. Contiguous runs
/// strictly above the threshold are mapped to sample spans through the
/// center anchors and widened by half a window per side to cover their
/// full window support; near-adjacent spans are merged, and what is
/// still shorter than `min_segment_length` after merging is dropped.
pub fn detect_segments(
    series: &TimeSeries,
    config: &DetectorConfig,
) -> Result<(Vec<Segment>, f64, EntropyProfile)> {
    config.validate()?;
    let profile = if config.use_gradient {
        entropy_profile(&gradient_transform(series)?, &config.pe_config)
    } else {
        entropy_profile(series, &config.pe_config)
    }?;
    let envelope = pe_maxima_envelope(&profile);
    let threshold = envelope_mode(&envelope, config.mode_bins);

    // contiguous profile runs strictly above the threshold, as inclusive
    // anchor spans with their peak value
    let mut runs: Vec<(usize, usize, f64)> = Vec::new();
    let mut current: Option<(usize, usize, f64)> = None;
    for (k, &v) in profile.values.iter().enumerate() {
        if v > threshold {
            current = match current {
                Some((first, _, peak)) => Some((first, k, peak.max(v))),
                None => Some((k, k, v)),
            };
        } else if let Some(run) = current.take() {
            runs.push(run);
        }
    }
    if let Some(run) = current {
        runs.push(run);
    }

    let half = config.pe_config.window_length / 2;
    let n = series.len();
    let mut segments: Vec<Segment> = Vec::new();
    for (first, last, peak) in runs {
        let start = profile.anchor_index(first).saturating_sub(half);
        let end = (profile.anchor_index(last) + 1 + half).min(n);
        match segments.last_mut() {
            Some(prev) if start < prev.end + config.merge_gap => {
                prev.end = prev.end.max(end);
                prev.peak_entropy = prev.peak_entropy.max(peak);
            }
            _ => segments.push(Segment {
                start,
                end,
                peak_entropy: peak,
            }),
        }
    }
    segments.retain(|seg| seg.len() >= config.min_segment_length);

    Ok((segments, threshold, profile))
}

/// Decomposes each segment's slice on its own. A slice too short or too
/// flat to sift yields an IMF-free decomposition (residue = slice) instead
/// of failing the pipeline.
pub fn local_decompose(
    series: &TimeSeries,
    segments: &[Segment],
    sift: &SiftConfig,
) -> Result<Vec<Decomposition>> {
    segments
        .iter()
        .map(|seg| {
            let slice = series.slice(seg.start..seg.end)?;
            if slice.len() < 4 {
                return Ok(Decomposition {
                    imfs: Vec::new(),
                    residue: slice,
                    sift_counts: Vec::new(),
                });
            }
            decompose(&slice, sift)
        })
        .collect()
}

/// Mean entropy of one series: profile mean when it spans at least one
/// window, otherwise the whole slice as a single window.
fn mean_pe(series: &TimeSeries, pe_config: &PeConfig) -> Result<f64> {
    if series.len() >= pe_config.window_length {
        let profile = entropy_profile(series, pe_config)?;
        Ok(profile.values.iter().sum::<f64>() / profile.len() as f64)
    } else {
        permutation_entropy(series.samples(), pe_config)
    }
}

/// Splits an IMF-ordered entropy sequence at its largest consecutive drop
/// and returns the prefix indices. PE falls with IMF index for mode-mixed
/// content, so everything before the steepest drop is the intruder. At
/// least one IMF is removed, never all of them.
fn largest_gap_prefix(pe_values: &[f64]) -> Vec<usize> {
    if pe_values.len() < 2 {
        return Vec::new();
    }
    let mut split = 0;
    let mut largest = f64::NEG_INFINITY;
    for i in 0..pe_values.len() - 1 {
        let gap = pe_values[i] - pe_values[i + 1];
        if gap > largest {
            largest = gap;
            split = i;
        }
    }
    (0..=split).collect()
}

/// Chooses which local IMFs carry the intermittent content, comparing
/// their entropies; `segment_pe` (the slice's own entropy) is reported for
/// diagnostics.
pub fn select_removal(
    local: &Decomposition,
    segment_pe: f64,
    pe_config: &PeConfig,
) -> Result<Vec<usize>> {
    let pe_values = local
        .imfs
        .iter()
        .map(|imf| mean_pe(imf, pe_config))
        .collect::<Result<Vec<_>>>()?;
    let removed = largest_gap_prefix(&pe_values);
    log::debug!("segment pe {segment_pe:.4}, imf pe {pe_values:.4?}, removing {removed:?}");
    Ok(removed)
}

/// The full pipeline: detect, locally decompose, remove the intermittent
/// IMF prefix with a crossfade, and decompose both resulting tracks.
pub fn repair(
    series: &TimeSeries,
    detector: &DetectorConfig,
    sift: &SiftConfig,
) -> Result<RepairReport> {
    sift.validate()?;
    let (segments, threshold, _profile) = detect_segments(series, detector)?;
    let local_decompositions = local_decompose(series, &segments, sift)?;

    let mut removed_imf_indices = Vec::with_capacity(segments.len());
    let mut component = vec![0.0; series.len()];
    let ramp = detector.pe_config.window_length / 4;
    for (seg, local) in segments.iter().zip(&local_decompositions) {
        let slice = series.slice(seg.start..seg.end)?;
        let segment_pe = mean_pe(&slice, &detector.pe_config)?;
        let removed = select_removal(local, segment_pe, &detector.pe_config)?;

        let len = seg.len();
        let edge = (ramp.min(len / 4) + 1) as f64;
        for i in 0..len {
            let total: f64 = removed.iter().map(|&r| local.imfs[r].samples()[i]).sum();
            let weight = 1.0f64.min(((i + 1) as f64 / edge).min((len - i) as f64 / edge));
            component[seg.start + i] = weight * total;
        }
        removed_imf_indices.push(removed);
    }

    let intermittent_component = TimeSeries::new(component, series.sampling_period())?;
    let repaired_series = series.sub(&intermittent_component)?;
    let final_repaired_decomposition = decompose(&repaired_series, sift)?;
    let (cmax, cmin) = extrema_in(intermittent_component.samples());
    let final_intermittent_decomposition = if cmax.len() >= 2 && cmin.len() >= 2 {
        Some(decompose(&intermittent_component, sift)?)
    } else {
        None
    };

    Ok(RepairReport {
        segments,
        threshold,
        local_decompositions,
        removed_imf_indices,
        intermittent_component,
        repaired_series,
        final_repaired_decomposition,
        final_intermittent_decomposition,
    })
}
