//! Empirical mode decomposition: extrema detection, spline envelopes,
//! sifting, and the residue termination rule.
//!
//! Sifting repeatedly subtracts the mean of the upper and lower extrema
//! envelopes until the candidate stabilizes (Cauchy-style SD criterion) or
//! an iteration cap is hit. Decomposition peels IMFs off the remainder
//! until it no longer carries enough extrema to build envelopes; that
//! remainder is the residue, and the pieces sum back to the input.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::TimeSeries;
use crate::spline::NaturalCubicSpline;

/// How envelope splines are anchored beyond the first and last extremum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryPolicy {
    /// Reflect the first/last two extrema about the series endpoints.
    Mirror,
    /// Treat each series endpoint as a knot of both envelopes.
    Clamp,
}

/// Sifting controls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SiftConfig {
    /// Stop sifting when SD = Σ(h_prev − h)² / Σ h_prev² drops below this.
    pub sd_threshold: f64,
    /// Hard cap on sift passes per IMF.
    pub max_sift_iterations: usize,
    /// Hard cap on extracted IMFs.
    pub max_imfs: usize,
    pub boundary_policy: BoundaryPolicy,
}

impl Default for SiftConfig {
    fn default() -> Self {
        Self {
            sd_threshold: 0.2,
            max_sift_iterations: 50,
            max_imfs: 16,
            boundary_policy: BoundaryPolicy::Mirror,
        }
    }
}

impl SiftConfig {
    pub fn validate(&self) -> Result<()> {
        if self.sd_threshold <= 0.0 || !self.sd_threshold.is_finite() {
            return Err(Error::invalid(
                "sd_threshold",
                "must be positive and finite",
            ));
        }
        if self.max_sift_iterations == 0 {
            return Err(Error::invalid("max_sift_iterations", "must be at least 1"));
        }
        if self.max_imfs == 0 {
            return Err(Error::invalid("max_imfs", "must be at least 1"));
        }
        Ok(())
    }
}

/// The result of a full decomposition: IMFs in extraction order plus the
/// residue, all the input's length; `sift_counts[i]` is the number of sift
/// passes spent on IMF i.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDecomposition", into = "RawDecomposition")]
pub struct Decomposition {
    pub imfs: Vec<TimeSeries>,
    pub residue: TimeSeries,
    pub sift_counts: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct RawDecomposition {
    sampling_period: f64,
    imfs: Vec<Vec<f64>>,
    residue: Vec<f64>,
    sift_counts: Vec<usize>,
}

impl From<Decomposition> for RawDecomposition {
    fn from(d: Decomposition) -> Self {
        RawDecomposition {
            sampling_period: d.residue.sampling_period(),
            imfs: d.imfs.into_iter().map(TimeSeries::into_samples).collect(),
            residue: d.residue.into_samples(),
            sift_counts: d.sift_counts,
        }
    }
}

impl TryFrom<RawDecomposition> for Decomposition {
    type Error = Error;

    fn try_from(raw: RawDecomposition) -> Result<Self> {
        let residue = TimeSeries::new(raw.residue, raw.sampling_period)?;
        if raw.sift_counts.len() != raw.imfs.len() {
            return Err(Error::LengthMismatch {
                left: raw.sift_counts.len(),
                right: raw.imfs.len(),
            });
        }
        let imfs = raw
            .imfs
            .into_iter()
            .map(|samples| {
                if samples.len() != residue.len() {
                    return Err(Error::LengthMismatch {
                        left: samples.len(),
                        right: residue.len(),
                    });
                }
                TimeSeries::new(samples, raw.sampling_period)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Decomposition {
            imfs,
            residue,
            sift_counts: raw.sift_counts,
        })
    }
}

/// Strict interior local extrema; a flat plateau contributes its
/// floor-midpoint index once. Works on any slice length.
pub(crate) fn extrema_in(samples: &[f64]) -> (Vec<usize>, Vec<usize>) {
    let n = samples.len();
    let mut maxima = Vec::new();
    let mut minima = Vec::new();
    let mut start = 0;
    while start < n {
        let v = samples[start];
        let mut end = start;
        while end + 1 < n && samples[end + 1] == v {
            end += 1;
        }
        // plateaus touching either boundary are not interior
        if start > 0 && end + 1 < n {
            let prev = samples[start - 1];
            let next = samples[end + 1];
            let mid = (start + end) / 2;
            if prev < v && next < v {
                maxima.push(mid);
            } else if prev > v && next > v {
                minima.push(mid);
            }
        }
        start = end + 1;
    }
    (maxima, minima)
}

/// Indices of all strict interior maxima and minima.
pub fn find_extrema(series: &TimeSeries) -> Result<(Vec<usize>, Vec<usize>)> {
    if series.len() < 3 {
        return Err(Error::TooShort {
            operation: "find_extrema",
            needed: 3,
            got: series.len(),
        });
    }
    Ok(extrema_in(series.samples()))
}

/// Natural-spline envelope values through `knots`, extended at the
/// boundaries per `policy`, evaluated at every sample index. At least 2
/// knots must remain after the extension.
pub(crate) fn envelope_values(
    samples: &[f64],
    knots: &[usize],
    policy: BoundaryPolicy,
) -> Result<Vec<f64>> {
    let n = samples.len();
    if knots.windows(2).any(|w| w[1] <= w[0]) || knots.last().is_some_and(|&k| k >= n) {
        return Err(Error::invalid(
            "knots",
            "knot indices must be strictly increasing and within the series",
        ));
    }

    let mut xs: Vec<f64> = Vec::with_capacity(knots.len() + 4);
    let mut ys: Vec<f64> = Vec::with_capacity(knots.len() + 4);

    match policy {
        BoundaryPolicy::Mirror => {
            // mirror the first knot pair about index 0, skipping collisions
            for &k in knots.iter().take(2).rev() {
                let x = -(k as i64);
                if x < knots[0] as i64 {
                    xs.push(x as f64);
                    ys.push(samples[k]);
                }
            }
        }
        BoundaryPolicy::Clamp => {
            if knots.first() != Some(&0) {
                xs.push(0.0);
                ys.push(samples[0]);
            }
        }
    }
    for &k in knots {
        xs.push(k as f64);
        ys.push(samples[k]);
    }
    match policy {
        BoundaryPolicy::Mirror => {
            // mirror the last knot pair about index n-1
            let pivot = 2 * (n as i64 - 1);
            for &k in knots.iter().rev().take(2) {
                let x = pivot - k as i64;
                if x > *knots.last().unwrap() as i64 {
                    xs.push(x as f64);
                    ys.push(samples[k]);
                }
            }
        }
        BoundaryPolicy::Clamp => {
            let edge = (n - 1) as f64;
            if xs.last().is_none_or(|&x| x < edge) {
                xs.push(edge);
                ys.push(samples[n - 1]);
            }
        }
    }

    if xs.len() < 2 {
        return Err(Error::InsufficientExtrema {
            maxima: knots.len(),
            minima: knots.len(),
        });
    }
    let spline = NaturalCubicSpline::fit(&xs, &ys)?;
    Ok((0..n).map(|i| spline.evaluate(i as f64)).collect())
}

/// Cubic-spline envelope of `series` through the given knot indices.
pub fn spline_envelope(
    series: &TimeSeries,
    knots: &[usize],
    policy: BoundaryPolicy,
) -> Result<TimeSeries> {
    let values = envelope_values(series.samples(), knots, policy)?;
    TimeSeries::new(values, series.sampling_period())
}

/// Element-wise mean of the two envelopes.
pub fn local_mean(upper: &TimeSeries, lower: &TimeSeries) -> Result<TimeSeries> {
    upper.zip_with(lower, |a, b| 0.5 * (a + b))
}

/// One sift pass: subtract the envelope mean from the series.
///
/// Needs at least one maximum and one minimum; boundary extension turns a
/// lone knot into an interpolable envelope, so a single full oscillation
/// is still siftable.
pub fn sift_once(series: &TimeSeries, policy: BoundaryPolicy) -> Result<TimeSeries> {
    let (maxima, minima) = find_extrema(series)?;
    if maxima.is_empty() || minima.is_empty() {
        return Err(Error::InsufficientExtrema {
            maxima: maxima.len(),
            minima: minima.len(),
        });
    }
    let upper = spline_envelope(series, &maxima, policy)?;
    let lower = spline_envelope(series, &minima, policy)?;
    series.sub(&local_mean(&upper, &lower)?)
}

fn max_abs(samples: &[f64]) -> f64 {
    samples.iter().fold(0.0f64, |acc, &v| acc.max(v.abs()))
}

/// Sifts until the candidate both stabilizes (SD below the threshold) and
/// satisfies the extrema/zero-crossing counting property, or the iteration
/// cap is hit; returns the candidate and the number of sift passes spent.
///
/// SD alone stops short of a true IMF on noise-dominated modes, so the
/// counting property is part of the stop condition.
pub fn extract_imf(series: &TimeSeries, config: &SiftConfig) -> Result<(TimeSeries, usize)> {
    config.validate()?;
    let dust = 1e-12 * max_abs(series.samples());
    let mut h = sift_once(series, config.boundary_policy)?;
    let mut iterations = 1;
    while iterations < config.max_sift_iterations {
        // a candidate this far below the input scale is rounding noise;
        // further sifting would only reshuffle it
        if max_abs(h.samples()) <= dust {
            break;
        }
        let next = match sift_once(&h, config.boundary_policy) {
            Ok(next) => next,
            // the candidate ran out of extrema; keep the last good one
            Err(e) if e.is_residue_condition() => break,
            Err(e) => return Err(e),
        };
        iterations += 1;
        let mut num = 0.0;
        let mut den = 0.0;
        for (&a, &b) in h.samples().iter().zip(next.samples()) {
            num += (a - b) * (a - b);
            den += a * a;
        }
        let converged = den == 0.0 || num / den < config.sd_threshold;
        h = next;
        if converged && is_imf_boundary_adjusted(&h).0 {
            break;
        }
    }
    Ok((h, iterations))
}

/// Full decomposition: peel IMFs off the remainder until it no longer has
/// both a maximum and a minimum to interpolate between (the residue
/// condition), sifting stops removing anything above rounding scale, or
/// `max_imfs` is reached.
pub fn decompose(series: &TimeSeries, config: &SiftConfig) -> Result<Decomposition> {
    config.validate()?;
    if series.len() < 4 {
        return Err(Error::TooShort {
            operation: "decompose",
            needed: 4,
            got: series.len(),
        });
    }
    // below this amplitude a remainder or candidate is rounding hash left
    // over from the subtractions, not extractable signal
    let floor = 1e-12 * max_abs(series.samples());
    let mut remainder = series.clone();
    let mut imfs = Vec::new();
    let mut sift_counts = Vec::new();
    while imfs.len() < config.max_imfs {
        if max_abs(remainder.samples()) <= floor {
            break;
        }
        let (maxima, minima) = extrema_in(remainder.samples());
        if maxima.is_empty() || minima.is_empty() {
            break;
        }
        let (imf, count) = extract_imf(&remainder, config)?;
        if max_abs(imf.samples()) <= floor {
            break;
        }
        remainder = remainder.sub(&imf)?;
        imfs.push(imf);
        sift_counts.push(count);
    }
    Ok(Decomposition {
        imfs,
        residue: remainder,
        sift_counts,
    })
}

/// Element-wise sum of all IMFs and the residue.
pub fn reconstruct(d: &Decomposition) -> TimeSeries {
    let mut acc = d.imfs.first().cloned().unwrap_or_else(|| d.residue.clone());
    if !d.imfs.is_empty() {
        for imf in &d.imfs[1..] {
            acc = acc.add(imf).expect("imfs share one length");
        }
        acc = acc.add(&d.residue).expect("residue shares the length");
    }
    acc
}

/// Zero crossings as sign changes, ignoring exactly-zero samples: a zero
/// between opposite signs counts once, a zero between equal signs not at all.
fn zero_crossings(samples: &[f64]) -> usize {
    let mut crossings = 0;
    let mut last_sign = 0i8;
    for &v in samples {
        let sign = if v > 0.0 {
            1
        } else if v < 0.0 {
            -1
        } else {
            continue;
        };
        if last_sign != 0 && sign != last_sign {
            crossings += 1;
        }
        last_sign = sign;
    }
    crossings
}

/// The IMF counting property: extrema and zero crossings differ by at most
/// one. Returns `(ok, extrema_count, zero_crossings)`.
pub fn is_imf(series: &TimeSeries) -> (bool, usize, usize) {
    let (maxima, minima) = extrema_in(series.samples());
    let extrema = maxima.len() + minima.len();
    let crossings = zero_crossings(series.samples());
    (extrema.abs_diff(crossings) <= 1, extrema, crossings)
}

/// `is_imf` restricted to the span between the 2nd and 2nd-to-last
/// extremum, so envelope end-swings near the boundaries don't distort the
/// count comparison. Falls back to the plain check when there are fewer
/// than 5 extrema.
pub fn is_imf_boundary_adjusted(series: &TimeSeries) -> (bool, usize, usize) {
    let (maxima, minima) = extrema_in(series.samples());
    let mut all: Vec<usize> = maxima.into_iter().chain(minima).collect();
    all.sort_unstable();
    if all.len() < 5 {
        return is_imf(series);
    }
    let inner = series
        .slice(all[1]..all[all.len() - 2] + 1)
        .expect("extrema indices are in range");
    is_imf(&inner)
}
