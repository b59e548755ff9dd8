//! File formats: series CSV/JSON loading and the export shapes for
//! decompositions, entropy profiles, segments and repair reports.
//!
//! CSV series files carry one sample per line with an optional `value`
//! header; the sampling period travels out-of-band. JSON series files are
//! self-describing: `{"sampling_period": <number>, "samples": [...]}`.
//! Numbers are printed with shortest-round-trip formatting, so a write
//! followed by a load reproduces every sample bit-exactly.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::emd::{Decomposition, SiftConfig};
use crate::error::{Error, Result};
use crate::mixfix::{DetectorConfig, RepairReport, Segment};
use crate::pentropy::EntropyProfile;
use crate::series::TimeSeries;

/// On-disk representation of a series (and of most CLI artifacts).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesFormat {
    Csv,
    Json,
}

impl fmt::Display for SeriesFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SeriesFormat::Csv => "csv",
            SeriesFormat::Json => "json",
        })
    }
}

impl FromStr for SeriesFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(SeriesFormat::Csv),
            "json" => Ok(SeriesFormat::Json),
            other => Err(Error::invalid(
                "format",
                format!("expected `csv` or `json`, got `{other}`"),
            )),
        }
    }
}

/// Parses CSV series text: one sample per line, optional leading `value`
/// header, blank lines ignored. Line numbers in errors are 1-based.
pub fn parse_series_csv(text: &str, sampling_period: f64) -> Result<TimeSeries> {
    let mut samples = Vec::new();
    let mut seen_data = false;
    for (i, line) in text.lines().enumerate() {
        let field = line.trim();
        if field.is_empty() {
            continue;
        }
        if !seen_data && field.eq_ignore_ascii_case("value") {
            seen_data = true;
            continue;
        }
        seen_data = true;
        let value: f64 = field.parse().map_err(|_| Error::Parse {
            line: i + 1,
            reason: format!("`{field}` is not a number"),
        })?;
        if !value.is_finite() {
            return Err(Error::Parse {
                line: i + 1,
                reason: format!("non-finite sample value `{field}`"),
            });
        }
        samples.push(value);
    }
    if samples.is_empty() {
        return Err(Error::Parse {
            line: 1,
            reason: "file contains no samples".into(),
        });
    }
    TimeSeries::new(samples, sampling_period)
}

/// Parses a JSON series object `{"sampling_period": ..., "samples": [...]}`.
/// Series invariants are enforced during deserialization.
pub fn parse_series_json(text: &str) -> Result<TimeSeries> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line().max(1),
        reason: e.to_string(),
    })
}

/// Renders a series in the given format.
pub fn format_series(series: &TimeSeries, format: SeriesFormat) -> String {
    match format {
        SeriesFormat::Csv => {
            let mut out = String::from("value\n");
            for v in series.samples() {
                out.push_str(&v.to_string());
                out.push('\n');
            }
            out
        }
        SeriesFormat::Json => {
            // serialization of a validated value cannot fail
            serde_json::to_string(series).expect("series serialization")
        }
    }
}

/// Loads a series from disk. `csv_sampling_period` supplies the period for
/// CSV files (the format stores none); it is ignored for JSON.
pub fn load_series(
    path: impl AsRef<Path>,
    format: SeriesFormat,
    csv_sampling_period: f64,
) -> Result<TimeSeries> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    match format {
        SeriesFormat::Csv => parse_series_csv(&text, csv_sampling_period),
        SeriesFormat::Json => parse_series_json(&text),
    }
}

/// Writes a series to disk in the given format.
pub fn write_series(
    series: &TimeSeries,
    path: impl AsRef<Path>,
    format: SeriesFormat,
) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, format_series(series, format)).map_err(|e| Error::io(path, e))
}

/// Decomposition as CSV: header `imf1,...,imfN,residue`, one row per sample.
pub fn decomposition_to_csv(d: &Decomposition) -> String {
    let mut out = String::new();
    for i in 0..d.imfs.len() {
        out.push_str(&format!("imf{},", i + 1));
    }
    out.push_str("residue\n");
    for n in 0..d.residue.len() {
        for imf in &d.imfs {
            out.push_str(&imf.samples()[n].to_string());
            out.push(',');
        }
        out.push_str(&d.residue.samples()[n].to_string());
        out.push('\n');
    }
    out
}

/// Decomposition as JSON:
/// `{"sampling_period": n, "imfs": [[...],...], "residue": [...], "sift_counts": [...]}`.
pub fn decomposition_to_json(d: &Decomposition) -> String {
    serde_json::to_string(d).expect("decomposition serialization")
}

/// [`decomposition_to_json`] plus a `sift_config` key echoing the settings
/// that produced it. The extra key is ignored on deserialization.
pub fn decomposition_to_json_with_config(d: &Decomposition, sift: &SiftConfig) -> String {
    let mut value = serde_json::to_value(d).expect("decomposition serialization");
    value
        .as_object_mut()
        .expect("decomposition serializes to an object")
        .insert(
            "sift_config".into(),
            serde_json::to_value(sift).expect("sift config serialization"),
        );
    value.to_string()
}

/// Entropy profile as CSV with columns `index,entropy`, where `index` is the
/// center-anchor sample index of each window.
pub fn profile_to_csv(p: &EntropyProfile) -> String {
    let mut out = String::from("index,entropy\n");
    for (k, v) in p.values.iter().enumerate() {
        out.push_str(&format!("{},{}\n", p.anchor_index(k), v));
    }
    out
}

/// Entropy profile as JSON, mirroring the CSV columns with the config
/// echoed for provenance. `of_gradient` records whether the profile was
/// computed on the gradient-sign transform or the raw samples.
pub fn profile_to_json(p: &EntropyProfile, of_gradient: bool) -> String {
    let mut value = serde_json::to_value(p).expect("profile serialization");
    let indices: Vec<usize> = (0..p.values.len()).map(|k| p.anchor_index(k)).collect();
    let map = value
        .as_object_mut()
        .expect("profile serializes to an object");
    map.insert("indices".into(), serde_json::json!(indices));
    map.insert("gradient".into(), serde_json::json!(of_gradient));
    value.to_string()
}

/// Segment list as CSV with columns `start,end,peak_entropy`.
pub fn segments_to_csv(segments: &[Segment]) -> String {
    let mut out = String::from("start,end,peak_entropy\n");
    for s in segments {
        out.push_str(&format!("{},{},{}\n", s.start, s.end, s.peak_entropy));
    }
    out
}

/// Repair report as JSON with every field present, plus the detector and
/// sift configs echoed for provenance.
pub fn repair_report_to_json(
    report: &RepairReport,
    detector: &DetectorConfig,
    sift: &SiftConfig,
) -> String {
    let mut value = serde_json::to_value(report).expect("report serialization");
    let map = value
        .as_object_mut()
        .expect("report serializes to an object");
    map.insert(
        "detector_config".into(),
        serde_json::to_value(detector).expect("detector config serialization"),
    );
    map.insert(
        "sift_config".into(),
        serde_json::to_value(sift).expect("sift config serialization"),
    );
    value.to_string()
}
