//! Empirical mode decomposition with an entropy-driven intermittency
//! repair pipeline.
//!
//! The crate decomposes a uniformly sampled signal into intrinsic mode
//! functions by classical sifting ([`emd`]), measures local signal
//! complexity with sliding-window permutation entropy ([`pentropy`]), and
//! combines the two to find, extract, and subtract intermittent
//! high-frequency content that would otherwise mix modes ([`mixfix`]).
//! [`synth`] generates carrier-plus-burst test signals with ground truth,
//! and [`io`] reads and writes the CSV/JSON artifact formats.
//!
//! ```
//! use entropic_emd::{canonical_scenario, make_intermittent_signal};
//! use entropic_emd::{repair, DetectorConfig, SiftConfig};
//!
//! let (signal, _truth) = make_intermittent_signal(&canonical_scenario(), 7).unwrap();
//! let report = repair(&signal, &DetectorConfig::default(), &SiftConfig::default()).unwrap();
//! assert_eq!(report.segments.len(), 1);
//! let rebuilt = report.repaired_series.add(&report.intermittent_component).unwrap();
//! for (a, b) in rebuilt.samples().iter().zip(signal.samples()) {
//!     assert!((a - b).abs() < 1e-10);
//! }
//! ```

pub mod emd;
mod error;
pub mod io;
pub mod mixfix;
pub mod pentropy;
mod series;
pub mod spline;
pub mod synth;

pub use emd::{
    decompose, extract_imf, find_extrema, is_imf, is_imf_boundary_adjusted, local_mean,
    reconstruct, sift_once, spline_envelope, BoundaryPolicy, Decomposition, SiftConfig,
};
pub use error::{Error, Result};
pub use io::{load_series, write_series, SeriesFormat};
pub use mixfix::{
    detect_segments, envelope_mode, local_decompose, pe_maxima_envelope, repair, select_removal,
    DetectorConfig, RepairReport, Segment,
};
pub use pentropy::{
    entropy_of_distribution, entropy_profile, gradient_transform, ordinal_pattern,
    pattern_distribution, permutation_entropy, Alignment, EntropyProfile, OrdinalPattern, PeConfig,
    TieRule,
};
pub use series::TimeSeries;
pub use synth::{canonical_scenario, make_intermittent_signal, IntermittencyScenario};
