//! Command-line front end: signal generation, decomposition, entropy
//! profiling and the full intermittency-repair pipeline, writing CSV/JSON
//! artifacts suitable for external plotting.
//!
//! Exit codes: 0 success, 1 usage error (bad flags or values), 2 data or
//! structural error (unreadable input, invalid samples, pipeline failure).
//! Data goes only to files or standard output; diagnostics to stderr.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use entropic_emd::io::{
    decomposition_to_csv, decomposition_to_json_with_config, format_series, profile_to_csv,
    profile_to_json, repair_report_to_json, segments_to_csv,
};
use entropic_emd::{
    decompose, entropy_profile, gradient_transform, load_series, make_intermittent_signal, repair,
    write_series, DetectorConfig, Error, IntermittencyScenario, PeConfig, SeriesFormat, SiftConfig,
    TimeSeries,
};

#[derive(Parser)]
#[command(
    name = "entropic-emd",
    version,
    about = "Empirical mode decomposition with entropy-guided intermittency repair"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a carrier-plus-burst test signal with ground truth
    Synth(SynthCmd),
    /// Decompose a series into intrinsic mode functions and a residue
    Decompose(DecomposeCmd),
    /// Sliding-window permutation entropy profile of a series
    Entropy(EntropyCmd),
    /// Detect intermittent segments, extract them, repair the series
    Repair(RepairCmd),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for SeriesFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => SeriesFormat::Csv,
            FormatArg::Json => SeriesFormat::Json,
        }
    }
}

#[derive(Args)]
struct OutputFlags {
    /// Output format
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// Output file; standard output when omitted
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
}

impl OutputFlags {
    fn write(&self, text: &str) -> entropic_emd::Result<()> {
        write_text(self.output.as_deref(), text)
    }
}

fn write_text(path: Option<&Path>, text: &str) -> entropic_emd::Result<()> {
    match path {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Io {
            path: path.to_path_buf(),
            source: e,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[derive(Args)]
struct InputFlags {
    /// Input series: CSV (one sample per line, optional `value` header) or
    /// self-describing JSON, decided by the file extension
    input: PathBuf,
    /// Sampling period in seconds for CSV inputs (JSON carries its own)
    #[arg(long, default_value_t = 1.0, value_name = "SECONDS")]
    ts: f64,
}

impl InputFlags {
    fn load(&self) -> entropic_emd::Result<TimeSeries> {
        let format = if self
            .input
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("json"))
        {
            SeriesFormat::Json
        } else {
            SeriesFormat::Csv
        };
        load_series(&self.input, format, self.ts)
    }
}

#[derive(Args)]
struct PeFlags {
    /// Sliding window length in samples
    #[arg(long, default_value_t = 120)]
    tau: usize,
    /// Ordinal pattern order
    #[arg(long, default_value_t = 3)]
    m: usize,
    /// Window stride between profile values
    #[arg(long, default_value_t = 1)]
    step: usize,
}

impl PeFlags {
    fn config(&self) -> PeConfig {
        PeConfig {
            window_length: self.tau,
            order: self.m,
            step: self.step,
            ..PeConfig::default()
        }
    }
}

#[derive(Args)]
struct GradientFlags {
    /// Work on the gradient-sign transform of the series
    #[arg(long, overrides_with = "no_gradient")]
    gradient: bool,
    /// Work on the raw samples instead of the gradient signs
    #[arg(long)]
    no_gradient: bool,
}

impl GradientFlags {
    /// `entropy` profiles the raw series unless `--gradient` is given.
    fn opt_in(&self) -> bool {
        self.gradient
    }

    /// flipping `repair` to raw-series detection takes `--no-gradient`.
    fn opt_out(&self) -> bool {
        !self.no_gradient
    }
}

#[derive(Args)]
struct SiftFlags {
    /// Sifting convergence threshold (Cauchy SD criterion)
    #[arg(long, default_value_t = 0.2)]
    sd_threshold: f64,
    /// Maximum sift iterations per IMF
    #[arg(long, default_value_t = 50)]
    max_sift: usize,
    /// Maximum number of IMFs to extract
    #[arg(long, default_value_t = 16)]
    max_imfs: usize,
}

impl SiftFlags {
    fn config(&self) -> SiftConfig {
        SiftConfig {
            sd_threshold: self.sd_threshold,
            max_sift_iterations: self.max_sift,
            max_imfs: self.max_imfs,
            ..SiftConfig::default()
        }
    }
}

#[derive(Args)]
struct DetectorFlags {
    /// Histogram bins for the envelope-mode threshold
    #[arg(long, default_value_t = 64)]
    mode_bins: usize,
    /// Merge segments closer than this many samples (default: tau/2)
    #[arg(long, value_name = "SAMPLES")]
    merge_gap: Option<usize>,
    /// Drop merged segments shorter than this (default: tau)
    #[arg(long, value_name = "SAMPLES")]
    min_segment: Option<usize>,
}

#[derive(Args)]
struct SynthCmd {
    /// Number of samples
    #[arg(long, default_value_t = 6000)]
    length: usize,
    /// Sampling period in seconds
    #[arg(long, default_value_t = 1e-3, value_name = "SECONDS")]
    ts: f64,
    /// Carrier frequency in Hz
    #[arg(long, default_value_t = 1.0)]
    carrier_freq: f64,
    /// Carrier amplitude
    #[arg(long, default_value_t = 1.0)]
    carrier_amp: f64,
    /// Burst frequency in Hz; must exceed the carrier frequency
    #[arg(long, default_value_t = 20.0)]
    burst_freq: f64,
    /// Burst amplitude
    #[arg(long, default_value_t = 0.5)]
    burst_amp: f64,
    /// First burst sample (inclusive)
    #[arg(long, default_value_t = 2000)]
    burst_onset: usize,
    /// One past the last burst sample
    #[arg(long, default_value_t = 3000)]
    burst_offset: usize,
    /// Standard deviation of additive Gaussian noise
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    /// Generator seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also write the ground-truth burst track to this file
    #[arg(long, value_name = "PATH")]
    truth_output: Option<PathBuf>,
    #[command(flatten)]
    out: OutputFlags,
}

impl SynthCmd {
    fn run(self) -> entropic_emd::Result<()> {
        let scenario = IntermittencyScenario {
            carrier_frequency: self.carrier_freq,
            carrier_amplitude: self.carrier_amp,
            burst_frequency: self.burst_freq,
            burst_amplitude: self.burst_amp,
            burst_onset: self.burst_onset,
            burst_offset: self.burst_offset,
            noise_stddev: self.noise,
            length: self.length,
            sampling_period: self.ts,
        };
        let (signal, truth) = make_intermittent_signal(&scenario, self.seed)?;
        let text = match self.out.format {
            FormatArg::Csv => format_series(&signal, SeriesFormat::Csv),
            // the series schema plus the truth track and generator echo
            FormatArg::Json => {
                let mut value = serde_json::to_value(&signal).expect("series serialization");
                let map = value
                    .as_object_mut()
                    .expect("series serializes to an object");
                map.insert("truth".into(), serde_json::json!(truth.samples()));
                map.insert(
                    "scenario".into(),
                    serde_json::to_value(&scenario).expect("scenario serialization"),
                );
                map.insert("seed".into(), serde_json::json!(self.seed));
                value.to_string()
            }
        };
        self.out.write(&text)?;
        if let Some(path) = &self.truth_output {
            write_series(&truth, path, self.out.format.into())?;
        }
        Ok(())
    }
}

#[derive(Args)]
struct DecomposeCmd {
    #[command(flatten)]
    input: InputFlags,
    #[command(flatten)]
    sift: SiftFlags,
    #[command(flatten)]
    out: OutputFlags,
}

impl DecomposeCmd {
    fn run(self) -> entropic_emd::Result<()> {
        let series = self.input.load()?;
        let config = self.sift.config();
        let d = decompose(&series, &config)?;
        eprintln!(
            "{} imf(s) + residue over {} samples",
            d.imfs.len(),
            series.len()
        );
        let text = match self.out.format {
            FormatArg::Csv => decomposition_to_csv(&d),
            FormatArg::Json => decomposition_to_json_with_config(&d, &config),
        };
        self.out.write(&text)
    }
}

#[derive(Args)]
struct EntropyCmd {
    #[command(flatten)]
    input: InputFlags,
    #[command(flatten)]
    pe: PeFlags,
    #[command(flatten)]
    gradient: GradientFlags,
    #[command(flatten)]
    out: OutputFlags,
}

impl EntropyCmd {
    fn run(self) -> entropic_emd::Result<()> {
        let series = self.input.load()?;
        let config = self.pe.config();
        let profile = if self.gradient.opt_in() {
            entropy_profile(&gradient_transform(&series)?, &config)?
        } else {
            entropy_profile(&series, &config)?
        };
        let text = match self.out.format {
            FormatArg::Csv => profile_to_csv(&profile),
            FormatArg::Json => profile_to_json(&profile, self.gradient.opt_in()),
        };
        self.out.write(&text)
    }
}

/// The report itself is always JSON (its fields are nested structures);
/// `--format` picks the encoding of the companion series files written
/// next to `--output`: `<stem>.repaired.<ext>`, `<stem>.intermittent.<ext>`
/// and `<stem>.segments.csv`. Without `--output` only the report goes to
/// standard output.
#[derive(Args)]
struct RepairCmd {
    #[command(flatten)]
    input: InputFlags,
    #[command(flatten)]
    pe: PeFlags,
    #[command(flatten)]
    gradient: GradientFlags,
    #[command(flatten)]
    detector: DetectorFlags,
    #[command(flatten)]
    sift: SiftFlags,
    #[command(flatten)]
    out: OutputFlags,
}

impl RepairCmd {
    fn run(self) -> entropic_emd::Result<()> {
        let series = self.input.load()?;
        let pe = self.pe.config();
        let detector = DetectorConfig {
            pe_config: pe,
            mode_bins: self.detector.mode_bins,
            merge_gap: self.detector.merge_gap.unwrap_or(pe.window_length / 2),
            min_segment_length: self.detector.min_segment.unwrap_or(pe.window_length),
            use_gradient: self.gradient.opt_out(),
        };
        let sift = self.sift.config();
        let report = repair(&series, &detector, &sift)?;
        eprintln!(
            "{} segment(s), threshold {} nats",
            report.segments.len(),
            report.threshold
        );
        let json = repair_report_to_json(&report, &detector, &sift);
        write_text(self.out.output.as_deref(), &json)?;
        if let Some(path) = &self.out.output {
            let fmt: SeriesFormat = self.out.format.into();
            let ext = fmt.to_string();
            write_series(
                &report.repaired_series,
                companion(path, "repaired", &ext),
                fmt,
            )?;
            write_series(
                &report.intermittent_component,
                companion(path, "intermittent", &ext),
                fmt,
            )?;
            let segments_path = companion(path, "segments", "csv");
            std::fs::write(&segments_path, segments_to_csv(&report.segments)).map_err(|e| {
                Error::Io {
                    path: segments_path,
                    source: e,
                }
            })?;
        }
        Ok(())
    }
}

fn companion(path: &Path, tag: &str, ext: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("repair");
    path.with_file_name(format!("{stem}.{tag}.{ext}"))
}

struct StderrLogger;

impl log::Log for StderrLogger {
    fn enabled(&self, metadata: &log::Metadata) -> bool {
        metadata.level() <= log::Level::Warn
    }

    fn log(&self, record: &log::Record) {
        if self.enabled(record.metadata()) {
            eprintln!(
                "{}: {}",
                record.level().to_string().to_lowercase(),
                record.args()
            );
        }
    }

    fn flush(&self) {}
}

static LOGGER: StderrLogger = StderrLogger;

fn run(cli: Cli) -> entropic_emd::Result<()> {
    match cli.command {
        Command::Synth(c) => c.run(),
        Command::Decompose(c) => c.run(),
        Command::Entropy(c) => c.run(),
        Command::Repair(c) => c.run(),
    }
}

fn main() -> ExitCode {
    let _ = log::set_logger(&LOGGER);
    log::set_max_level(log::LevelFilter::Warn);
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = u8::from(e.use_stderr());
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let code = if matches!(e, Error::InvalidParameter { .. }) {
                1
            } else {
                2
            };
            ExitCode::from(code)
        }
    }
}
