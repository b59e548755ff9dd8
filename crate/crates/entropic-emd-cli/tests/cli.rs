//! Black-box tests against the compiled binary: row counts, exit codes,
//! config echoes and run-to-run determinism.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_entropic-emd"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}, stderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn write_sine_csv(path: &Path, n: usize) {
    let mut text = String::from("value\n");
    for k in 0..n {
        let t = k as f64 * 1e-3;
        text.push_str(&format!(
            "{}\n",
            (2.0 * std::f64::consts::PI * 5.0 * t).sin()
        ));
    }
    std::fs::write(path, text).unwrap();
}

#[test]
fn entropy_row_count_matches_the_window_count() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.csv");
    write_sine_csv(&input, 1000);

    let out = run(&[
        "entropy",
        "--tau",
        "120",
        "--m",
        "3",
        "--step",
        "1",
        input.to_str().unwrap(),
    ]);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "index,entropy");
    // one window per start position: 1000 - 120 + 1
    assert_eq!(lines.len() - 1, 881);

    // the gradient series is one sample shorter, so one window fewer
    let out = run(&["entropy", "--gradient", input.to_str().unwrap()]);
    assert_eq!(stdout(&out).lines().count() - 1, 880);
}

#[test]
fn entropy_json_echoes_config_and_gradient_flag() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.csv");
    write_sine_csv(&input, 400);

    let out = run(&["entropy", "--format", "json", input.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["gradient"], serde_json::json!(false));
    assert_eq!(v["config"]["window_length"], serde_json::json!(120));
    assert_eq!(v["config"]["order"], serde_json::json!(3));
    assert_eq!(v["config"]["step"], serde_json::json!(1));
    assert_eq!(
        v["values"].as_array().unwrap().len(),
        v["indices"].as_array().unwrap().len()
    );

    let out = run(&[
        "entropy",
        "--gradient",
        "--tau",
        "60",
        "--format",
        "json",
        input.to_str().unwrap(),
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["gradient"], serde_json::json!(true));
    assert_eq!(v["config"]["window_length"], serde_json::json!(60));
}

#[test]
fn decompose_columns_sum_back_to_the_input() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.csv");
    let out = run(&["synth", "--output", input.to_str().unwrap()]);
    assert!(out.status.success());

    let original: Vec<f64> = std::fs::read_to_string(&input)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.parse().unwrap())
        .collect();

    let out = run(&["decompose", "--ts", "0.001", input.to_str().unwrap()]);
    let text = stdout(&out);
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("imf1,"));
    assert!(header.ends_with(",residue"));
    let mut rows = 0;
    for (line, x) in lines.zip(&original) {
        let sum: f64 = line.split(',').map(|c| c.parse::<f64>().unwrap()).sum();
        assert!((sum - x).abs() < 1e-10, "row sum {sum} vs input {x}");
        rows += 1;
    }
    assert_eq!(rows, original.len());
}

#[test]
fn decompose_json_echoes_the_sift_config() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.csv");
    write_sine_csv(&input, 600);

    let out = run(&[
        "decompose",
        "--format",
        "json",
        "--max-imfs",
        "4",
        "--sd-threshold",
        "0.25",
        input.to_str().unwrap(),
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["sift_config"]["max_imfs"], serde_json::json!(4));
    assert_eq!(v["sift_config"]["sd_threshold"], serde_json::json!(0.25));
    assert!(v["imfs"].as_array().unwrap().len() <= 4);
    assert_eq!(v["residue"].as_array().unwrap().len(), 600);
}

#[test]
fn synth_is_deterministic_and_reports_ground_truth() {
    let a = run(&[
        "synth", "--noise", "0.05", "--seed", "7", "--format", "json",
    ]);
    let b = run(&[
        "synth", "--noise", "0.05", "--seed", "7", "--format", "json",
    ]);
    assert_eq!(a.stdout, b.stdout);
    let c = run(&[
        "synth", "--noise", "0.05", "--seed", "8", "--format", "json",
    ]);
    assert_ne!(a.stdout, c.stdout);

    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["samples"].as_array().unwrap().len(), 6000);
    assert_eq!(v["truth"].as_array().unwrap().len(), 6000);
    assert_eq!(v["sampling_period"], serde_json::json!(0.001));
    assert_eq!(v["scenario"]["burst_onset"], serde_json::json!(2000));
    assert_eq!(v["seed"], serde_json::json!(7));
}

#[test]
fn synth_writes_a_separate_truth_track() {
    let dir = tempfile::tempdir().unwrap();
    let signal = dir.path().join("sig.csv");
    let truth = dir.path().join("truth.csv");
    let out = run(&[
        "synth",
        "--length",
        "4000",
        "--burst-onset",
        "1000",
        "--burst-offset",
        "2000",
        "--output",
        signal.to_str().unwrap(),
        "--truth-output",
        truth.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let truth_text = std::fs::read_to_string(&truth).unwrap();
    assert_eq!(truth_text.lines().count() - 1, 4000);
    // truth is zero outside the burst window and nonzero at its center
    let rows: Vec<f64> = truth_text
        .lines()
        .skip(1)
        .map(|l| l.parse().unwrap())
        .collect();
    assert_eq!(rows[500], 0.0);
    assert_eq!(rows[2500], 0.0);
    assert!(rows[1500].abs() > 0.0 || rows[1501].abs() > 0.0);
}

#[test]
fn repair_writes_report_and_companions_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.csv");
    let out = run(&["synth", "--output", input.to_str().unwrap()]);
    assert!(out.status.success());

    let report_a = dir.path().join("a.json");
    let report_b = dir.path().join("b.json");
    for report in [&report_a, &report_b] {
        let out = run(&[
            "repair",
            "--ts",
            "0.001",
            "--output",
            report.to_str().unwrap(),
            input.to_str().unwrap(),
        ]);
        assert!(
            out.status.success(),
            "stderr: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }

    for tag in ["repaired", "intermittent"] {
        let a = std::fs::read(dir.path().join(format!("a.{tag}.csv"))).unwrap();
        let b = std::fs::read(dir.path().join(format!("b.{tag}.csv"))).unwrap();
        assert_eq!(a, b, "{tag} series differ between runs");
    }
    let a = std::fs::read(&report_a).unwrap();
    let b = std::fs::read(&report_b).unwrap();
    assert_eq!(a, b, "reports differ between runs");

    let v: serde_json::Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["detector_config"]["mode_bins"], serde_json::json!(64));
    assert_eq!(
        v["detector_config"]["use_gradient"],
        serde_json::json!(true)
    );
    assert_eq!(v["sift_config"]["max_imfs"], serde_json::json!(16));
    assert!(!v["segments"].as_array().unwrap().is_empty());
    assert!(v["threshold"].as_f64().unwrap() > 0.0);

    let segments = std::fs::read_to_string(dir.path().join("a.segments.csv")).unwrap();
    assert!(segments.starts_with("start,end,peak_entropy\n"));
    assert_eq!(
        segments.lines().count() - 1,
        v["segments"].as_array().unwrap().len()
    );
}

#[test]
fn repair_honors_no_gradient() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.csv");
    let out = run(&["synth", "--output", input.to_str().unwrap()]);
    assert!(out.status.success());

    let out = run(&[
        "repair",
        "--ts",
        "0.001",
        "--no-gradient",
        input.to_str().unwrap(),
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(
        v["detector_config"]["use_gradient"],
        serde_json::json!(false)
    );
}

#[test]
fn help_and_version_exit_zero() {
    for args in [
        &["--help"][..],
        &["--version"],
        &["entropy", "--help"],
        &["repair", "--help"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(0), "args {args:?}");
    }
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.csv");
    write_sine_csv(&input, 300);

    let cases: &[&[&str]] = &[
        &["--definitely-not-a-flag"],
        &["entropy"],
        &["entropy", "--tau", "not-a-number", input.to_str().unwrap()],
        // rejected by the library: a window cannot hold zero-length patterns
        &["entropy", "--tau", "0", input.to_str().unwrap()],
        &["entropy", "--m", "1", input.to_str().unwrap()],
    ];
    for args in cases {
        let out = run(args);
        assert_eq!(out.status.code(), Some(1), "args {args:?}");
        assert!(!out.stderr.is_empty(), "args {args:?} left stderr empty");
    }
}

#[test]
fn data_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "value\n1.0\nNaN\n2.0\n").unwrap();
    let short = dir.path().join("short.csv");
    std::fs::write(&short, "value\n1.0\n2.0\n").unwrap();

    let cases: &[&[&str]] = &[
        &["entropy", "/nonexistent/elsewhere.csv"],
        &["entropy", "bad-path-without-dir.csv"],
        &["decompose", "/nonexistent/elsewhere.csv"],
    ];
    for args in cases {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "args {args:?}");
    }

    let out = run(&["entropy", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line 3"), "stderr was: {stderr}");

    // structurally valid file, but shorter than one window
    let out = run(&["entropy", short.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn json_input_round_trips_through_decompose() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.json");
    let out = run(&[
        "synth",
        "--length",
        "2000",
        "--burst-onset",
        "600",
        "--burst-offset",
        "1200",
        "--format",
        "json",
        "--output",
        input.to_str().unwrap(),
    ]);
    assert!(out.status.success());

    // sampling period comes from the file, not --ts
    let out = run(&["decompose", "--format", "json", input.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["sampling_period"], serde_json::json!(0.001));
    assert_eq!(v["residue"].as_array().unwrap().len(), 2000);
}
