// SPDX-License-Identifier: MIT OR Apache-2.0

use std::path::Path;
use std::process::{Command, Output};

use clasp::synth::{gaussian_noise, sine_segments, SineSegment};

fn clasp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_clasp")).args(args).output().unwrap()
}

fn write_plain(path: &Path, values: &[f64]) {
    let text: String = values.iter().map(|v| format!("{v}\n")).collect();
    std::fs::write(path, text).unwrap();
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn evaluate_f1_within_margin() {
    let o = clasp(&["evaluate", "--truth", "500", "--pred", "505", "--length", "1000", "--metric", "f1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "f1 1.000000\n");
}

#[test]
fn evaluate_both_metrics_and_annotated_truth() {
    let dir = tempfile::tempdir().unwrap();
    let truth = dir.path().join("truth.json");
    let values: Vec<String> = (0..10).map(|i| i.to_string()).collect();
    std::fs::write(
        &truth,
        format!(r#"{{"name": "t", "change_points": [6], "time_series": [{}]}}"#, values.join(",")),
    )
    .unwrap();
    let o = clasp(&["evaluate", "--truth", truth.to_str().unwrap(), "--pred", "", "--length", "10"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o), "covering 0.500000\nf1 0.000000\n");
}

#[test]
fn evaluate_rejects_out_of_range_offsets() {
    let o = clasp(&["evaluate", "--truth", "1000", "--pred", "5", "--length", "1000"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn contradictory_window_flags_are_a_usage_error() {
    let o = clasp(&["segment", "--input", "x.txt", "--window", "10", "--auto-window"]);
    assert_eq!(o.status.code(), Some(2));
    let o = clasp(&["segment"]);
    assert_eq!(o.status.code(), Some(2));
    let o = clasp(&["segment", "--input", "x.txt", "--score", "accuracy"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn missing_input_is_a_runtime_error() {
    let o = clasp(&["segment", "--input", "/definitely/not/here.txt"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
    assert!(o.stdout.is_empty());
}

#[test]
fn short_series_is_a_runtime_error_without_output_files() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("short.txt");
    write_plain(&input, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
    let doc = dir.path().join("doc.json");
    let prof = dir.path().join("prof.txt");
    let o = clasp(&[
        "segment",
        "--input",
        input.to_str().unwrap(),
        "--window",
        "10",
        "--output",
        doc.to_str().unwrap(),
        "--emit-profile",
        prof.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!doc.exists() && !prof.exists());
}

#[test]
fn malformed_plain_input_names_line() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad.txt");
    std::fs::write(&input, "1.0\n2.0\nNaN\n").unwrap();
    let o = clasp(&["window-size", "--input", input.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}

#[test]
fn segment_noise_has_no_change_points() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("noise.txt");
    write_plain(&input, gaussian_noise(1500, 1.0, 21).values());
    let o = clasp(&["segment", "--input", input.to_str().unwrap()]);
    assert!(o.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["mode"], "learned");
    assert_eq!(doc["change_points"], serde_json::json!([]));
}

#[test]
fn segment_fixed_count_on_three_segments() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("three.txt");
    let segs = [SineSegment::new(800, 45.0), SineSegment::new(800, 18.0), SineSegment::new(800, 7.0)];
    let (ts, _) = sine_segments(&segs, 0.1, 22);
    write_plain(&input, ts.values());
    let prof = dir.path().join("prof.txt");
    let o = clasp(&[
        "segment",
        "--input",
        input.to_str().unwrap(),
        "--n-cps",
        "3",
        "--emit-profile",
        prof.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["mode"], "fixed");
    assert_eq!(doc["change_points"].as_array().unwrap().len(), 2);
    assert_eq!(std::fs::read_to_string(prof).unwrap().lines().count(), 2400);
}

#[test]
fn segment_annotated_input() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("rec.json");
    let (ts, cps) = sine_segments(&[SineSegment::new(600, 30.0), SineSegment::new(600, 11.0)], 0.1, 23);
    let values: Vec<String> = ts.values().iter().map(|v| v.to_string()).collect();
    std::fs::write(
        &input,
        format!(r#"{{"name": "rec", "change_points": [{}], "time_series": [{}]}}"#, cps[0], values.join(",")),
    )
    .unwrap();
    let o = clasp(&["segment", "--input", input.to_str().unwrap(), "--format", "annotated", "--window", "15"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["name"], "rec");
    assert_eq!(doc["window"], 15);
    assert_eq!(doc["window_source"], "fixed");
}

#[test]
fn annotated_field_error_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad.json");
    let values: Vec<String> = (0..500).map(|i| (i % 7).to_string()).collect();
    std::fs::write(
        &input,
        format!(r#"{{"name": "x", "change_points": [600], "time_series": [{}]}}"#, values.join(",")),
    )
    .unwrap();
    let o = clasp(&["profile", "--input", input.to_str().unwrap(), "--format", "annotated"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("change_points"));
}

#[test]
fn profile_has_one_line_per_value() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("p.txt");
    write_plain(&input, gaussian_noise(400, 1.0, 24).values());
    let o = clasp(&["profile", "--input", input.to_str().unwrap(), "--window", "10", "--n-iter", "5"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 400);
    assert!(text.lines().all(|l| l.split(' ').count() == 2));
}

#[test]
fn window_size_on_constant_series_warns() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("c.txt");
    write_plain(&input, &[2.5; 300]);
    let o = clasp(&["window-size", "--input", input.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "10\n");
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
}

#[test]
fn window_size_prints_single_integer() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("s.txt");
    let (ts, _) = sine_segments(&[SineSegment::new(1000, 40.0)], 0.05, 25);
    write_plain(&input, ts.values());
    let o = clasp(&["window-size", "--input", input.to_str().unwrap(), "--threshold", "0.89"]);
    assert!(o.status.success());
    let w: usize = stdout(&o).trim().parse().unwrap();
    assert!((10..=500).contains(&w));
    let o = clasp(&["window-size", "--input", input.to_str().unwrap(), "--threshold", "1.5"]);
    assert_eq!(o.status.code(), Some(1));
}
