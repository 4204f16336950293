// SPDX-License-Identifier: MIT OR Apache-2.0

//! Load an annotated dataset and segment it with its annotated window.
//!
//! Usage: `cargo run --example load_dataset -- [path.json]`. Without a path
//! a small synthetic record is written to a temporary file first.

use std::path::PathBuf;

use clasp::io::{load_series, Format};
use clasp::segmentation::{segment, SegmentationConfig, WindowChoice};
use clasp::synth::{sine_segments, SineSegment};

fn synthetic_record() -> std::io::Result<PathBuf> {
    let (ts, cps) = sine_segments(&[SineSegment::new(600, 30.0), SineSegment::new(600, 9.0)], 0.1, 4);
    let values: Vec<String> = ts.values().iter().map(|v| format!("{v:.5}")).collect();
    let path = std::env::temp_dir().join("clasp_example_record.json");
    std::fs::write(
        &path,
        format!(
            r#"{{"name": "two_sines", "window": 15, "change_points": [{}], "time_series": [{}]}}"#,
            cps[0],
            values.join(", ")
        ),
    )?;
    Ok(path)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = match std::env::args().nth(1) {
        Some(p) => PathBuf::from(p),
        None => synthetic_record()?,
    };
    let record = load_series(&path, Format::Annotated)?;
    println!("{}: {} values, annotated change points {:?}", record.name, record.series.len(), record.change_points);

    let window = record.window.map_or(WindowChoice::default(), WindowChoice::Fixed);
    let seg = segment(&record.series, &SegmentationConfig { window, ..Default::default() })?;
    println!("found {:?} with window {}", seg.offsets(), seg.window);
    Ok(())
}
