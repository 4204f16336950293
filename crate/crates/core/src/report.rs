// SPDX-License-Identifier: MIT OR Apache-2.0

//! Text and JSON renderings of results. Numbers use fixed formats so that
//! identical runs produce byte-identical output.

use serde::Serialize;
use serde_json::value::RawValue;

use crate::profile::Profile;
use crate::segmentation::{Mode, Segmentation};

fn raw(text: String) -> Box<RawValue> {
    RawValue::from_string(text).expect("formatted number is valid JSON")
}

fn fixed(v: f64) -> Box<RawValue> {
    raw(format!("{v:.6}"))
}

#[derive(Serialize)]
struct CpEntry {
    offset: usize,
    score: Box<RawValue>,
    p_value: Box<RawValue>,
}

#[derive(Serialize)]
struct SegmentDoc<'a> {
    name: &'a str,
    length: usize,
    window: usize,
    window_source: &'static str,
    mode: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    n_segments: Option<usize>,
    change_points: Vec<CpEntry>,
}

/// JSON document describing a segmentation of the series `name`.
pub fn segmentation_json(name: &str, seg: &Segmentation) -> String {
    let doc = SegmentDoc {
        name,
        length: seg.profile.len(),
        window: seg.window,
        window_source: if seg.window_info.is_some() { "auto" } else { "fixed" },
        mode: seg.mode.name(),
        n_segments: match seg.mode {
            Mode::Fixed { n_segments } => Some(n_segments),
            Mode::Learned => None,
        },
        change_points: seg
            .change_points
            .iter()
            .map(|c| CpEntry {
                offset: c.offset,
                score: fixed(c.score),
                p_value: raw(format!("{:.6e}", c.p_value)),
            })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("document serializes");
    out.push('\n');
    out
}

/// One `offset score` line per position of the profile.
pub fn profile_text(profile: &Profile) -> String {
    let mut out = String::with_capacity(profile.len() * 12);
    for (i, s) in profile.scores.iter().enumerate() {
        out.push_str(&format!("{i} {s:.6}\n"));
    }
    out
}

/// `name value` line with six decimals.
pub fn metric_line(name: &str, value: f64) -> String {
    format!("{name} {value:.6}\n")
}
