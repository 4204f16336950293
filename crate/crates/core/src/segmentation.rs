// SPDX-License-Identifier: MIT OR Apache-2.0

//! Recursive segmentation driven by a max-priority queue.
//!
//! The best candidate of the whole series is queued; each popped candidate
//! becomes a change point and its left and right sub-ranges are searched
//! for new candidates. In learned mode a candidate enters the queue only if
//! it passes the rank-sum test, so the number of change points falls out
//! of the data. In fixed mode the test is skipped and the loop stops after
//! `C - 1` change points.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::ensemble::{ensemble_slice, EnsembleConfig};
use crate::error::{ClaspError, Result};
use crate::profile::{min_series_len, predict, split_labels, Profile};
use crate::series::TimeSeries;
use crate::suss::{calc_suss, SussConfig, WindowSize};
use crate::validation::{validate_candidate, ValidationConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Number of change points learned through validation.
    Learned,
    /// Exactly `n_segments` segments requested (at most `n_segments - 1`
    /// change points).
    Fixed { n_segments: usize },
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::Learned => "learned",
            Mode::Fixed { .. } => "fixed",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WindowChoice {
    Fixed(usize),
    Auto(SussConfig),
}

impl Default for WindowChoice {
    fn default() -> Self {
        WindowChoice::Auto(SussConfig::default())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SegmentationConfig {
    pub window: WindowChoice,
    pub mode: Mode,
    pub ensemble: EnsembleConfig,
    pub validation: ValidationConfig,
}

impl Default for SegmentationConfig {
    fn default() -> Self {
        Self {
            window: WindowChoice::default(),
            mode: Mode::Learned,
            ensemble: EnsembleConfig::default(),
            validation: ValidationConfig::default(),
        }
    }
}

/// Half-open range `begin..end` of the original series.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SegmentRange {
    pub begin: usize,
    pub end: usize,
}

impl SegmentRange {
    pub fn len(&self) -> usize {
        self.end - self.begin
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.begin
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChangePoint {
    /// Global 0-based offset where the new segment starts.
    pub offset: usize,
    pub score: f64,
    pub p_value: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Candidate {
    pub change_point: ChangePoint,
    pub accepted: bool,
    pub range: SegmentRange,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Segmentation {
    /// Sorted by offset.
    pub change_points: Vec<ChangePoint>,
    pub window: usize,
    pub window_info: Option<WindowSize>,
    pub mode: Mode,
    /// Profile of the whole series.
    pub profile: Profile,
}

impl Segmentation {
    pub fn offsets(&self) -> Vec<usize> {
        self.change_points.iter().map(|c| c.offset).collect()
    }
}

/// Best split of `range` with its validation outcome, plus the range's
/// profile. `None` when the range is too short for a profile.
fn evaluate_range(
    ts: &TimeSeries,
    range: SegmentRange,
    w: usize,
    ensemble: &EnsembleConfig,
    validation: &ValidationConfig,
) -> Result<Option<(Candidate, Profile)>> {
    if range.is_empty() || range.len() < min_series_len(w) {
        return Ok(None);
    }
    let values = &ts.values()[range.begin..range.end];
    let (profile, idx) = match ensemble_slice(values, w, ensemble) {
        Ok(r) => r,
        Err(ClaspError::SeriesTooShort { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    let Some((split, score)) = profile.argmax() else {
        return Ok(None);
    };
    let preds = predict(&idx, &split_labels(idx.len(), w, split));
    let v = validate_candidate(&preds, split, w, validation);
    let candidate = Candidate {
        change_point: ChangePoint {
            offset: range.begin + split,
            score,
            p_value: v.p_value,
        },
        accepted: v.accepted,
        range,
    };
    Ok(Some((candidate, profile)))
}

/// Candidate split of `range`. In learned mode (`require_valid`) a candidate
/// failing the rank-sum test yields `None`.
pub fn find_candidate(
    ts: &TimeSeries,
    range: SegmentRange,
    w: usize,
    cfg: &SegmentationConfig,
    require_valid: bool,
) -> Result<Option<Candidate>> {
    if range.end > ts.len() {
        return Err(ClaspError::invalid(format!(
            "range {}..{} exceeds series length {}",
            range.begin,
            range.end,
            ts.len()
        )));
    }
    Ok(evaluate_range(ts, range, w, &cfg.ensemble, &cfg.validation)?
        .map(|(c, _)| c)
        .filter(|c| c.accepted || !require_valid))
}

struct Queued(Candidate);

impl PartialEq for Queued {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Queued {}

impl PartialOrd for Queued {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Queued {
    /// Higher score first, then smaller offset.
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (&self.0.change_point, &other.0.change_point);
        a.score
            .total_cmp(&b.score)
            .then_with(|| b.offset.cmp(&a.offset))
    }
}

pub fn resolve_window(ts: &TimeSeries, choice: &WindowChoice) -> Result<(usize, Option<WindowSize>)> {
    match choice {
        WindowChoice::Fixed(w) => {
            if *w == 0 {
                return Err(ClaspError::invalid("window width must be >= 1"));
            }
            Ok((*w, None))
        }
        WindowChoice::Auto(cfg) => {
            let ws = calc_suss(ts, cfg)?;
            Ok((ws.width, Some(ws)))
        }
    }
}

/// Segments `ts` according to `cfg`.
pub fn segment(ts: &TimeSeries, cfg: &SegmentationConfig) -> Result<Segmentation> {
    let (max_cps, require_valid) = match cfg.mode {
        Mode::Learned => (usize::MAX, true),
        Mode::Fixed { n_segments } => {
            if n_segments < 1 {
                return Err(ClaspError::invalid("number of segments must be >= 1"));
            }
            (n_segments - 1, false)
        }
    };
    let (w, window_info) = resolve_window(ts, &cfg.window)?;
    let n = ts.len();
    let min = min_series_len(w);
    if n < min {
        return Err(ClaspError::SeriesTooShort { n, w, min });
    }

    let whole = SegmentRange { begin: 0, end: n };
    let (root, profile) = evaluate_range(ts, whole, w, &cfg.ensemble, &cfg.validation)?
        .ok_or(ClaspError::SeriesTooShort { n, w, min })?;

    let mut queue = BinaryHeap::new();
    if root.accepted || !require_valid {
        queue.push(Queued(root));
    }
    let mut found = Vec::new();
    while found.len() < max_cps {
        let Some(Queued(best)) = queue.pop() else {
            break;
        };
        let cp = best.change_point;
        found.push(cp);
        let left = SegmentRange {
            begin: best.range.begin,
            end: cp.offset,
        };
        let right = SegmentRange {
            begin: cp.offset,
            end: best.range.end,
        };
        let (l, r) = rayon::join(
            || find_candidate(ts, left, w, cfg, require_valid),
            || find_candidate(ts, right, w, cfg, require_valid),
        );
        for c in [l?, r?].into_iter().flatten() {
            queue.push(Queued(c));
        }
    }
    found.sort_by_key(|c| c.offset);
    Ok(Segmentation {
        change_points: found,
        window: w,
        window_info,
        mode: cfg.mode,
        profile,
    })
}
