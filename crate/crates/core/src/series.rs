// SPDX-License-Identifier: MIT OR Apache-2.0

//! Time series representation, windowing and rolling statistics.
//!
//! All offsets are 0-based. A window starting at offset `s` with width `w`
//! covers the half-open range `s..s + w`.

use std::collections::VecDeque;
use std::ops::{Deref, Range};

use crate::error::{ClaspError, Result};

/// Standard deviation below which a window is treated as constant.
pub const DEFAULT_EPS: f64 = 1e-8;

/// An immutable, non-empty sequence of finite values.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeSeries {
    values: Vec<f64>,
}

impl TimeSeries {
    /// Builds a series, rejecting empty input and NaN/Inf values.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(ClaspError::Empty);
        }
        if let Some(offset) = values.iter().position(|v| !v.is_finite()) {
            return Err(ClaspError::NonFinite { offset });
        }
        Ok(Self { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false; kept for API symmetry with slices.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Copies a sub-range into a new series.
    pub fn slice(&self, range: Range<usize>) -> Result<Self> {
        if range.start >= range.end || range.end > self.len() {
            return Err(ClaspError::invalid(format!(
                "range {}..{} is empty or outside a series of length {}",
                range.start,
                range.end,
                self.len()
            )));
        }
        Ok(Self {
            values: self.values[range].to_vec(),
        })
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

impl Deref for TimeSeries {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.values
    }
}

impl TryFrom<Vec<f64>> for TimeSeries {
    type Error = ClaspError;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

/// A contiguous subsequence `start..start + width`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Window {
    pub start: usize,
    pub width: usize,
}

impl Window {
    pub fn range(&self) -> Range<usize> {
        self.start..self.start + self.width
    }

    pub fn values<'a>(&self, ts: &'a TimeSeries) -> &'a [f64] {
        &ts.values()[self.range()]
    }
}

/// Mean, population standard deviation and range (max - min).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SummaryStats {
    pub mean: f64,
    pub std: f64,
    pub range: f64,
}

impl SummaryStats {
    /// Two-pass statistics of a non-empty slice.
    pub fn of(values: &[f64]) -> Self {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        let (lo, hi) = values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            });
        Self {
            mean,
            std: var.sqrt(),
            range: hi - lo,
        }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.mean, self.std, self.range]
    }
}

pub(crate) fn check_width(n: usize, w: usize) -> Result<()> {
    if w == 0 || w > n {
        return Err(ClaspError::invalid(format!(
            "window width {w} must be in 1..={n}"
        )));
    }
    Ok(())
}

/// All `n - w + 1` overlapping windows of width `w`, in offset order.
pub fn windows(ts: &TimeSeries, w: usize) -> Result<Vec<Window>> {
    check_width(ts.len(), w)?;
    Ok((0..=ts.len() - w)
        .map(|start| Window { start, width: w })
        .collect())
}

/// Z-normalizes `values`. Windows whose standard deviation is below `eps`
/// map to the all-zeros vector.
pub fn znormalize(values: &[f64], eps: f64) -> Vec<f64> {
    assert!(!values.is_empty(), "znormalize needs at least one value");
    let stats = SummaryStats::of(values);
    if stats.std < eps {
        return vec![0.0; values.len()];
    }
    values
        .iter()
        .map(|v| (v - stats.mean) / stats.std)
        .collect()
}

/// Rolling mean, standard deviation and range of every window of width `w`.
pub fn rolling_stats(ts: &TimeSeries, w: usize) -> Result<Vec<SummaryStats>> {
    check_width(ts.len(), w)?;
    Ok(rolling_stats_slice(ts.values(), w))
}

/// Prefix sums of values and squares give mean and variance in O(1) per
/// window; a monotonic deque tracks the window minimum and maximum.
///
/// Prefix-sum variance loses precision on nearly constant windows, so those
/// are recomputed directly, and windows with zero range get exactly zero
/// spread.
pub(crate) fn rolling_stats_slice(values: &[f64], w: usize) -> Vec<SummaryStats> {
    let n = values.len();
    debug_assert!(w >= 1 && w <= n);
    let mut sum = vec![0.0; n + 1];
    let mut sq = vec![0.0; n + 1];
    for (i, &v) in values.iter().enumerate() {
        sum[i + 1] = sum[i] + v;
        sq[i + 1] = sq[i] + v * v;
    }
    let ranges = rolling_range(values, w);
    let wf = w as f64;
    (0..=n - w)
        .map(|i| {
            let range = ranges[i];
            if range == 0.0 {
                return SummaryStats {
                    mean: values[i],
                    std: 0.0,
                    range: 0.0,
                };
            }
            let mean = (sum[i + w] - sum[i]) / wf;
            let mean_sq = (sq[i + w] - sq[i]) / wf;
            let var = mean_sq - mean * mean;
            if var <= 1e-7 * mean_sq.max(f64::MIN_POSITIVE) {
                let exact = SummaryStats::of(&values[i..i + w]);
                return SummaryStats { range, ..exact };
            }
            SummaryStats {
                mean,
                std: var.sqrt(),
                range,
            }
        })
        .collect()
}

fn rolling_range(values: &[f64], w: usize) -> Vec<f64> {
    let n = values.len();
    let mut out = Vec::with_capacity(n + 1 - w);
    let mut maxq: VecDeque<usize> = VecDeque::new();
    let mut minq: VecDeque<usize> = VecDeque::new();
    for i in 0..n {
        while maxq.back().is_some_and(|&j| values[j] <= values[i]) {
            maxq.pop_back();
        }
        maxq.push_back(i);
        while minq.back().is_some_and(|&j| values[j] >= values[i]) {
            minq.pop_back();
        }
        minq.push_back(i);
        if i + 1 >= w {
            let start = i + 1 - w;
            while maxq.front().is_some_and(|&j| j < start) {
                maxq.pop_front();
            }
            while minq.front().is_some_and(|&j| j < start) {
                minq.pop_front();
            }
            out.push(values[maxq[0]] - values[minq[0]]);
        }
    }
    out
}

/// Affine map onto `[0, 1]`. A constant series maps to all zeros.
pub fn minmax_scale(ts: &TimeSeries) -> TimeSeries {
    let (lo, hi) = ts
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let span = hi - lo;
    let values = if span > 0.0 {
        ts.iter().map(|v| ((v - lo) / span).clamp(0.0, 1.0)).collect()
    } else {
        vec![0.0; ts.len()]
    };
    TimeSeries { values }
}
