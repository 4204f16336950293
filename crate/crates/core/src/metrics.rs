// SPDX-License-Identifier: MIT OR Apache-2.0

//! Evaluation of predicted change points against ground truth: margin F1
//! and segment Covering.

use crate::error::{ClaspError, Result};

pub const DEFAULT_MARGIN: f64 = 0.01;

/// Strictly ascending change point offsets of a series of length `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CpSet {
    offsets: Vec<usize>,
    n: usize,
}

impl CpSet {
    pub fn new(offsets: Vec<usize>, n: usize) -> Result<Self> {
        for (i, &o) in offsets.iter().enumerate() {
            if o == 0 || o >= n {
                return Err(ClaspError::invalid(format!(
                    "change point {o} outside (0, {n})"
                )));
            }
            if i > 0 && offsets[i - 1] >= o {
                return Err(ClaspError::invalid(format!(
                    "change points not strictly ascending at {o}"
                )));
            }
        }
        Ok(Self { offsets, n })
    }

    pub fn empty(n: usize) -> Self {
        Self { offsets: Vec::new(), n }
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn series_len(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }

    /// Segments as half-open position intervals. Positions run `1..=n` and
    /// the virtual boundaries sit at `0` and `n + 1`, so the first segment
    /// is one position shorter than its offset suggests.
    fn segments(&self) -> Vec<(usize, usize)> {
        let mut bounds = Vec::with_capacity(self.offsets.len() + 2);
        bounds.push(0);
        bounds.extend(&self.offsets);
        bounds.push(self.n + 1);
        bounds
            .windows(2)
            .map(|b| (b[0].max(1), b[1]))
            .collect()
    }
}

fn same_len(truth: &CpSet, pred: &CpSet) -> Result<()> {
    if truth.n != pred.n {
        return Err(ClaspError::invalid(format!(
            "series lengths differ: truth {} vs prediction {}",
            truth.n, pred.n
        )));
    }
    Ok(())
}

/// Number of true positives under the greedy one-to-one matching: truth
/// change points in ascending order each take the nearest unmatched
/// prediction within `margin`, the left one on ties.
pub fn greedy_matches(truth: &[usize], pred: &[usize], margin: usize) -> usize {
    let mut used = vec![false; pred.len()];
    let mut tp = 0;
    for &t in truth {
        let best = pred
            .iter()
            .enumerate()
            .filter(|&(i, &p)| !used[i] && p.abs_diff(t) <= margin)
            .min_by_key(|&(_, &p)| (p.abs_diff(t), p));
        if let Some((i, _)) = best {
            used[i] = true;
            tp += 1;
        }
    }
    tp
}

/// F1 of `pred` against `truth` with a tolerance of
/// `floor(margin_fraction * n)` positions.
pub fn f1_score(truth: &CpSet, pred: &CpSet, margin_fraction: f64) -> Result<f64> {
    same_len(truth, pred)?;
    if !(margin_fraction.is_finite() && margin_fraction >= 0.0) {
        return Err(ClaspError::invalid(format!(
            "margin fraction {margin_fraction} must be finite and non-negative"
        )));
    }
    match (truth.is_empty(), pred.is_empty()) {
        (true, true) => return Ok(1.0),
        (true, false) | (false, true) => return Ok(0.0),
        _ => {}
    }
    let margin = (margin_fraction * truth.n as f64).floor() as usize;
    let tp = greedy_matches(&truth.offsets, &pred.offsets, margin) as f64;
    if tp == 0.0 {
        return Ok(0.0);
    }
    let precision = tp / pred.len() as f64;
    let recall = tp / truth.len() as f64;
    Ok(2.0 * precision * recall / (precision + recall))
}

/// Length-weighted best Jaccard overlap of each truth segment with the
/// predicted segments.
pub fn covering_score(truth: &CpSet, pred: &CpSet) -> Result<f64> {
    same_len(truth, pred)?;
    if truth.n == 0 {
        return Err(ClaspError::Empty);
    }
    let pred_segs = pred.segments();
    let mut total = 0.0;
    for (lo, hi) in truth.segments() {
        let len = hi.saturating_sub(lo);
        if len == 0 {
            continue;
        }
        let best = pred_segs
            .iter()
            .map(|&(plo, phi)| {
                let inter = hi.min(phi).saturating_sub(lo.max(plo));
                let union = len + phi.saturating_sub(plo) - inter;
                inter as f64 / union as f64
            })
            .fold(0.0, f64::max);
        total += len as f64 * best;
    }
    Ok(total / truth.n as f64)
}
