// SPDX-License-Identifier: MIT OR Apache-2.0

//! Change point validation with a two-sided Wilcoxon rank-sum test.
//!
//! The test compares the predicted labels of the windows left of a
//! candidate split with those right of it. p-values use the normal
//! approximation with tie and continuity correction and are carried in log
//! space so thresholds around 1e-15 and below stay meaningful.

use std::cmp::Ordering;

use statrs::function::erf::erfc;

use crate::error::{ClaspError, Result};

pub const DEFAULT_P_VALUE: f64 = 1e-15;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ValidationConfig {
    /// Largest p-value for which a candidate is accepted.
    pub max_p_value: f64,
}

impl Default for ValidationConfig {
    fn default() -> Self {
        Self {
            max_p_value: DEFAULT_P_VALUE,
        }
    }
}

impl ValidationConfig {
    pub fn new(max_p_value: f64) -> Result<Self> {
        if !(max_p_value > 0.0 && max_p_value <= 1.0) {
            return Err(ClaspError::invalid(format!(
                "p-value threshold {max_p_value} must lie in (0, 1]"
            )));
        }
        Ok(Self { max_p_value })
    }
}

/// Result of testing one candidate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Validation {
    pub accepted: bool,
    pub p_value: f64,
    /// Natural log of the p-value; finite even where `p_value` saturates.
    pub ln_p_value: f64,
}

/// `ln(erfc(x))` for `x >= 0`, switching to the asymptotic series before
/// `erfc` underflows.
fn ln_erfc(x: f64) -> f64 {
    if x < 25.0 {
        return erfc(x).ln();
    }
    let x2 = x * x;
    let series = 1.0 - 1.0 / (2.0 * x2) + 3.0 / (4.0 * x2 * x2) - 15.0 / (8.0 * x2 * x2 * x2);
    -x2 - x.ln() - 0.5 * std::f64::consts::PI.ln() + series.ln()
}

/// Average ranks (1-based) of the pooled sample; returns the rank sum of the
/// first `n1` entries and the tie term `sum(t^3 - t)`.
fn rank_sum(pooled: &[f64], n1: usize) -> (f64, f64) {
    let mut order: Vec<usize> = (0..pooled.len()).collect();
    order.sort_by(|&a, &b| pooled[a].partial_cmp(&pooled[b]).unwrap_or(Ordering::Equal));
    let mut r1 = 0.0;
    let mut ties = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && pooled[order[j]] == pooled[order[i]] {
            j += 1;
        }
        let t = (j - i) as f64;
        let avg = (i + j + 1) as f64 / 2.0;
        r1 += avg * order[i..j].iter().filter(|&&o| o < n1).count() as f64;
        ties += t * t * t - t;
        i = j;
    }
    (r1, ties)
}

/// Natural log of the two-sided rank-sum p-value.
pub fn ranksum_ln_pvalue(left: &[f64], right: &[f64]) -> Result<f64> {
    if left.is_empty() || right.is_empty() {
        return Err(ClaspError::invalid("rank-sum test needs two non-empty groups"));
    }
    let (n1, n2) = (left.len() as f64, right.len() as f64);
    let big_n = n1 + n2;
    let pooled: Vec<f64> = left.iter().chain(right).copied().collect();
    let (r1, ties) = rank_sum(&pooled, left.len());
    let u = r1 - n1 * (n1 + 1.0) / 2.0;
    let mean = n1 * n2 / 2.0;
    let var = n1 * n2 / 12.0 * ((big_n + 1.0) - ties / (big_n * (big_n - 1.0)));
    if var.is_nan() || var <= 0.0 {
        return Ok(0.0);
    }
    let z = ((u - mean).abs() - 0.5).max(0.0) / var.sqrt();
    Ok(ln_erfc(z / std::f64::consts::SQRT_2).min(0.0))
}

/// Two-sided rank-sum p-value in `(0, 1]`.
pub fn ranksum_pvalue(left: &[f64], right: &[f64]) -> Result<f64> {
    ranksum_ln_pvalue(left, right).map(|lp| lp.exp().max(f64::MIN_POSITIVE))
}

/// Tests the predicted labels of windows left of `split` (offsets
/// `0..=split - width`) against those right of it.
pub fn validate_candidate(
    predictions: &[bool],
    split: usize,
    width: usize,
    cfg: &ValidationConfig,
) -> Validation {
    let reject = Validation {
        accepted: false,
        p_value: 1.0,
        ln_p_value: 0.0,
    };
    if split < width {
        return reject;
    }
    let boundary = (split - width + 1).min(predictions.len());
    if boundary == 0 || boundary == predictions.len() {
        return reject;
    }
    let as_f64 = |s: &[bool]| s.iter().map(|&b| b as u8 as f64).collect::<Vec<_>>();
    let left = as_f64(&predictions[..boundary]);
    let right = as_f64(&predictions[boundary..]);
    let ln_p = ranksum_ln_pvalue(&left, &right).expect("both groups are non-empty");
    Validation {
        accepted: ln_p <= cfg.max_p_value.ln(),
        p_value: ln_p.exp().max(f64::MIN_POSITIVE),
        ln_p_value: ln_p,
    }
}
