// SPDX-License-Identifier: MIT OR Apache-2.0

//! Window-size learning from summary statistics.
//!
//! A candidate width `w` is scored by how closely the rolling mean, standard
//! deviation and range of its windows match the statistics of the whole
//! (min-max scaled) series. Scores rise towards 1 as `w` grows; the
//! smallest width reaching the threshold is located with an exponential
//! search followed by a binary search.

use crate::error::{ClaspError, Result};
use crate::series::{check_width, minmax_scale, rolling_stats_slice, SummaryStats, TimeSeries};

pub const DEFAULT_THRESHOLD: f64 = 0.89;
pub const DEFAULT_LOWER: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SussConfig {
    /// Score a width must reach, in `(0, 1)`.
    pub threshold: f64,
    pub lower: usize,
    /// Largest width considered; `None` means `n / 2`.
    pub upper: Option<usize>,
}

impl Default for SussConfig {
    fn default() -> Self {
        Self {
            threshold: DEFAULT_THRESHOLD,
            lower: DEFAULT_LOWER,
            upper: None,
        }
    }
}

/// Outcome of [`calc_suss`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WindowSize {
    pub width: usize,
    /// False when no width in the search range reached the threshold and the
    /// upper bound was returned instead.
    pub reached_threshold: bool,
    /// True for series with no meaningful window size (e.g. constant).
    pub degenerate: bool,
}

/// Global statistics of a min-max scaled series, with the range pinned to 1.
pub fn global_stats(scaled: &TimeSeries) -> SummaryStats {
    let s = SummaryStats::of(scaled.values());
    SummaryStats { range: 1.0, ..s }
}

/// Mean distance between each window's statistics and `global`, weighted
/// by `1 / sqrt(w)`.
pub fn stats_diff(ts: &TimeSeries, w: usize, global: &SummaryStats) -> Result<f64> {
    check_width(ts.len(), w)?;
    Ok(stats_diff_unchecked(ts.values(), w, global))
}

fn stats_diff_unchecked(values: &[f64], w: usize, global: &SummaryStats) -> f64 {
    let rows = rolling_stats_slice(values, w);
    let g = global.as_array();
    let total: f64 = rows
        .iter()
        .map(|r| {
            r.as_array()
                .iter()
                .zip(&g)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt()
        })
        .sum();
    total / (rows.len() as f64 * (w as f64).sqrt())
}

/// Score of width `w` in `[0, 1]`; 0 at `w = 1`, 1 at `w = n`.
///
/// `ts` is expected to be min-max scaled. When both anchors coincide every
/// width scores 1.
pub fn suss_score(ts: &TimeSeries, w: usize, global: &SummaryStats) -> Result<f64> {
    check_width(ts.len(), w)?;
    Ok(Scorer::new(ts.values(), *global).score(w))
}

struct Scorer<'a> {
    values: &'a [f64],
    global: SummaryStats,
    s_min: f64,
    s_max: f64,
    degenerate: bool,
}

impl<'a> Scorer<'a> {
    fn new(values: &'a [f64], global: SummaryStats) -> Self {
        let s_min = stats_diff_unchecked(values, values.len(), &global);
        let s_max = stats_diff_unchecked(values, 1, &global);
        let constant = values.iter().all(|&v| v == values[0]);
        Self {
            values,
            global,
            s_min,
            s_max,
            degenerate: constant || s_max == s_min,
        }
    }

    fn score(&self, w: usize) -> f64 {
        if self.degenerate {
            return 1.0;
        }
        let diff = stats_diff_unchecked(self.values, w, &self.global);
        let scaled = (diff - self.s_min) / (self.s_max - self.s_min);
        (1.0 - scaled).clamp(0.0, 1.0)
    }
}

/// Learns a window width for `ts`.
pub fn calc_suss(ts: &TimeSeries, cfg: &SussConfig) -> Result<WindowSize> {
    let n = ts.len();
    if !(cfg.threshold > 0.0 && cfg.threshold < 1.0) {
        return Err(ClaspError::invalid(format!(
            "threshold {} must lie strictly between 0 and 1",
            cfg.threshold
        )));
    }
    if cfg.lower == 0 {
        return Err(ClaspError::invalid("lower search bound must be >= 1"));
    }
    if n < 4 * cfg.lower {
        return Err(ClaspError::SeriesTooShort {
            n,
            w: cfg.lower,
            min: 4 * cfg.lower,
        });
    }
    let upper = cfg.upper.unwrap_or(n / 2).min(n);
    if upper < cfg.lower {
        return Err(ClaspError::invalid(format!(
            "upper bound {upper} is below lower bound {}",
            cfg.lower
        )));
    }

    let scaled = minmax_scale(ts);
    let scorer = Scorer::new(scaled.values(), global_stats(&scaled));
    if scorer.degenerate {
        return Ok(WindowSize {
            width: cfg.lower,
            reached_threshold: false,
            degenerate: true,
        });
    }
    let (width, reached_threshold) =
        search_smallest(cfg.lower, upper, |w| scorer.score(w) >= cfg.threshold);
    Ok(WindowSize {
        width,
        reached_threshold,
        degenerate: false,
    })
}

/// Smallest `w` in `lower..=upper` with `accept(w)`, assuming `accept` is
/// monotone. Doubles from `lower` until a width is accepted, then bisects
/// the bracketing interval. Returns `(upper, false)` if nothing qualifies.
pub(crate) fn search_smallest(
    lower: usize,
    upper: usize,
    mut accept: impl FnMut(usize) -> bool,
) -> (usize, bool) {
    if accept(lower) {
        return (lower, true);
    }
    let mut rejected = lower;
    let accepted = loop {
        if rejected >= upper {
            return (upper, false);
        }
        let next = rejected.saturating_mul(2).min(upper);
        if accept(next) {
            break next;
        }
        rejected = next;
    };
    let (mut lo, mut hi) = (rejected, accepted);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if accept(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (hi, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn scaled(values: Vec<f64>) -> TimeSeries {
        minmax_scale(&TimeSeries::new(values).unwrap())
    }

    fn naive_stats_diff(v: &[f64], w: usize, g: [f64; 3]) -> f64 {
        let mut acc = 0.0;
        let count = v.len() - w + 1;
        for s in 0..count {
            let win = &v[s..s + w];
            let mean = win.iter().sum::<f64>() / w as f64;
            let std = (win.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / w as f64).sqrt();
            let rng = win.iter().cloned().fold(f64::MIN, f64::max)
                - win.iter().cloned().fold(f64::MAX, f64::min);
            let d = ((mean - g[0]).powi(2) + (std - g[1]).powi(2) + (rng - g[2]).powi(2)).sqrt();
            acc += d / (w as f64).sqrt();
        }
        acc / count as f64
    }

    #[test]
    fn full_width_diff_is_zero_on_scaled_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let t = scaled((0..300).map(|_| rng.random::<f64>()).collect());
        let g = global_stats(&t);
        let d = stats_diff(&t, t.len(), &g).unwrap();
        assert!(d.abs() < 1e-12, "{d}");
    }

    #[test]
    fn constant_series_diff_is_inverse_sqrt_w() {
        let t = scaled(vec![4.2; 100]);
        let g = global_stats(&t);
        assert_eq!(g.as_array(), [0.0, 0.0, 1.0]);
        for w in [1, 4, 9, 25, 100] {
            let d = stats_diff(&t, w, &g).unwrap();
            assert!((d - 1.0 / (w as f64).sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn stats_diff_matches_naive_w20() {
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        let t = scaled((0..500).map(|_| rng.random_range(-1.0..1.0)).collect());
        let g = global_stats(&t);
        let fast = stats_diff(&t, 20, &g).unwrap();
        let slow = naive_stats_diff(t.values(), 20, g.as_array());
        assert!((fast - slow).abs() < 1e-9);
    }

    #[test]
    fn score_anchors() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let t = scaled((0..400).map(|i| (i as f64 / 7.0).sin() + rng.random::<f64>()).collect());
        let g = global_stats(&t);
        assert_eq!(suss_score(&t, 1, &g).unwrap(), 0.0);
        assert_eq!(suss_score(&t, t.len(), &g).unwrap(), 1.0);
        assert!(suss_score(&t, 0, &g).is_err());
    }

    #[test]
    fn constant_series_returns_lower_bound() {
        let t = TimeSeries::new(vec![3.0; 500]).unwrap();
        let ws = calc_suss(&t, &SussConfig::default()).unwrap();
        assert_eq!(ws.width, DEFAULT_LOWER);
        assert!(ws.degenerate);
        let scaled = minmax_scale(&t);
        let g = global_stats(&scaled);
        assert_eq!(suss_score(&scaled, 37, &g).unwrap(), 1.0);
    }

    #[test]
    fn short_series_rejected() {
        let t = TimeSeries::new((0..39).map(|i| i as f64).collect()).unwrap();
        assert!(matches!(
            calc_suss(&t, &SussConfig::default()),
            Err(ClaspError::SeriesTooShort { .. })
        ));
        let bad = SussConfig { threshold: 1.0, ..Default::default() };
        let t = TimeSeries::new((0..100).map(|i| i as f64).collect()).unwrap();
        assert!(calc_suss(&t, &bad).is_err());
    }

    #[test]
    fn sine_period_50_matches_linear_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(50);
        let values: Vec<f64> = (0..2000)
            .map(|i| (2.0 * std::f64::consts::PI * i as f64 / 50.0).sin() + 0.05 * rng.random::<f64>())
            .collect();
        let t = TimeSeries::new(values).unwrap();
        let cfg = SussConfig::default();
        let got = calc_suss(&t, &cfg).unwrap();

        let s = minmax_scale(&t);
        let g = global_stats(&s);
        let scan = (cfg.lower..=t.len() / 2)
            .find(|&w| suss_score(&s, w, &g).unwrap() >= cfg.threshold)
            .expect("some width qualifies");
        assert!(got.reached_threshold);
        assert_eq!(got.width, scan);
    }

    #[test]
    fn search_is_logarithmic_and_exact_on_monotone_predicates() {
        for target in [1usize, 10, 11, 37, 64, 65, 999, 1000] {
            let mut calls = 0;
            let (w, ok) = search_smallest(10, 1000, |w| {
                calls += 1;
                w >= target
            });
            assert!(ok);
            assert_eq!(w, target.max(10));
            assert!(calls <= 2 * 10 + 2, "{calls} evaluations");
        }
        let (w, ok) = search_smallest(10, 1000, |_| false);
        assert_eq!((w, ok), (1000, false));
    }
}
