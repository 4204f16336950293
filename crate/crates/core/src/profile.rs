// SPDX-License-Identifier: MIT OR Apache-2.0

//! Classification score profile.
//!
//! For every hypothetical split `i`, windows that end before `i` are
//! labelled 0 and all others 1. Each window is predicted by the majority
//! label of its k nearest neighbours (leave-one-out), and the prediction
//! quality is recorded as the profile value at `i`.
//!
//! Moving the split by one flips exactly one window label, so only the
//! windows that have this window as a neighbour need new predictions. The
//! sweep keeps neighbour label counts and a running confusion matrix and
//! never re-evaluates the whole classifier.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use crate::error::{ClaspError, Result};
use crate::knn::{knn_profile_slice, KnnIndex, DEFAULT_K};
use crate::series::TimeSeries;

/// Metric turning a confusion matrix into a score in `[0, 1]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Scorer {
    #[default]
    RocAuc,
    MacroF1,
}

impl Scorer {
    pub fn score(self, c: &Confusion) -> f64 {
        match self {
            Scorer::RocAuc => score_roc_auc(c),
            Scorer::MacroF1 => score_macro_f1(c),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Scorer::RocAuc => "roc_auc",
            Scorer::MacroF1 => "macro_f1",
        }
    }
}

impl fmt::Display for Scorer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scorer {
    type Err = ClaspError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "roc_auc" => Ok(Scorer::RocAuc),
            "macro_f1" => Ok(Scorer::MacroF1),
            other => Err(ClaspError::invalid(format!(
                "unknown scorer `{other}` (expected roc_auc or macro_f1)"
            ))),
        }
    }
}

/// Confusion counts with class 1 as the positive class.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Confusion {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    pub tn: usize,
}

impl Confusion {
    pub fn total(&self) -> usize {
        self.tp + self.fp + self.fn_ + self.tn
    }

    /// Counts for (truth, prediction) pairs.
    pub fn from_labels(truth: &[bool], pred: &[bool]) -> Self {
        let mut c = Self::default();
        for (&t, &p) in truth.iter().zip(pred) {
            c.add(t, p);
        }
        c
    }

    #[inline]
    fn cell(&mut self, truth: bool, pred: bool) -> &mut usize {
        match (truth, pred) {
            (true, true) => &mut self.tp,
            (false, true) => &mut self.fp,
            (true, false) => &mut self.fn_,
            (false, false) => &mut self.tn,
        }
    }

    #[inline]
    fn add(&mut self, truth: bool, pred: bool) {
        *self.cell(truth, pred) += 1;
    }

    #[inline]
    fn remove(&mut self, truth: bool, pred: bool) {
        *self.cell(truth, pred) -= 1;
    }
}

fn f1(tp: usize, fp: usize, fn_: usize) -> f64 {
    let denom = 2 * tp + fp + fn_;
    if denom == 0 {
        0.0
    } else {
        (2 * tp) as f64 / denom as f64
    }
}

/// Unweighted mean of the per-class F1 scores.
pub fn score_macro_f1(c: &Confusion) -> f64 {
    let positive = f1(c.tp, c.fp, c.fn_);
    let negative = f1(c.tn, c.fn_, c.fp);
    (positive + negative) / 2.0
}

/// Area under the ROC curve of hard 0/1 predictions, i.e. `(TPR + TNR) / 2`.
/// Returns 0.5 if either class is absent from the truth.
pub fn score_roc_auc(c: &Confusion) -> f64 {
    let pos = c.tp + c.fn_;
    let neg = c.tn + c.fp;
    if pos == 0 || neg == 0 {
        return 0.5;
    }
    let tpr = c.tp as f64 / pos as f64;
    let tnr = c.tn as f64 / neg as f64;
    (tpr + tnr) / 2.0
}

/// Majority vote of neighbour labels for every window.
pub fn predict(idx: &KnnIndex, labels: &[bool]) -> Vec<bool> {
    let half = idx.k() / 2;
    (0..idx.len())
        .map(|i| idx.neighbors(i).iter().filter(|&&o| labels[o]).count() > half)
        .collect()
}

/// Leave-one-out confusion counts of the k-NN classifier under `labels`,
/// computed from scratch.
pub fn cross_validate(idx: &KnnIndex, labels: &[bool]) -> Confusion {
    Confusion::from_labels(labels, &predict(idx, labels))
}

/// Self-supervision labels for a split: windows `0..=split - w` are 0.
pub fn split_labels(num_windows: usize, width: usize, split: usize) -> Vec<bool> {
    (0..num_windows).map(|j| j + width > split).collect()
}

/// Splits `w + 1 .. n - w - 1` for a series of length `n`.
pub fn valid_splits(n: usize, w: usize) -> Range<usize> {
    let start = w + 1;
    let end = n.saturating_sub(w + 1).max(start);
    start..end
}

/// Shortest series for which a profile can be computed with width `w`.
pub fn min_series_len(w: usize) -> usize {
    2 * (w + 2)
}

/// Incremental state of the split sweep.
#[derive(Clone, Debug)]
pub struct SplitState {
    labels: Vec<bool>,
    counts: Vec<u32>,
    preds: Vec<bool>,
    confusion: Confusion,
    split: usize,
    end: usize,
    width: usize,
    half: u32,
}

impl SplitState {
    /// State for an arbitrary labelling; `split` is recorded but not used
    /// to derive labels.
    pub fn from_labels(idx: &KnnIndex, labels: Vec<bool>, split: usize) -> Self {
        assert_eq!(labels.len(), idx.len(), "one label per window");
        let counts: Vec<u32> = (0..idx.len())
            .map(|i| idx.neighbors(i).iter().filter(|&&o| labels[o]).count() as u32)
            .collect();
        let half = (idx.k() / 2) as u32;
        let preds: Vec<bool> = counts.iter().map(|&c| c > half).collect();
        let confusion = Confusion::from_labels(&labels, &preds);
        let n = idx.len() + idx.width() - 1;
        Self {
            labels,
            counts,
            preds,
            confusion,
            split,
            end: valid_splits(n, idx.width()).end,
            width: idx.width(),
            half,
        }
    }

    pub fn split(&self) -> usize {
        self.split
    }

    pub fn labels(&self) -> &[bool] {
        &self.labels
    }

    pub fn predictions(&self) -> &[bool] {
        &self.preds
    }

    pub fn positive_counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn confusion(&self) -> Confusion {
        self.confusion
    }

    /// Moves the split one step right and returns the new score, or `None`
    /// once the last valid split has been reached.
    pub fn advance_split(&mut self, idx: &KnnIndex, scorer: Scorer) -> Option<f64> {
        if self.split + 1 >= self.end {
            return None;
        }
        self.split += 1;
        let flipped = self.split - self.width;
        debug_assert!(self.labels[flipped]);

        let own_pred = self.preds[flipped];
        self.confusion.remove(true, own_pred);
        self.confusion.add(false, own_pred);
        self.labels[flipped] = false;

        for &r in idx.fan_in(flipped) {
            self.counts[r] -= 1;
            // only a count dropping to the threshold changes the vote
            if self.counts[r] == self.half {
                let truth = self.labels[r];
                self.confusion.remove(truth, true);
                self.confusion.add(truth, false);
                self.preds[r] = false;
            }
        }
        Some(scorer.score(&self.confusion))
    }
}

/// Labels for `first_split` and neighbour counts computed from scratch.
pub fn init_split_state(idx: &KnnIndex, first_split: usize) -> Result<SplitState> {
    let n = idx.len() + idx.width() - 1;
    let valid = valid_splits(n, idx.width());
    if !valid.contains(&first_split) {
        return Err(ClaspError::invalid(format!(
            "split {first_split} outside the valid range {}..{}",
            valid.start, valid.end
        )));
    }
    let labels = split_labels(idx.len(), idx.width(), first_split);
    Ok(SplitState::from_labels(idx, labels, first_split))
}

/// Score per offset; offsets outside `valid` hold 0.
#[derive(Clone, Debug, PartialEq)]
pub struct Profile {
    pub scores: Vec<f64>,
    pub valid: Range<usize>,
    pub width: usize,
}

impl Profile {
    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    /// Highest score over the valid range; ties go to the smaller offset.
    pub fn argmax(&self) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        for i in self.valid.clone() {
            let s = self.scores[i];
            if best.is_none_or(|(_, b)| s > b) {
                best = Some((i, s));
            }
        }
        best
    }
}

/// Profile of `ts` with the default `k` (3).
pub fn calc_clasp(ts: &TimeSeries, w: usize, scorer: Scorer) -> Result<Profile> {
    calc_clasp_with_k(ts, w, DEFAULT_K, scorer)
}

pub fn calc_clasp_with_k(ts: &TimeSeries, w: usize, k: usize, scorer: Scorer) -> Result<Profile> {
    clasp_slice(ts.values(), w, k, scorer).map(|(p, _)| p)
}

pub(crate) fn check_profile_len(n: usize, w: usize) -> Result<()> {
    let min = min_series_len(w);
    if w == 0 || n < min {
        return Err(ClaspError::SeriesTooShort { n, w, min });
    }
    Ok(())
}

/// Profile over a raw slice, returning the neighbour index alongside.
pub(crate) fn clasp_slice(
    values: &[f64],
    w: usize,
    k: usize,
    scorer: Scorer,
) -> Result<(Profile, KnnIndex)> {
    let n = values.len();
    check_profile_len(n, w)?;
    let idx = knn_profile_slice(values, w, k)?;
    let valid = valid_splits(n, w);
    let mut scores = vec![0.0; n];
    let mut state = init_split_state(&idx, valid.start)?;
    scores[valid.start] = scorer.score(&state.confusion());
    while let Some(score) = state.advance_split(&idx, scorer) {
        scores[state.split()] = score;
    }
    Ok((
        Profile {
            scores,
            valid,
            width: w,
        },
        idx,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knn::knn_profile;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn noise(seed: u64, n: usize) -> TimeSeries {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        TimeSeries::new((0..n).map(|_| rng.random_range(-1.0..1.0)).collect()).unwrap()
    }

    /// Per-class F1 computed straight from label vectors.
    fn oracle_macro_f1(truth: &[bool], pred: &[bool]) -> f64 {
        let mut total = 0.0;
        for class in [false, true] {
            let tp = truth.iter().zip(pred).filter(|(t, p)| **t == class && **p == class).count();
            let predicted = pred.iter().filter(|p| **p == class).count();
            let actual = truth.iter().filter(|t| **t == class).count();
            let prec = if predicted == 0 { 0.0 } else { tp as f64 / predicted as f64 };
            let rec = if actual == 0 { 0.0 } else { tp as f64 / actual as f64 };
            total += if prec + rec == 0.0 { 0.0 } else { 2.0 * prec * rec / (prec + rec) };
        }
        total / 2.0
    }

    /// Rank-based AUC: probability that a positive outranks a negative,
    /// ties counted as one half.
    fn oracle_rank_auc(truth: &[bool], pred: &[bool]) -> f64 {
        let pos: Vec<f64> = truth.iter().zip(pred).filter(|(t, _)| **t).map(|(_, p)| *p as u8 as f64).collect();
        let neg: Vec<f64> = truth.iter().zip(pred).filter(|(t, _)| !**t).map(|(_, p)| *p as u8 as f64).collect();
        if pos.is_empty() || neg.is_empty() {
            return 0.5;
        }
        let mut wins = 0.0;
        for a in &pos {
            for b in &neg {
                wins += if a > b { 1.0 } else if a == b { 0.5 } else { 0.0 };
            }
        }
        wins / (pos.len() * neg.len()) as f64
    }

    #[test]
    fn macro_f1_examples() {
        let perfect = Confusion { tp: 5, fp: 0, fn_: 0, tn: 7 };
        assert_eq!(score_macro_f1(&perfect), 1.0);
        let all_one = Confusion { tp: 10, fp: 10, fn_: 0, tn: 0 };
        assert!((score_macro_f1(&all_one) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn roc_auc_examples() {
        assert_eq!(score_roc_auc(&Confusion { tp: 5, fp: 0, fn_: 0, tn: 7 }), 1.0);
        for (pos, neg) in [(1, 9), (10, 10), (17, 2)] {
            let c = Confusion { tp: pos, fp: neg, fn_: 0, tn: 0 };
            assert_eq!(score_roc_auc(&c), 0.5);
        }
        assert_eq!(score_roc_auc(&Confusion { tp: 0, fp: 3, fn_: 0, tn: 4 }), 0.5);
    }

    #[test]
    fn scorers_match_label_oracles() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..200 {
            let len = rng.random_range(1..60);
            let truth: Vec<bool> = (0..len).map(|_| rng.random()).collect();
            let pred: Vec<bool> = (0..len).map(|_| rng.random()).collect();
            let c = Confusion::from_labels(&truth, &pred);
            assert!((score_macro_f1(&c) - oracle_macro_f1(&truth, &pred)).abs() < 1e-12);
            assert!((score_roc_auc(&c) - oracle_rank_auc(&truth, &pred)).abs() < 1e-12);
        }
    }

    #[test]
    fn scorer_parsing() {
        assert_eq!("roc_auc".parse::<Scorer>().unwrap(), Scorer::RocAuc);
        assert_eq!("macro_f1".parse::<Scorer>().unwrap(), Scorer::MacroF1);
        assert!("accuracy".parse::<Scorer>().is_err());
    }

    #[test]
    fn init_state_matches_recount() {
        let ts = noise(4, 200);
        let idx = knn_profile(&ts, 10, 3).unwrap();
        let state = init_split_state(&idx, 11).unwrap();
        let labels = split_labels(idx.len(), 10, 11);
        assert_eq!(state.labels(), labels.as_slice());
        assert_eq!(labels.iter().filter(|l| !**l).count(), 2);
        assert_eq!(state.confusion(), cross_validate(&idx, &labels));
        assert!(init_split_state(&idx, 10).is_err());
        assert!(init_split_state(&idx, 200 - 11).is_err());
    }

    #[test]
    fn all_but_first_labelled_one() {
        let ts = noise(8, 120);
        let idx = knn_profile(&ts, 6, 3).unwrap();
        let mut labels = vec![true; idx.len()];
        labels[0] = false;
        let state = SplitState::from_labels(&idx, labels.clone(), 0);
        for i in 0..idx.len() {
            let ones = idx.neighbors(i).iter().filter(|&&o| labels[o]).count();
            assert_eq!(state.positive_counts()[i] as usize, ones);
            assert_eq!(state.predictions()[i], ones >= 2);
        }
        assert_eq!(state.confusion(), cross_validate(&idx, &labels));
    }

    #[test]
    fn majority_of_zero_one_one_is_one() {
        // window 0's neighbours are 4, 5, 6; label 4 as 0 and the others 1
        let rows = vec![4, 5, 6, 4, 5, 6, 0, 1, 2, 0, 1, 2, 0, 1, 2, 0, 1, 2, 0, 1, 2];
        let idx = KnnIndex::from_rows(3, 1, rows);
        let labels = vec![true, true, true, true, false, true, true];
        assert!(predict(&idx, &labels)[0]);
    }

    #[test]
    fn empty_fan_in_only_changes_own_truth() {
        // window 2 is nobody's neighbour
        let rows = vec![
            4, 5, 6, //
            4, 5, 6, //
            4, 5, 6, //
            0, 1, 5, //
            0, 1, 6, //
            0, 1, 3, //
            0, 1, 3, //
        ];
        let idx = KnnIndex::from_rows(3, 1, rows);
        assert!(idx.fan_in(2).is_empty());
        // n = 7 windows with w = 1, valid splits 2..5, first split labels 0..=1
        let mut state = init_split_state(&idx, 2).unwrap();
        let before = state.confusion();
        let preds_before = state.predictions().to_vec();
        state.advance_split(&idx, Scorer::RocAuc).unwrap();
        assert_eq!(state.predictions(), preds_before.as_slice());
        let after = state.confusion();
        assert_eq!(after.total(), before.total());
        let own = preds_before[2];
        if own {
            assert_eq!((after.tp, after.fp), (before.tp - 1, before.fp + 1));
        } else {
            assert_eq!((after.fn_, after.tn), (before.fn_ - 1, before.tn + 1));
        }
        assert!(state.advance_split(&idx, Scorer::RocAuc).is_some());
        assert_eq!(state.advance_split(&idx, Scorer::RocAuc), None);
    }

    #[test]
    fn incremental_equals_from_scratch_at_every_split() {
        for (seed, w) in [(1, 5), (2, 10), (3, 20)] {
            let ts = noise(seed, 300);
            let idx = knn_profile(&ts, w, 3).unwrap();
            for scorer in [Scorer::RocAuc, Scorer::MacroF1] {
                let p = calc_clasp(&ts, w, scorer).unwrap();
                for i in p.valid.clone() {
                    let labels = split_labels(idx.len(), w, i);
                    let expected = scorer.score(&cross_validate(&idx, &labels));
                    assert_eq!(p.scores[i].to_bits(), expected.to_bits(), "split {i}");
                }
            }
        }
    }

    #[test]
    fn profile_structure() {
        let ts = noise(12, 250);
        let p = calc_clasp(&ts, 12, Scorer::RocAuc).unwrap();
        assert_eq!(p.len(), 250);
        assert_eq!(p.valid, 13..237);
        for (i, s) in p.scores.iter().enumerate() {
            assert!((0.0..=1.0).contains(s));
            if !p.valid.contains(&i) {
                assert_eq!(*s, 0.0);
            }
        }
    }

    #[test]
    fn too_short_is_distinguishable() {
        let ts = noise(1, 23);
        assert!(matches!(
            calc_clasp(&ts, 10, Scorer::RocAuc),
            Err(ClaspError::SeriesTooShort { n: 23, w: 10, min: 24 })
        ));
        assert!(calc_clasp(&noise(1, 24), 10, Scorer::RocAuc).is_ok());
    }

    #[test]
    fn two_regime_maximum_near_boundary() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let n = 1200;
        let values: Vec<f64> = (0..n)
            .map(|i| {
                let period = if i < 700 { 40.0 } else { 13.0 };
                (2.0 * std::f64::consts::PI * i as f64 / period).sin() + 0.1 * rng.random::<f64>()
            })
            .collect();
        let ts = TimeSeries::new(values).unwrap();
        let w = 20;
        let (at, score) = calc_clasp(&ts, w, Scorer::RocAuc).unwrap().argmax().unwrap();
        assert!(at.abs_diff(700) <= w, "argmax at {at}");
        assert!(score > 0.9);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn prop_scores_in_unit_interval(tp in 0usize..50, fp in 0usize..50, fn_ in 0usize..50, tn in 0usize..50) {
            let c = Confusion { tp, fp, fn_, tn };
            for s in [score_macro_f1(&c), score_roc_auc(&c)] {
                prop_assert!((0.0..=1.0).contains(&s));
            }
        }
    }
}
