// SPDX-License-Identifier: MIT OR Apache-2.0

//! Profile ensembles over random temporal constraints.
//!
//! Reoccurring regimes (A-B-A) confuse a single profile because the two
//! instances of A get different labels. Profiles computed on random
//! sub-intervals only see neighbours inside their interval; they are
//! weighted by interval length and max-merged into the global profile.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::Result;
use crate::knn::{KnnIndex, DEFAULT_K};
use crate::profile::{clasp_slice, min_series_len, Profile, Scorer};
use crate::series::TimeSeries;

pub const DEFAULT_N_ITER: usize = 30;
pub const DEFAULT_SEED: u64 = 2357;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnsembleConfig {
    pub n_iter: usize,
    pub seed: u64,
    /// Shortest interval worth a local profile; `None` means `2 (w + 2)`.
    pub min_interval: Option<usize>,
    pub k: usize,
    pub scorer: Scorer,
}

impl Default for EnsembleConfig {
    fn default() -> Self {
        Self {
            n_iter: DEFAULT_N_ITER,
            seed: DEFAULT_SEED,
            min_interval: None,
            k: DEFAULT_K,
            scorer: Scorer::default(),
        }
    }
}

/// One sampled interval `start..end`; `None` if it was too short.
pub(crate) fn sample_interval(
    seed: u64,
    iteration: usize,
    n: usize,
    min_len: usize,
) -> Option<(usize, usize)> {
    if min_len > n {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(iteration as u64);
    let start = rng.random_range(0..n);
    let tc = rng.random_range(min_len..=n);
    let end = (start + tc).min(n);
    (end - start >= min_len).then_some((start, end))
}

/// Global profile max-merged with `cfg.n_iter` weighted local profiles.
pub fn calc_clasp_ensemble(ts: &TimeSeries, w: usize, cfg: &EnsembleConfig) -> Result<Profile> {
    ensemble_slice(ts.values(), w, cfg).map(|(p, _)| p)
}

pub(crate) fn ensemble_slice(
    values: &[f64],
    w: usize,
    cfg: &EnsembleConfig,
) -> Result<(Profile, KnnIndex)> {
    let (mut profile, idx) = clasp_slice(values, w, cfg.k, cfg.scorer)?;
    let n = values.len();
    let min_len = cfg.min_interval.unwrap_or(min_series_len(w)).max(min_series_len(w));

    let locals: Vec<Option<(usize, Profile)>> = (0..cfg.n_iter)
        .into_par_iter()
        .map(|it| {
            let (start, end) = sample_interval(cfg.seed, it, n, min_len)?;
            let (local, _) = clasp_slice(&values[start..end], w, cfg.k, cfg.scorer).ok()?;
            Some((start, local))
        })
        .collect();

    for (start, local) in locals.into_iter().flatten() {
        let confidence = local.len() as f64 / n as f64;
        for i in local.valid.clone() {
            let weighted = (2.0 * local.scores[i] + confidence) / 3.0;
            let slot = &mut profile.scores[start + i];
            if weighted > *slot {
                *slot = weighted;
            }
        }
    }
    Ok((profile, idx))
}
