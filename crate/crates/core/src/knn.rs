// SPDX-License-Identifier: MIT OR Apache-2.0

//! k-nearest-neighbour index over all windows of a series.
//!
//! Distances are z-normalized Euclidean distances obtained from sliding dot
//! products through `d^2 = 2w (1 - corr)`. Rows are produced in fixed-size
//! chunks: the first row of a chunk is computed directly, later rows are
//! updated from their predecessor in O(1) per entry. Only the `k` best
//! offsets of each row are kept, so the full distance matrix never exists.

use rayon::prelude::*;

use crate::error::{ClaspError, Result};
use crate::series::{check_width, rolling_stats_slice, TimeSeries, DEFAULT_EPS};

pub const DEFAULT_K: usize = 3;

/// Correlations this close to 1 are treated as exact matches.
const CORR_SNAP: f64 = 1e-12;

/// Offsets `j` with `|i - j| < exclusion_radius(w)` are never neighbours of `i`.
pub fn exclusion_radius(w: usize) -> usize {
    w.div_ceil(2)
}

/// Nearest-neighbour offsets of every window plus the transposed relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnnIndex {
    k: usize,
    width: usize,
    offsets: Vec<usize>,
    fan_in_start: Vec<usize>,
    fan_in: Vec<usize>,
}

impl KnnIndex {
    /// Builds an index from per-window neighbour rows (row-major, `k` per row).
    pub(crate) fn from_rows(k: usize, width: usize, offsets: Vec<usize>) -> Self {
        let m = offsets.len() / k;
        let mut counts = vec![0usize; m + 1];
        for &o in &offsets {
            counts[o + 1] += 1;
        }
        for j in 0..m {
            counts[j + 1] += counts[j];
        }
        let fan_in_start = counts.clone();
        let mut cursor = counts;
        let mut fan_in = vec![0usize; offsets.len()];
        for (i, row) in offsets.chunks_exact(k).enumerate() {
            for &o in row {
                fan_in[cursor[o]] = i;
                cursor[o] += 1;
            }
        }
        Self {
            k,
            width,
            offsets,
            fan_in_start,
            fan_in,
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Number of windows.
    pub fn len(&self) -> usize {
        self.offsets.len() / self.k
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }

    /// Neighbour offsets of window `i`, nearest first.
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.offsets[i * self.k..(i + 1) * self.k]
    }

    /// Windows that list `j` among their neighbours, ascending.
    pub fn fan_in(&self, j: usize) -> &[usize] {
        &self.fan_in[self.fan_in_start[j]..self.fan_in_start[j + 1]]
    }
}

#[derive(Clone, Copy, Debug)]
struct Moments {
    mean: f64,
    inv_std: f64,
    degenerate: bool,
}

/// Centered values plus per-window moments; shifting a series leaves
/// z-normalized distances unchanged but keeps dot products well-scaled.
struct Prepared {
    values: Vec<f64>,
    moments: Vec<Moments>,
    width: usize,
}

impl Prepared {
    fn new(raw: &[f64], width: usize) -> Self {
        let shift = raw.iter().sum::<f64>() / raw.len() as f64;
        let values: Vec<f64> = raw.iter().map(|v| v - shift).collect();
        let moments = rolling_stats_slice(&values, width)
            .into_iter()
            .map(|s| {
                let degenerate = s.std < DEFAULT_EPS;
                Moments {
                    mean: s.mean,
                    inv_std: if degenerate { 0.0 } else { 1.0 / s.std },
                    degenerate,
                }
            })
            .collect();
        Self {
            values,
            moments,
            width,
        }
    }

    fn num_windows(&self) -> usize {
        self.moments.len()
    }

    fn dot(&self, i: usize, j: usize) -> f64 {
        let w = self.width;
        self.values[i..i + w]
            .iter()
            .zip(&self.values[j..j + w])
            .map(|(a, b)| a * b)
            .sum()
    }

    #[inline]
    fn dist2(&self, qt: f64, i: usize, j: usize) -> f64 {
        let (a, b) = (&self.moments[i], &self.moments[j]);
        let w = self.width as f64;
        match (a.degenerate, b.degenerate) {
            (true, true) => 0.0,
            (true, false) | (false, true) => w,
            (false, false) => {
                let corr = ((qt / w - a.mean * b.mean) * a.inv_std * b.inv_std).clamp(-1.0, 1.0);
                if corr >= 1.0 - CORR_SNAP {
                    0.0
                } else {
                    2.0 * w * (1.0 - corr)
                }
            }
        }
    }
}

/// Distances from window `i` to every window of width `w`; entries inside
/// the exclusion zone are `+inf`.
pub fn distance_matrix_row(ts: &TimeSeries, w: usize, i: usize) -> Result<Vec<f64>> {
    check_width(ts.len(), w)?;
    let prep = Prepared::new(ts.values(), w);
    let m = prep.num_windows();
    if i >= m {
        return Err(ClaspError::invalid(format!(
            "window offset {i} out of range for {m} windows"
        )));
    }
    let excl = exclusion_radius(w);
    Ok((0..m)
        .map(|j| {
            if i.abs_diff(j) < excl {
                f64::INFINITY
            } else {
                prep.dist2(prep.dot(i, j), i, j).sqrt()
            }
        })
        .collect())
}

/// k-NN index of all windows of `ts` with width `w`.
pub fn knn_profile(ts: &TimeSeries, w: usize, k: usize) -> Result<KnnIndex> {
    knn_profile_slice(ts.values(), w, k)
}

pub(crate) fn check_knn_params(n: usize, w: usize, k: usize) -> Result<()> {
    check_width(n, w)?;
    if k == 0 || k.is_multiple_of(2) {
        return Err(ClaspError::invalid(format!("k must be odd and positive, got {k}")));
    }
    let m = n - w + 1;
    let needed = k + 2 * exclusion_radius(w);
    if m < needed {
        return Err(ClaspError::invalid(format!(
            "{m} windows are too few for k={k} with exclusion radius {} (need {needed})",
            exclusion_radius(w)
        )));
    }
    Ok(())
}

pub(crate) fn knn_profile_slice(values: &[f64], w: usize, k: usize) -> Result<KnnIndex> {
    check_knn_params(values.len(), w, k)?;
    let prep = Prepared::new(values, w);
    let m = prep.num_windows();
    // Fixed by the input alone so results never depend on the thread count.
    let chunk = 256.max(4 * w);
    let starts: Vec<usize> = (0..m).step_by(chunk).collect();
    let rows: Vec<Vec<usize>> = starts
        .par_iter()
        .map(|&r0| knn_rows(&prep, k, r0, (r0 + chunk).min(m)))
        .collect();
    Ok(KnnIndex::from_rows(k, w, rows.concat()))
}

fn knn_rows(prep: &Prepared, k: usize, r0: usize, r1: usize) -> Vec<usize> {
    let m = prep.num_windows();
    let w = prep.width;
    let x = &prep.values;
    let excl = exclusion_radius(w);
    let mut qt: Vec<f64> = (0..m).map(|j| prep.dot(r0, j)).collect();
    let mut out = Vec::with_capacity((r1 - r0) * k);
    let mut best: Vec<(f64, usize)> = Vec::with_capacity(k + 1);

    for i in r0..r1 {
        if i > r0 {
            let drop = x[i - 1];
            let add = x[i + w - 1];
            for j in (1..m).rev() {
                qt[j] = qt[j - 1] - drop * x[j - 1] + add * x[j + w - 1];
            }
            qt[0] = prep.dot(i, 0);
        }

        best.clear();
        let lo = i.saturating_sub(excl - 1);
        let hi = (i + excl).min(m);
        for j in (0..lo).chain(hi..m) {
            let d = prep.dist2(qt[j], i, j);
            if best.len() == k {
                if d >= best[k - 1].0 {
                    continue;
                }
                best.pop();
            }
            // j ascends, so equal distances keep the smaller offset first
            let pos = best.partition_point(|&(bd, _)| bd <= d);
            best.insert(pos, (d, j));
        }
        out.extend(best.iter().map(|&(_, j)| j));
    }
    out
}
