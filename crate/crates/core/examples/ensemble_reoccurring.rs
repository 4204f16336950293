// SPDX-License-Identifier: MIT OR Apache-2.0

//! Compare plain and ensembled profiles on an A-B-A series, where the two
//! A segments share a regime.

use clasp::ensemble::{calc_clasp_ensemble, EnsembleConfig};
use clasp::profile::{Profile, Scorer, calc_clasp};
use clasp::synth::{sine_segments, SineSegment};

fn peak_near(p: &Profile, cp: usize, radius: usize) -> f64 {
    p.scores[cp - radius..cp + radius].iter().cloned().fold(0.0, f64::max)
}

fn main() -> clasp::error::Result<()> {
    let segs = [SineSegment::new(1000, 60.0), SineSegment::new(1000, 20.0), SineSegment::new(1000, 60.0)];
    let (ts, truth) = sine_segments(&segs, 0.1, 3);
    let w = 20;

    let base = calc_clasp(&ts, w, Scorer::RocAuc)?;
    let ens = calc_clasp_ensemble(&ts, w, &EnsembleConfig::default())?;
    for cp in truth {
        println!(
            "change point {cp}: plain {:.3}, ensemble {:.3}",
            peak_near(&base, cp, 2 * w),
            peak_near(&ens, cp, 2 * w)
        );
    }
    Ok(())
}
