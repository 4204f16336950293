// SPDX-License-Identifier: MIT OR Apache-2.0

//! Compute a classification score profile and locate its peak.

use clasp::knn::knn_profile;
use clasp::profile::{calc_clasp, Scorer};
use clasp::synth::{sine_segments, SineSegment};

fn main() -> clasp::error::Result<()> {
    let (ts, truth) = sine_segments(&[SineSegment::new(1200, 45.0), SineSegment::new(800, 12.0)], 0.1, 7);
    let w = 20;

    let idx = knn_profile(&ts, w, 3)?;
    println!("window 0 neighbours: {:?}", idx.neighbors(0));

    for scorer in [Scorer::RocAuc, Scorer::MacroF1] {
        let profile = calc_clasp(&ts, w, scorer)?;
        let (at, score) = profile.argmax().expect("non-empty valid range");
        println!("{scorer}: peak {score:.3} at {at} (true change point {})", truth[0]);
    }
    Ok(())
}
