// SPDX-License-Identifier: MIT OR Apache-2.0

//! Test candidate splits with the rank-sum test on k-NN predictions: a real
//! regime change and a split in the middle of a single regime.

use clasp::knn::knn_profile;
use clasp::profile::{predict, split_labels};
use clasp::synth::{sine_segments, SineSegment};
use clasp::validation::{validate_candidate, ValidationConfig};

fn main() -> clasp::error::Result<()> {
    let (ts, truth) = sine_segments(&[SineSegment::new(800, 40.0), SineSegment::new(800, 11.0)], 0.1, 9);
    let w = 20;
    let idx = knn_profile(&ts, w, 3)?;
    let cfg = ValidationConfig::default();

    for split in [truth[0], 400] {
        let preds = predict(&idx, &split_labels(idx.len(), w, split));
        let v = validate_candidate(&preds, split, w, &cfg);
        println!("split {split}: p-value {:.3e} (ln {:.1}), accepted {}", v.p_value, v.ln_p_value, v.accepted);
    }
    Ok(())
}
