// SPDX-License-Identifier: MIT OR Apache-2.0

//! Segment a three-regime series, once learning the number of change
//! points and once with a fixed segment count.

use clasp::metrics::{covering_score, f1_score, CpSet};
use clasp::segmentation::{segment, Mode, SegmentationConfig};
use clasp::synth::{sine_segments, SineSegment};

fn main() -> clasp::error::Result<()> {
    let segs = [SineSegment::new(900, 50.0), SineSegment::new(700, 15.0), SineSegment::new(900, 30.0)];
    let (ts, truth) = sine_segments(&segs, 0.1, 5);
    let n = ts.len();

    for mode in [Mode::Learned, Mode::Fixed { n_segments: 3 }] {
        let cfg = SegmentationConfig { mode, ..Default::default() };
        let seg = segment(&ts, &cfg)?;
        println!("{} mode, window {}", mode.name(), seg.window);
        for cp in &seg.change_points {
            println!("  offset {:>5}  score {:.3}  p-value {:.2e}", cp.offset, cp.score, cp.p_value);
        }
        let t = CpSet::new(truth.clone(), n)?;
        let p = CpSet::new(seg.offsets(), n)?;
        println!("  covering {:.3}, f1 {:.3}", covering_score(&t, &p)?, f1_score(&t, &p, 0.01)?);
    }
    Ok(())
}
