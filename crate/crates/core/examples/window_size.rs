// SPDX-License-Identifier: MIT OR Apache-2.0

//! Learn a window width for periodic signals of different periods.

use clasp::suss::{calc_suss, SussConfig};
use clasp::synth::{sine_segments, SineSegment};

fn main() -> clasp::error::Result<()> {
    let cfg = SussConfig::default();
    for period in [20.0, 50.0, 120.0] {
        let (ts, _) = sine_segments(&[SineSegment::new(3000, period)], 0.05, 1);
        let ws = calc_suss(&ts, &cfg)?;
        println!(
            "period {period:>5}: width {:>3} (threshold reached: {})",
            ws.width, ws.reached_threshold
        );
    }
    Ok(())
}
