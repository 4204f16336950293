// SPDX-License-Identifier: MIT OR Apache-2.0

//! Seeded synthetic series for examples, tests and benchmarks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::series::TimeSeries;

/// One regime of a piecewise sine series.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SineSegment {
    pub len: usize,
    /// Period in samples.
    pub period: f64,
    pub amplitude: f64,
}

impl SineSegment {
    pub fn new(len: usize, period: f64) -> Self {
        Self {
            len,
            period,
            amplitude: 1.0,
        }
    }
}

/// i.i.d. Gaussian noise with standard deviation `sigma`.
pub fn gaussian_noise(n: usize, sigma: f64, seed: u64) -> TimeSeries {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, sigma).expect("sigma must be finite and non-negative");
    TimeSeries::new(normal.sample_iter(&mut rng).take(n).collect())
        .expect("noise is finite and n > 0")
}

/// Concatenated sine regimes, each starting at phase 0, plus Gaussian noise.
/// Returns the series and the offsets where each new regime starts.
pub fn sine_segments(segments: &[SineSegment], sigma: f64, seed: u64) -> (TimeSeries, Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, sigma).expect("sigma must be finite and non-negative");
    let mut values = Vec::new();
    let mut cps = Vec::new();
    for seg in segments {
        if !values.is_empty() {
            cps.push(values.len());
        }
        values.extend((0..seg.len).map(|i| {
            seg.amplitude * (std::f64::consts::TAU * i as f64 / seg.period).sin()
                + normal.sample(&mut rng)
        }));
    }
    (
        TimeSeries::new(values).expect("segments must be non-empty"),
        cps,
    )
}
