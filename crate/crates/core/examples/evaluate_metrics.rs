// SPDX-License-Identifier: MIT OR Apache-2.0

//! Score predicted change points with margin F1 and Covering.

use clasp::metrics::{covering_score, f1_score, CpSet, DEFAULT_MARGIN};

fn main() -> clasp::error::Result<()> {
    let n = 1000;
    let truth = CpSet::new(vec![300, 650], n)?;
    for pred in [vec![300, 650], vec![295, 655], vec![305, 480, 660], vec![500], vec![]] {
        let p = CpSet::new(pred.clone(), n)?;
        println!(
            "{pred:?}: f1 {:.3}, covering {:.3}",
            f1_score(&truth, &p, DEFAULT_MARGIN)?,
            covering_score(&truth, &p)?
        );
    }
    Ok(())
}
