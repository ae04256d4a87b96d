//! Agreement-based integration of pseudo-label sequences.

use crate::error::{Error, Result};
use crate::labels::FrameLabels;

/// Keep a frame's label only when every input assigns it the same class;
/// contested or unlabeled frames come out unlabeled.
///
/// A single input passes through unchanged, which is what a pipeline with
/// all but one generator disabled expects.
pub fn integrate(sequences: &[FrameLabels]) -> Result<FrameLabels> {
    let first = sequences
        .first()
        .ok_or_else(|| Error::Argument("nothing to integrate".into()))?;
    for (i, s) in sequences.iter().enumerate() {
        if s.len() != first.len() {
            return Err(Error::Shape(format!(
                "sequence {i} has {} frames, expected {}",
                s.len(),
                first.len()
            )));
        }
    }
    let labels = (0..first.len())
        .map(|t| {
            let common = first.get(t)?;
            for s in &sequences[1..] {
                if s.get(t) != Some(common) {
                    return None;
                }
            }
            Some(common)
        })
        .collect();
    FrameLabels::new(labels)
}
