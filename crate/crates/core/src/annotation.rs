//! Point-annotation construction from dense ground truth.
//!
//! Sampling is keyed per (seed, video id, segment index) through the
//! generator documented in [`crate::rng`], so adding or removing videos
//! never shifts another video's annotations and reruns reproduce the same
//! points on any machine.

use crate::error::Result;
use crate::labels::{FrameLabels, PointAnnotation, PointAnnotationList};
use crate::metrics::extract_segments;
use crate::rng::{derive_key, fnv1a64, SplitMix64};

/// How to place the one annotated frame inside each segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointStrategy {
    /// A deterministic uniform draw within the segment.
    UniformRandom { seed: u64 },
    /// The middle frame, rounding down.
    Center,
}

/// Pick exactly one annotated frame per ground-truth segment.
pub fn simulate_points(
    gt: &FrameLabels,
    strategy: &PointStrategy,
    video_id: &str,
) -> Result<PointAnnotationList> {
    let segments = extract_segments(gt)?;
    let points = segments
        .iter()
        .enumerate()
        .map(|(index, seg)| {
            let frame = match strategy {
                PointStrategy::Center => seg.start + (seg.end - seg.start) / 2,
                PointStrategy::UniformRandom { seed } => {
                    let key = derive_key(*seed, &[fnv1a64(video_id.as_bytes()), index as u64]);
                    let mut rng = SplitMix64::new(key);
                    seg.start + rng.uniform(seg.len() as u64) as usize
                }
            };
            PointAnnotation {
                frame,
                class: seg.class,
            }
        })
        .collect();
    PointAnnotationList::new(points, gt.len())
}
