//! Pseudo-label generation from point annotations.
//!
//! Every generator solves the same problem: given one annotated frame per
//! segment, decide where the class changes between each pair of adjacent
//! annotations and fill all frames accordingly. Three strategies are
//! provided, each reading the transition out of the features differently:
//!
//! - [`generate_energy_labels`] splits each inter-annotation interval where
//!   a two-cluster fit of the frames is tightest.
//! - [`generate_kmedoids_labels`] runs temporally constrained k-medoids with
//!   one cluster per annotation.
//! - [`generate_prototype_labels`] compares each frame against per-class
//!   mean features computed over the whole training set.
//!
//! [`integrate`] combines several generated sequences by strict agreement,
//! leaving contested frames unlabeled.

mod energy;
mod integrate;
mod kmedoids;
mod prototypes;
mod similarity;

pub use energy::{energy_boundary, generate_energy_labels};
pub use integrate::integrate;
pub use kmedoids::generate_kmedoids_labels;
pub use prototypes::{compute_prototypes, Prototypes};
pub use similarity::generate_prototype_labels;

use crate::error::{Error, Result};
use crate::features::FeatureMatrix;
use crate::labels::{FrameLabels, PointAnnotation, PointAnnotationList};

/// Distance metric used by the generators. Euclidean is the only supported
/// metric; the enum exists so configurations can state it explicitly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Distance {
    #[default]
    Euclidean,
}

/// Shared generator settings.
#[derive(Debug, Clone)]
pub struct GeneratorConfig {
    /// Iteration cap for the k-medoids generator.
    pub max_kmedoids_iters: usize,
    pub distance: Distance,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        Self {
            max_kmedoids_iters: 50,
            distance: Distance::Euclidean,
        }
    }
}

impl GeneratorConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_kmedoids_iters == 0 {
            return Err(Error::Argument(
                "max_kmedoids_iters must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

pub(crate) fn check_points(features: &FeatureMatrix, points: &PointAnnotationList) -> Result<()> {
    if points.sequence_length() != features.rows() {
        return Err(Error::Shape(format!(
            "annotations describe a sequence of {} frames but the features have {}",
            points.sequence_length(),
            features.rows()
        )));
    }
    Ok(())
}

/// Fill a dense label sequence from per-pair transition decisions.
///
/// `boundary` is called for each adjacent pair of distinct-class annotations
/// and must return the last frame assigned to the left class, in
/// `[left.frame, right.frame)`; returning `left.frame` assigns the whole
/// open interval to the right class. Frames before the first annotation take
/// the first class, frames after the last take the last class, same-class
/// pairs are filled without any search, and every annotated frame keeps its
/// own class.
pub(crate) fn assemble_labels<F>(
    total_frames: usize,
    points: &PointAnnotationList,
    mut boundary: F,
) -> Result<FrameLabels>
where
    F: FnMut(&PointAnnotation, &PointAnnotation) -> Result<usize>,
{
    let pts = points.points();
    let mut labels = vec![None; total_frames];
    for p in pts {
        labels[p.frame] = Some(p.class);
    }
    let first = pts[0];
    let last = pts[pts.len() - 1];
    for slot in labels.iter_mut().take(first.frame) {
        *slot = Some(first.class);
    }
    for slot in labels.iter_mut().skip(last.frame + 1) {
        *slot = Some(last.class);
    }
    for pair in pts.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        if a.class == b.class {
            for slot in labels.iter_mut().take(b.frame).skip(a.frame + 1) {
                *slot = Some(a.class);
            }
            continue;
        }
        let cut = boundary(a, b)?;
        debug_assert!(
            (a.frame..b.frame).contains(&cut),
            "transition {cut} escaped [{}, {})",
            a.frame,
            b.frame
        );
        for slot in labels.iter_mut().take(cut + 1).skip(a.frame + 1) {
            *slot = Some(a.class);
        }
        for slot in labels.iter_mut().take(b.frame).skip(cut + 1) {
            *slot = Some(b.class);
        }
    }
    FrameLabels::new(labels)
}
