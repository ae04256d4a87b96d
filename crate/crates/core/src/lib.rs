//! Point-supervised temporal segmentation toolkit.
//!
//! Turns sparse point annotations on feature sequences into dense frame-wise
//! pseudo-labels, trains a nearest-class-mean segmenter on them, and scores
//! segmentations with the standard metric suite (frame accuracy, edit score,
//! segmental F1 at tIoU thresholds).
//!
//! The crate is organized around a small set of sequence types:
//!
//! - [`SkeletonSequence`] holds per-frame joint coordinates and derives the
//!   bone and motion modalities.
//! - [`FeatureMatrix`] is the common currency of all generators: one feature
//!   row per frame.
//! - [`PointAnnotationList`] carries the sparse `(frame, class)` supervision.
//! - [`FrameLabels`] is a dense or partially labeled per-frame class sequence.

pub mod annotation;
pub mod error;
pub mod features;
pub mod labels;
pub mod metrics;
pub mod pseudo;
pub mod rng;
pub mod segmenter;
pub mod skeleton;

pub use error::{Error, Result};
pub use features::{euclidean, fuse_inputs, FeatureMatrix};
pub use labels::{FrameLabels, PointAnnotation, PointAnnotationList};
pub use metrics::{
    edit_score, evaluate, evaluate_dataset, extract_segments, f1_at_tiou, frame_accuracy,
    EvalOptions, F1Score, MetricReport, Segment,
};
pub use pseudo::{
    compute_prototypes, energy_boundary, generate_energy_labels, generate_kmedoids_labels,
    generate_prototype_labels, integrate, Distance, GeneratorConfig, Prototypes,
};
pub use segmenter::{fit, smooth, PrototypeClassifier};
pub use skeleton::{derive_bone, derive_motion, flatten, unflatten, SkeletonSequence, SkeletonTopology};
pub use annotation::{simulate_points, PointStrategy};
