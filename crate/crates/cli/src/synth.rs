//! Synthetic dataset generation.
//!
//! Every video is a piecewise-constant sequence of per-class mean rows plus
//! i.i.d. Gaussian noise. Class means are `separation / sqrt(2)` times the
//! standard basis vectors, so any two class means sit exactly `separation`
//! apart in Euclidean distance (this requires `feature_dim >= classes`).
//! Each video gets a raw and a feature matrix per modality, drawn from the
//! same means with independent noise streams, so fusing a pair averages two
//! independent looks at the same signal.
//!
//! All randomness flows from the documented SplitMix64 streams keyed by
//! (seed, video index, purpose), so one seed always produces byte-identical
//! files.

use std::path::{Path, PathBuf};

use pointseg_core::rng::{derive_key, SplitMix64};
use pointseg_core::{FeatureMatrix, FrameLabels};

use crate::config::Modality;
use crate::error::{CliError, Result};
use crate::formats;
use crate::manifest::{write_manifest, DatasetManifest, ModalityPaths, VideoEntry};

#[derive(Debug, Clone)]
pub struct SynthSpec {
    pub videos: usize,
    pub classes: usize,
    pub segments_per_video: usize,
    /// Inclusive frame-count range for one segment.
    pub segment_len: (usize, usize),
    pub feature_dim: usize,
    /// Pairwise Euclidean distance between class means.
    pub class_separation: f64,
    /// Per-dimension noise standard deviation.
    pub noise_stdev: f64,
    pub seed: u64,
}

impl SynthSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(CliError::Argument(msg));
        if self.videos == 0 || self.segments_per_video == 0 {
            return bad("need at least one video and one segment per video".into());
        }
        if self.segment_len.0 == 0 || self.segment_len.0 > self.segment_len.1 {
            return bad(format!(
                "segment length range {}..={} is empty",
                self.segment_len.0, self.segment_len.1
            ));
        }
        if self.classes == 0 {
            return bad("need at least one class".into());
        }
        if self.classes < 2 && self.segments_per_video > 1 {
            return bad("adjacent segments get distinct classes, so multiple segments need at least two classes".into());
        }
        if self.feature_dim < self.classes {
            return bad(format!(
                "feature_dim {} cannot place {} equidistant class means; use feature_dim >= classes",
                self.feature_dim, self.classes
            ));
        }
        if !self.class_separation.is_finite() || self.class_separation <= 0.0 {
            return bad(format!("class separation must be positive, got {}", self.class_separation));
        }
        if !self.noise_stdev.is_finite() || self.noise_stdev < 0.0 {
            return bad(format!("noise stdev must be non-negative, got {}", self.noise_stdev));
        }
        Ok(())
    }
}

/// The mean feature row of one class.
pub fn class_mean(spec: &SynthSpec, class: usize) -> Vec<f64> {
    let scale = spec.class_separation / std::f64::consts::SQRT_2;
    (0..spec.feature_dim)
        .map(|d| if d == class { scale } else { 0.0 })
        .collect()
}

fn modality_id(m: Modality) -> u64 {
    match m {
        Modality::Joint => 0,
        Modality::Bone => 1,
        Modality::Motion => 2,
    }
}

/// Segment lengths and classes for one video; adjacent segments always get
/// distinct classes.
fn video_structure(spec: &SynthSpec, video: usize) -> (Vec<usize>, Vec<usize>) {
    let mut rng = SplitMix64::new(derive_key(spec.seed, &[video as u64, 0]));
    let (lo, hi) = spec.segment_len;
    let lengths: Vec<usize> = (0..spec.segments_per_video)
        .map(|_| lo + rng.uniform((hi - lo + 1) as u64) as usize)
        .collect();
    let mut classes = Vec::with_capacity(spec.segments_per_video);
    let mut prev: Option<usize> = None;
    for _ in 0..spec.segments_per_video {
        let class = match prev {
            None => rng.uniform(spec.classes as u64) as usize,
            Some(p) => {
                let draw = rng.uniform(spec.classes as u64 - 1) as usize;
                if draw >= p {
                    draw + 1
                } else {
                    draw
                }
            }
        };
        classes.push(class);
        prev = Some(class);
    }
    (lengths, classes)
}

fn video_matrix(
    spec: &SynthSpec,
    video: usize,
    labels: &FrameLabels,
    modality: Modality,
    is_feature: bool,
) -> FeatureMatrix {
    let purpose = 1 + modality_id(modality) * 2 + u64::from(is_feature);
    let mut rng = SplitMix64::new(derive_key(spec.seed, &[video as u64, purpose]));
    let means: Vec<Vec<f64>> = (0..spec.classes).map(|c| class_mean(spec, c)).collect();
    let mut data = Vec::with_capacity(labels.len() * spec.feature_dim);
    for slot in labels.as_slice() {
        let mean = &means[slot.expect("synthetic labels are dense")];
        for &m in mean {
            data.push(m + spec.noise_stdev * rng.normal());
        }
    }
    FeatureMatrix::new(data, labels.len(), spec.feature_dim).expect("synthetic matrix is valid")
}

pub fn video_id(index: usize) -> String {
    format!("v{index:04}")
}

/// Write the dataset under `out` and return the manifest path.
pub fn generate_synthetic(spec: &SynthSpec, out: &Path) -> Result<PathBuf> {
    spec.validate()?;
    let mut videos = Vec::with_capacity(spec.videos);
    for v in 0..spec.videos {
        let id = video_id(v);
        let (lengths, classes) = video_structure(spec, v);
        let mut frame_classes = Vec::new();
        for (len, class) in lengths.iter().zip(&classes) {
            frame_classes.extend(std::iter::repeat_n(*class, *len));
        }
        let labels = FrameLabels::dense(frame_classes).expect("at least one frame");

        let labels_rel = PathBuf::from(format!("labels/{id}.txt"));
        formats::write_labels(&out.join(&labels_rel), &labels)?;

        let mut raw_paths = ModalityPaths::default();
        let mut feature_paths = ModalityPaths::default();
        for m in Modality::ALL {
            let raw_rel = PathBuf::from(format!("raw/{id}.{}.csv", m.name()));
            formats::write_feature_csv(&out.join(&raw_rel), &video_matrix(spec, v, &labels, m, false))?;
            raw_paths.set(m, raw_rel);
            let feat_rel = PathBuf::from(format!("features/{id}.{}.csv", m.name()));
            formats::write_feature_csv(&out.join(&feat_rel), &video_matrix(spec, v, &labels, m, true))?;
            feature_paths.set(m, feat_rel);
        }
        videos.push(VideoEntry {
            id,
            skeleton_path: None,
            raw_paths: Some(raw_paths),
            feature_paths: Some(feature_paths),
            labels_path: labels_rel,
            points_path: None,
        });
    }
    let manifest = DatasetManifest::new(spec.classes, None, None, videos, out.to_path_buf());
    let manifest_path = out.join("manifest.json");
    write_manifest(&manifest_path, &manifest)?;
    Ok(manifest_path)
}

/// Write `train.txt`/`test.txt` split files assigning the first
/// `train_count` videos to training.
pub fn write_default_splits(spec: &SynthSpec, out: &Path, train_count: usize) -> Result<()> {
    if train_count == 0 || train_count >= spec.videos {
        return Err(CliError::Argument(format!(
            "train count {train_count} must leave at least one video on each side of the split"
        )));
    }
    let ids: Vec<String> = (0..spec.videos).map(video_id).collect();
    formats::write_split(&out.join("train.txt"), &ids[..train_count])?;
    formats::write_split(&out.join("test.txt"), &ids[train_count..])
}
