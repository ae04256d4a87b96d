//! Pipeline configuration: generator routing, sampling, smoothing, and the
//! train/test split.

use std::fmt;
use std::str::FromStr;

use clap::ValueEnum;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use pointseg_core::PointStrategy;

use crate::error::{CliError, Result};
use crate::manifest::DatasetManifest;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Modality {
    Joint,
    Bone,
    Motion,
}

impl Modality {
    pub const ALL: [Modality; 3] = [Modality::Joint, Modality::Bone, Modality::Motion];

    pub fn name(&self) -> &'static str {
        match self {
            Modality::Joint => "joint",
            Modality::Bone => "bone",
            Modality::Motion => "motion",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SourceKind {
    Raw,
    Feature,
    Fused,
}

impl SourceKind {
    pub fn name(&self) -> &'static str {
        match self {
            SourceKind::Raw => "raw",
            SourceKind::Feature => "feat",
            SourceKind::Fused => "fused",
        }
    }
}

/// What a generator consumes: a modality and whether it sees the raw data,
/// the precomputed features, or the fusion of both. Written `joint:fused`,
/// `bone:raw`, `motion:feat`, and so on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct InputRoute {
    pub modality: Modality,
    pub kind: SourceKind,
}

impl fmt::Display for InputRoute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.modality.name(), self.kind.name())
    }
}

impl FromStr for InputRoute {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (m, k) = s
            .split_once(':')
            .ok_or_else(|| format!("route {s:?} is not of the form modality:kind"))?;
        let modality = match m {
            "joint" => Modality::Joint,
            "bone" => Modality::Bone,
            "motion" => Modality::Motion,
            other => return Err(format!("unknown modality {other:?}")),
        };
        let kind = match k {
            "raw" => SourceKind::Raw,
            "feat" => SourceKind::Feature,
            "fused" => SourceKind::Fused,
            other => return Err(format!("unknown input kind {other:?}")),
        };
        Ok(InputRoute { modality, kind })
    }
}

impl Serialize for InputRoute {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for InputRoute {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Used by clap arguments taking a route.
pub fn parse_route(s: &str) -> std::result::Result<InputRoute, String> {
    s.parse()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum GeneratorKind {
    Prototype,
    Kmedoids,
    Energy,
}

impl GeneratorKind {
    pub const ALL: [GeneratorKind; 3] = [
        GeneratorKind::Prototype,
        GeneratorKind::Kmedoids,
        GeneratorKind::Energy,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            GeneratorKind::Prototype => "prototype",
            GeneratorKind::Kmedoids => "kmedoids",
            GeneratorKind::Energy => "energy",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyKind {
    #[default]
    UniformRandom,
    Center,
}

/// Everything a pipeline run depends on. Two runs with equal configs and
/// manifests produce byte-identical artifacts.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct PipelineConfig {
    /// Enabled generators; the integration step intersects their outputs.
    pub generators: Vec<GeneratorKind>,
    pub prototype_input: InputRoute,
    pub kmedoids_input: InputRoute,
    pub energy_input: InputRoute,
    /// Feature space the frame classifier trains and predicts in.
    pub classifier_input: InputRoute,
    pub point_strategy: StrategyKind,
    pub point_seed: u64,
    /// Load points from the manifest instead of sampling them.
    pub use_manifest_points: bool,
    pub smoothing_window: usize,
    pub max_kmedoids_iters: usize,
    pub thresholds: Vec<f64>,
    pub ignore_classes: Vec<usize>,
    pub per_video_f1: bool,
    pub train_videos: Vec<String>,
    pub test_videos: Vec<String>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            generators: GeneratorKind::ALL.to_vec(),
            prototype_input: InputRoute {
                modality: Modality::Joint,
                kind: SourceKind::Fused,
            },
            kmedoids_input: InputRoute {
                modality: Modality::Bone,
                kind: SourceKind::Fused,
            },
            energy_input: InputRoute {
                modality: Modality::Motion,
                kind: SourceKind::Fused,
            },
            classifier_input: InputRoute {
                modality: Modality::Joint,
                kind: SourceKind::Fused,
            },
            point_strategy: StrategyKind::UniformRandom,
            point_seed: 1,
            use_manifest_points: false,
            smoothing_window: 31,
            max_kmedoids_iters: 50,
            thresholds: vec![0.1, 0.25, 0.5],
            ignore_classes: Vec::new(),
            per_video_f1: false,
            train_videos: Vec::new(),
            test_videos: Vec::new(),
        }
    }
}

impl PipelineConfig {
    pub fn route_for(&self, generator: GeneratorKind) -> InputRoute {
        match generator {
            GeneratorKind::Prototype => self.prototype_input,
            GeneratorKind::Kmedoids => self.kmedoids_input,
            GeneratorKind::Energy => self.energy_input,
        }
    }

    pub fn strategy(&self) -> PointStrategy {
        match self.point_strategy {
            StrategyKind::UniformRandom => PointStrategy::UniformRandom {
                seed: self.point_seed,
            },
            StrategyKind::Center => PointStrategy::Center,
        }
    }

    pub fn validate(&self, manifest: &DatasetManifest) -> Result<()> {
        if self.generators.is_empty() {
            return Err(CliError::Config("no generators enabled".into()));
        }
        for (i, g) in self.generators.iter().enumerate() {
            if self.generators[..i].contains(g) {
                return Err(CliError::Config(format!(
                    "generator {} listed twice",
                    g.name()
                )));
            }
        }
        if self.smoothing_window == 0 || self.smoothing_window.is_multiple_of(2) {
            return Err(CliError::Config(format!(
                "smoothing_window must be odd and positive, got {}",
                self.smoothing_window
            )));
        }
        if self.max_kmedoids_iters == 0 {
            return Err(CliError::Config("max_kmedoids_iters must be at least 1".into()));
        }
        if self.thresholds.is_empty() {
            return Err(CliError::Config("no tIoU thresholds given".into()));
        }
        for &t in &self.thresholds {
            if !(t > 0.0 && t < 1.0) {
                return Err(CliError::Config(format!(
                    "tIoU threshold {t} must lie strictly between 0 and 1"
                )));
            }
        }
        if self.train_videos.is_empty() || self.test_videos.is_empty() {
            return Err(CliError::Config(
                "the pipeline needs non-empty train and test video lists".into(),
            ));
        }
        for id in self.train_videos.iter().chain(&self.test_videos) {
            if manifest.video(id).is_none() {
                return Err(CliError::Config(format!(
                    "split names video {id:?}, which the manifest does not contain"
                )));
            }
        }
        for id in &self.train_videos {
            if self.test_videos.contains(id) {
                return Err(CliError::Config(format!(
                    "video {id:?} appears in both the train and test splits"
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn route_strings_round_trip() {
        for m in ["joint", "bone", "motion"] {
            for k in ["raw", "feat", "fused"] {
                let s = format!("{m}:{k}");
                let route: InputRoute = s.parse().unwrap();
                assert_eq!(route.to_string(), s);
            }
        }
        assert!("joint".parse::<InputRoute>().is_err());
        assert!("joint:banana".parse::<InputRoute>().is_err());
    }

    #[test]
    fn config_serde_round_trip() {
        let cfg = PipelineConfig {
            train_videos: vec!["a".into()],
            test_videos: vec!["b".into()],
            ..PipelineConfig::default()
        };
        let json = serde_json::to_string_pretty(&cfg).unwrap();
        let back: PipelineConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cfg);
    }
}
