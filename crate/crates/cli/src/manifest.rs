//! Dataset manifests.
//!
//! A manifest is a JSON file naming every video's data files, with paths
//! relative to the manifest's own directory:
//!
//! ```json
//! {
//!   "class_count": 5,
//!   "class_names": ["walk", "..."],
//!   "topology_path": "topology.txt",
//!   "videos": [
//!     {
//!       "id": "v0001",
//!       "skeleton_path": "skeletons/v0001.csv",
//!       "raw_paths": { "joint": "raw/v0001.joint.csv" },
//!       "feature_paths": { "joint": "features/v0001.joint.csv" },
//!       "labels_path": "labels/v0001.txt",
//!       "points_path": "points/v0001.csv"
//!     }
//!   ]
//! }
//! ```
//!
//! Raw modality matrices come from `raw_paths` when present, otherwise they
//! are derived from `skeleton_path` (which requires `topology_path`).
//! Loading validates everything eagerly: unique ids, existing files, label
//! class ids under `class_count`, and well-formed points.

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use pointseg_core::FrameLabels;

use crate::config::Modality;
use crate::error::{CliError, Result};
use crate::formats;

#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ModalityPaths {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub joint: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bone: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub motion: Option<PathBuf>,
}

impl ModalityPaths {
    pub fn get(&self, modality: Modality) -> Option<&PathBuf> {
        match modality {
            Modality::Joint => self.joint.as_ref(),
            Modality::Bone => self.bone.as_ref(),
            Modality::Motion => self.motion.as_ref(),
        }
    }

    pub fn set(&mut self, modality: Modality, path: PathBuf) {
        match modality {
            Modality::Joint => self.joint = Some(path),
            Modality::Bone => self.bone = Some(path),
            Modality::Motion => self.motion = Some(path),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct VideoEntry {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skeleton_path: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub raw_paths: Option<ModalityPaths>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub feature_paths: Option<ModalityPaths>,
    pub labels_path: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points_path: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct DatasetManifest {
    pub class_count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class_names: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub topology_path: Option<PathBuf>,
    pub videos: Vec<VideoEntry>,
    /// Directory the manifest was loaded from; relative paths resolve
    /// against it.
    #[serde(skip)]
    root: PathBuf,
}

impl DatasetManifest {
    pub fn new(
        class_count: usize,
        class_names: Option<Vec<String>>,
        topology_path: Option<PathBuf>,
        videos: Vec<VideoEntry>,
        root: PathBuf,
    ) -> Self {
        Self {
            class_count,
            class_names,
            topology_path,
            videos,
            root,
        }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn resolve(&self, rel: &Path) -> PathBuf {
        if rel.is_absolute() {
            rel.to_path_buf()
        } else {
            self.root.join(rel)
        }
    }

    pub fn video(&self, id: &str) -> Option<&VideoEntry> {
        self.videos.iter().find(|v| v.id == id)
    }

    pub fn video_ids(&self) -> Vec<String> {
        self.videos.iter().map(|v| v.id.clone()).collect()
    }

    pub fn labels_for(&self, video: &VideoEntry) -> Result<FrameLabels> {
        formats::read_labels(&self.resolve(&video.labels_path))
    }

    /// Rewrite every path as absolute so the manifest can be re-rooted.
    pub fn absolutized(&self) -> DatasetManifest {
        let abs = |p: &PathBuf| self.resolve(p);
        let abs_paths = |mp: &ModalityPaths| ModalityPaths {
            joint: mp.joint.as_ref().map(&abs),
            bone: mp.bone.as_ref().map(&abs),
            motion: mp.motion.as_ref().map(&abs),
        };
        DatasetManifest {
            class_count: self.class_count,
            class_names: self.class_names.clone(),
            topology_path: self.topology_path.as_ref().map(&abs),
            videos: self
                .videos
                .iter()
                .map(|v| VideoEntry {
                    id: v.id.clone(),
                    skeleton_path: v.skeleton_path.as_ref().map(&abs),
                    raw_paths: v.raw_paths.as_ref().map(&abs_paths),
                    feature_paths: v.feature_paths.as_ref().map(&abs_paths),
                    labels_path: abs(&v.labels_path),
                    points_path: v.points_path.as_ref().map(&abs),
                })
                .collect(),
            root: PathBuf::new(),
        }
    }
}

pub fn write_manifest(path: &Path, manifest: &DatasetManifest) -> Result<()> {
    let json = serde_json::to_string_pretty(manifest)
        .expect("manifest serialization cannot fail");
    formats::write_atomic(path, &format!("{json}\n"))
}

fn field_err(field: String, message: impl Into<String>) -> CliError {
    CliError::ManifestField {
        field,
        message: message.into(),
    }
}

fn check_exists(root: &Path, field: String, rel: &Path) -> Result<()> {
    let path = if rel.is_absolute() {
        rel.to_path_buf()
    } else {
        root.join(rel)
    };
    if !path.is_file() {
        return Err(field_err(field, format!("missing file {}", path.display())));
    }
    Ok(())
}

/// Load and eagerly validate a manifest.
pub fn load_manifest(path: &Path) -> Result<DatasetManifest> {
    let text = formats::read_to_string(path)?;
    let mut manifest: DatasetManifest =
        serde_json::from_str(&text).map_err(|e| CliError::ManifestParse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
    manifest.root = path
        .parent()
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("."));

    if manifest.class_count == 0 {
        return Err(field_err("class_count".into(), "must be at least 1"));
    }
    if let Some(names) = &manifest.class_names {
        if names.len() != manifest.class_count {
            return Err(field_err(
                "class_names".into(),
                format!(
                    "{} names for class_count {}",
                    names.len(),
                    manifest.class_count
                ),
            ));
        }
    }
    if manifest.videos.is_empty() {
        return Err(field_err("videos".into(), "manifest lists no videos"));
    }

    let mut seen = HashSet::new();
    for (i, v) in manifest.videos.iter().enumerate() {
        if !seen.insert(v.id.clone()) {
            return Err(field_err(
                format!("videos[{i}].id"),
                format!("duplicate video id {:?}", v.id),
            ));
        }
    }

    if let Some(topo) = &manifest.topology_path {
        check_exists(&manifest.root, "topology_path".into(), topo)?;
        formats::read_topology(&manifest.resolve(topo))?;
    }

    for (i, v) in manifest.videos.iter().enumerate() {
        let fld = |name: &str| format!("videos[{i}].{name}");
        if let Some(p) = &v.skeleton_path {
            check_exists(&manifest.root, fld("skeleton_path"), p)?;
        }
        for (map, name) in [(&v.raw_paths, "raw_paths"), (&v.feature_paths, "feature_paths")] {
            if let Some(map) = map {
                for m in Modality::ALL {
                    if let Some(p) = map.get(m) {
                        check_exists(&manifest.root, format!("videos[{i}].{name}.{}", m.name()), p)?;
                    }
                }
            }
        }
        check_exists(&manifest.root, fld("labels_path"), &v.labels_path)?;

        // labels must parse and stay under class_count; report the line
        let labels_path = manifest.resolve(&v.labels_path);
        let labels = formats::read_labels(&labels_path)?;
        for (line, slot) in labels.as_slice().iter().enumerate() {
            if let Some(c) = slot {
                if *c >= manifest.class_count {
                    return Err(CliError::ParseFile {
                        path: labels_path.clone(),
                        line: line + 1,
                        message: format!(
                            "class id {c} but the manifest declares class_count {}",
                            manifest.class_count
                        ),
                    });
                }
            }
        }

        if let Some(p) = &v.points_path {
            check_exists(&manifest.root, fld("points_path"), p)?;
            let points = formats::read_points(&manifest.resolve(p), labels.len())?;
            for pt in points.points() {
                if pt.class >= manifest.class_count {
                    return Err(field_err(
                        fld("points_path"),
                        format!(
                            "point class {} outside class_count {}",
                            pt.class, manifest.class_count
                        ),
                    ));
                }
            }
        }
    }
    Ok(manifest)
}
