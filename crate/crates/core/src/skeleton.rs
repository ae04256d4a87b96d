//! Skeleton sequences, joint topology, and modality derivation.
//!
//! The joint modality is the raw coordinate sequence. The bone modality is
//! each joint's offset from its parent joint; the motion modality is each
//! joint's displacement from the previous frame. Both derivations preserve
//! the sequence shape so frame labels stay aligned.

use crate::error::{Error, Result};
use crate::features::FeatureMatrix;

/// Per-frame joint coordinates, T x J x C with C in {2, 3}.
#[derive(Debug, Clone, PartialEq)]
pub struct SkeletonSequence {
    data: Vec<f64>,
    frames: usize,
    joints: usize,
    channels: usize,
}

impl SkeletonSequence {
    pub fn new(data: Vec<f64>, frames: usize, joints: usize, channels: usize) -> Result<Self> {
        if frames == 0 || joints == 0 {
            return Err(Error::Argument(format!(
                "skeleton needs at least one frame and one joint; got {frames} frames, {joints} joints"
            )));
        }
        if channels != 2 && channels != 3 {
            return Err(Error::Argument(format!(
                "coordinate channels must be 2 or 3, got {channels}"
            )));
        }
        if data.len() != frames * joints * channels {
            return Err(Error::Shape(format!(
                "skeleton data has {} values, expected {frames}x{joints}x{channels} = {}",
                data.len(),
                frames * joints * channels
            )));
        }
        if let Some(i) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("skeleton value at flat index {i}")));
        }
        Ok(Self {
            data,
            frames,
            joints,
            channels,
        })
    }

    pub fn frames(&self) -> usize {
        self.frames
    }

    pub fn joints(&self) -> usize {
        self.joints
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    /// All coordinates of frame `t`, joint-major and channel-minor.
    pub fn frame(&self, t: usize) -> &[f64] {
        let w = self.joints * self.channels;
        &self.data[t * w..(t + 1) * w]
    }

    /// Coordinates of joint `j` at frame `t`.
    pub fn joint(&self, t: usize, j: usize) -> &[f64] {
        let w = self.joints * self.channels;
        let base = t * w + j * self.channels;
        &self.data[base..base + self.channels]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}

/// Parent index per joint; a root has no parent. The joint graph must be a
/// forest with at least one root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkeletonTopology {
    parent: Vec<Option<usize>>,
}

impl SkeletonTopology {
    pub fn new(parent: Vec<Option<usize>>) -> Result<Self> {
        let j = parent.len();
        if j == 0 {
            return Err(Error::Argument("topology must cover at least one joint".into()));
        }
        if !parent.iter().any(Option::is_none) {
            return Err(Error::Argument("topology has no root joint".into()));
        }
        for (i, p) in parent.iter().enumerate() {
            if let Some(p) = p {
                if *p >= j {
                    return Err(Error::Index(format!(
                        "joint {i} names parent {p}, but there are only {j} joints"
                    )));
                }
                if *p == i {
                    return Err(Error::Argument(format!("joint {i} is its own parent")));
                }
            }
        }
        // Walk each parent chain; a chain longer than J frames a cycle.
        for start in 0..j {
            let mut cur = start;
            let mut steps = 0;
            while let Some(p) = parent[cur] {
                cur = p;
                steps += 1;
                if steps > j {
                    return Err(Error::Argument(format!(
                        "topology contains a cycle through joint {start}"
                    )));
                }
            }
        }
        Ok(Self { parent })
    }

    /// Build from the on-disk convention: the parent index, or -1 for a root.
    pub fn from_parent_indices(indices: &[i64]) -> Result<Self> {
        let parent = indices
            .iter()
            .enumerate()
            .map(|(i, &p)| match p {
                -1 => Ok(None),
                p if p >= 0 => Ok(Some(p as usize)),
                p => Err(Error::Argument(format!(
                    "joint {i} has parent index {p}; use -1 for a root"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(parent)
    }

    pub fn joint_count(&self) -> usize {
        self.parent.len()
    }

    pub fn parent(&self, joint: usize) -> Option<usize> {
        self.parent[joint]
    }

    pub fn parent_indices(&self) -> Vec<i64> {
        self.parent
            .iter()
            .map(|p| p.map_or(-1, |v| v as i64))
            .collect()
    }
}

/// Bone modality: each joint's offset from its parent joint, per frame.
/// Root joints map to the zero vector so the shape matches the input.
pub fn derive_bone(skel: &SkeletonSequence, topo: &SkeletonTopology) -> Result<SkeletonSequence> {
    if topo.joint_count() != skel.joints() {
        return Err(Error::Shape(format!(
            "topology covers {} joints but the skeleton has {}",
            topo.joint_count(),
            skel.joints()
        )));
    }
    let c = skel.channels();
    let mut data = vec![0.0; skel.as_slice().len()];
    let w = skel.joints() * c;
    for t in 0..skel.frames() {
        for j in 0..skel.joints() {
            if let Some(p) = topo.parent(j) {
                let child = skel.joint(t, j);
                let parent = skel.joint(t, p);
                let base = t * w + j * c;
                for k in 0..c {
                    data[base + k] = child[k] - parent[k];
                }
            }
        }
    }
    SkeletonSequence::new(data, skel.frames(), skel.joints(), c)
}

/// Motion modality: per-joint displacement between consecutive frames.
/// Frame 0 is zero-padded so the sequence keeps its length.
pub fn derive_motion(skel: &SkeletonSequence) -> SkeletonSequence {
    let w = skel.joints() * skel.channels();
    let mut data = vec![0.0; skel.as_slice().len()];
    for t in 1..skel.frames() {
        let cur = skel.frame(t);
        let prev = skel.frame(t - 1);
        for k in 0..w {
            data[t * w + k] = cur[k] - prev[k];
        }
    }
    SkeletonSequence::new(data, skel.frames(), skel.joints(), skel.channels())
        .expect("motion preserves a valid shape")
}

/// Flatten each frame to a feature row in joint-major, channel-minor order.
pub fn flatten(skel: &SkeletonSequence) -> FeatureMatrix {
    FeatureMatrix::new(
        skel.as_slice().to_vec(),
        skel.frames(),
        skel.joints() * skel.channels(),
    )
    .expect("a valid skeleton flattens to a valid matrix")
}

/// Inverse of [`flatten`] given the joint and channel counts.
pub fn unflatten(m: &FeatureMatrix, joints: usize, channels: usize) -> Result<SkeletonSequence> {
    if m.cols() != joints * channels {
        return Err(Error::Shape(format!(
            "matrix with {} columns cannot be reshaped to {joints}x{channels} joints",
            m.cols()
        )));
    }
    SkeletonSequence::new(m.as_slice().to_vec(), m.rows(), joints, channels)
}
