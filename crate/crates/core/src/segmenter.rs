//! A nearest-class-mean frame classifier with temporal smoothing.
//!
//! Deliberately linear: it closes the generate/train/evaluate loop at desk
//! scale so pseudo-label quality can be measured end to end without a neural
//! segmentation network.

use crate::error::{Error, Result};
use crate::features::{euclidean, FeatureMatrix, RunningMean};
use crate::labels::FrameLabels;

/// Per-class mean feature vectors fitted from pseudo-labeled frames.
#[derive(Debug, Clone, PartialEq)]
pub struct PrototypeClassifier {
    class_means: Vec<f64>,
    present: Vec<bool>,
    feature_dim: usize,
}

impl PrototypeClassifier {
    /// Assemble a classifier from stored parts, validating shapes.
    pub fn from_parts(
        feature_dim: usize,
        class_means: Vec<Vec<f64>>,
        present: Vec<bool>,
    ) -> Result<Self> {
        if feature_dim == 0 {
            return Err(Error::Argument("feature dimension must be positive".into()));
        }
        if class_means.len() != present.len() {
            return Err(Error::Shape(format!(
                "{} mean rows but {} presence flags",
                class_means.len(),
                present.len()
            )));
        }
        let mut flat = Vec::with_capacity(class_means.len() * feature_dim);
        for (c, row) in class_means.iter().enumerate() {
            if row.len() != feature_dim {
                return Err(Error::Shape(format!(
                    "class {c} mean has dimension {}, expected {feature_dim}",
                    row.len()
                )));
            }
            flat.extend_from_slice(row);
        }
        Ok(Self {
            class_means: flat,
            present,
            feature_dim,
        })
    }

    pub fn class_count(&self) -> usize {
        self.present.len()
    }

    pub fn feature_dim(&self) -> usize {
        self.feature_dim
    }

    pub fn present(&self, class: usize) -> bool {
        self.present[class]
    }

    pub fn present_mask(&self) -> &[bool] {
        &self.present
    }

    pub fn mean(&self, class: usize) -> &[f64] {
        &self.class_means[class * self.feature_dim..(class + 1) * self.feature_dim]
    }

    /// Label every frame with the nearest present class mean; equidistant
    /// classes resolve to the smallest id.
    pub fn predict(&self, features: &FeatureMatrix) -> Result<FrameLabels> {
        if features.cols() != self.feature_dim {
            return Err(Error::Shape(format!(
                "features have dimension {} but the model expects {}",
                features.cols(),
                self.feature_dim
            )));
        }
        if !self.present.iter().any(|&p| p) {
            return Err(Error::EmptyModel);
        }
        let labels = features
            .iter_rows()
            .map(|row| {
                let mut best = None;
                let mut best_dist = f64::INFINITY;
                for c in 0..self.class_count() {
                    if !self.present[c] {
                        continue;
                    }
                    let d = euclidean(row, self.mean(c));
                    if d < best_dist {
                        best_dist = d;
                        best = Some(c);
                    }
                }
                best
            })
            .collect();
        FrameLabels::new(labels)
    }
}

/// Fit per-class means from pseudo-labeled sequences. Unlabeled frames
/// contribute nothing; a class absent from every sequence is marked not
/// present and never predicted.
pub fn fit(
    features: &[FeatureMatrix],
    pseudo: &[FrameLabels],
    class_count: usize,
) -> Result<PrototypeClassifier> {
    if features.len() != pseudo.len() {
        return Err(Error::Shape(format!(
            "{} feature sequences but {} label sequences",
            features.len(),
            pseudo.len()
        )));
    }
    if features.is_empty() {
        return Err(Error::NoTrainingData);
    }
    if class_count == 0 {
        return Err(Error::Argument("class count must be positive".into()));
    }
    let dim = features[0].cols();
    let mut acc: Vec<RunningMean> = (0..class_count).map(|_| RunningMean::new(dim)).collect();
    for (i, (feat, labels)) in features.iter().zip(pseudo).enumerate() {
        if feat.cols() != dim {
            return Err(Error::Shape(format!(
                "sequence {i} has feature dimension {}, expected {dim}",
                feat.cols()
            )));
        }
        if feat.rows() != labels.len() {
            return Err(Error::Shape(format!(
                "sequence {i} has {} frames but {} labels",
                feat.rows(),
                labels.len()
            )));
        }
        for (t, slot) in labels.as_slice().iter().enumerate() {
            if let Some(c) = slot {
                if *c >= class_count {
                    return Err(Error::Index(format!(
                        "sequence {i}: label {c} outside the {class_count} known classes"
                    )));
                }
                acc[*c].add(feat.row(t));
            }
        }
    }
    if acc.iter().all(|a| a.count() == 0) {
        return Err(Error::NoTrainingData);
    }
    let present: Vec<bool> = acc.iter().map(|a| a.count() > 0).collect();
    let mut flat = Vec::with_capacity(class_count * dim);
    for a in acc {
        flat.extend_from_slice(a.mean());
    }
    Ok(PrototypeClassifier {
        class_means: flat,
        present,
        feature_dim: dim,
    })
}

/// Temporal smoothing that dissolves short label runs into their neighbors.
///
/// Any maximal run shorter than `(window + 1) / 2` frames is relabeled with
/// the class of its longest adjacent run, the run with the strongest
/// neighbor first (ties: the earliest run, then the left neighbor). Each
/// absorption merges runs, so the output never has more segments than the
/// input. A window of one keeps everything; the window must be odd.
pub fn smooth(labels: &FrameLabels, window: usize) -> Result<FrameLabels> {
    if window == 0 || window.is_multiple_of(2) {
        return Err(Error::Argument(format!(
            "smoothing window must be odd and positive, got {window}"
        )));
    }
    if !labels.is_dense() {
        return Err(Error::Argument("cannot smooth unlabeled frames".into()));
    }
    if window == 1 {
        return Ok(labels.clone());
    }
    let min_len = window / 2 + 1;
    // (length, class) per maximal run
    let mut runs: Vec<(usize, usize)> = Vec::new();
    for slot in labels.as_slice() {
        let c = slot.expect("checked dense");
        match runs.last_mut() {
            Some((len, class)) if *class == c => *len += 1,
            _ => runs.push((1, c)),
        }
    }
    while runs.len() >= 2 {
        // among runs too short to survive, absorb the one with the longest
        // neighbor first
        let mut pick: Option<(usize, usize)> = None; // (run index, neighbor length)
        for i in 0..runs.len() {
            if runs[i].0 >= min_len {
                continue;
            }
            let left = i.checked_sub(1).map(|j| runs[j].0).unwrap_or(0);
            let right = runs.get(i + 1).map(|r| r.0).unwrap_or(0);
            let strongest = left.max(right);
            if pick.is_none_or(|(_, best)| strongest > best) {
                pick = Some((i, strongest));
            }
        }
        let Some((i, _)) = pick else { break };
        let left = i.checked_sub(1).map(|j| runs[j].1);
        let right = runs.get(i + 1).map(|r| r.1);
        let left_len = i.checked_sub(1).map(|j| runs[j].0).unwrap_or(0);
        let right_len = runs.get(i + 1).map(|r| r.0).unwrap_or(0);
        let class = if left_len >= right_len {
            left.or(right).expect("at least two runs")
        } else {
            right.or(left).expect("at least two runs")
        };
        runs[i].1 = class;
        // coalesce around the relabeled run
        let mut merged: Vec<(usize, usize)> = Vec::with_capacity(runs.len());
        for run in runs {
            match merged.last_mut() {
                Some((len, c)) if *c == run.1 => *len += run.0,
                _ => merged.push(run),
            }
        }
        runs = merged;
    }
    let mut out = Vec::with_capacity(labels.len());
    for (len, class) in runs {
        out.extend(std::iter::repeat_n(Some(class), len));
    }
    FrameLabels::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(v: &[usize]) -> FrameLabels {
        FrameLabels::dense(v.to_vec()).unwrap()
    }

    fn constant_matrix(row: &[f64], frames: usize) -> FeatureMatrix {
        let mut data = Vec::new();
        for _ in 0..frames {
            data.extend_from_slice(row);
        }
        FeatureMatrix::new(data, frames, row.len()).unwrap()
    }

    #[test]
    fn fit_constant_features_gives_that_mean() {
        let f = constant_matrix(&[2.0, -1.0], 5);
        let l = labels(&[3, 3, 3, 3, 3]);
        let model = fit(&[f], &[l], 4).unwrap();
        assert_eq!(model.mean(3), &[2.0, -1.0]);
        assert!(model.present(3));
    }

    #[test]
    fn fit_skips_unlabeled_frames() {
        let f = FeatureMatrix::new(vec![0.0, 99.0, 4.0], 3, 1).unwrap();
        let l = FrameLabels::new(vec![Some(0), None, Some(0)]).unwrap();
        let model = fit(&[f], &[l], 1).unwrap();
        assert_eq!(model.mean(0), &[2.0]);
    }

    #[test]
    fn absent_class_is_not_present() {
        let f = constant_matrix(&[1.0], 2);
        let l = labels(&[0, 0]);
        let model = fit(&[f], &[l], 3).unwrap();
        assert!(!model.present(1));
        assert!(!model.present(2));
    }

    #[test]
    fn fit_with_no_labels_fails() {
        let f = constant_matrix(&[1.0], 2);
        let l = FrameLabels::new(vec![None, None]).unwrap();
        assert!(matches!(fit(&[f], &[l], 2), Err(Error::NoTrainingData)));
    }

    #[test]
    fn predict_recovers_exact_means() {
        let model = PrototypeClassifier::from_parts(
            1,
            vec![vec![0.0], vec![10.0]],
            vec![true, true],
        )
        .unwrap();
        let f = FeatureMatrix::new(vec![0.0, 10.0, 1.0], 3, 1).unwrap();
        let out = model.predict(&f).unwrap();
        assert_eq!(out, labels(&[0, 1, 0]));
    }

    #[test]
    fn predict_equidistant_breaks_to_smaller_class() {
        let model = PrototypeClassifier::from_parts(
            1,
            vec![vec![0.0], vec![10.0]],
            vec![true, true],
        )
        .unwrap();
        let f = FeatureMatrix::new(vec![5.0], 1, 1).unwrap();
        assert_eq!(model.predict(&f).unwrap(), labels(&[0]));
    }

    #[test]
    fn predict_six_is_closer_to_ten() {
        let model = PrototypeClassifier::from_parts(
            1,
            vec![vec![0.0], vec![10.0]],
            vec![true, true],
        )
        .unwrap();
        let f = FeatureMatrix::new(vec![6.0], 1, 1).unwrap();
        assert_eq!(model.predict(&f).unwrap(), labels(&[1]));
    }

    #[test]
    fn predict_without_present_classes_fails() {
        let model =
            PrototypeClassifier::from_parts(1, vec![vec![0.0]], vec![false]).unwrap();
        let f = FeatureMatrix::new(vec![1.0], 1, 1).unwrap();
        assert!(matches!(model.predict(&f), Err(Error::EmptyModel)));
    }

    #[test]
    fn fit_ignores_sequence_order() {
        let f1 = constant_matrix(&[1.0], 3);
        let f2 = constant_matrix(&[5.0], 3);
        let l1 = labels(&[0, 0, 0]);
        let l2 = labels(&[0, 0, 0]);
        let a = fit(&[f1.clone(), f2.clone()], &[l1.clone(), l2.clone()], 1).unwrap();
        let b = fit(&[f2, f1], &[l2, l1], 1).unwrap();
        assert_eq!(a.mean(0), b.mean(0));
    }

    #[test]
    fn smooth_window_one_is_identity() {
        let l = labels(&[0, 1, 0, 2]);
        assert_eq!(smooth(&l, 1).unwrap(), l);
    }

    #[test]
    fn smooth_removes_an_isolated_flip() {
        let l = labels(&[0, 1, 0, 0, 0]);
        assert_eq!(smooth(&l, 3).unwrap(), labels(&[0, 0, 0, 0, 0]));
    }

    #[test]
    fn smooth_keeps_constant_input() {
        let l = labels(&[4; 7]);
        for w in [1, 3, 5, 7, 9] {
            assert_eq!(smooth(&l, w).unwrap(), l);
        }
    }

    #[test]
    fn smooth_rejects_even_window() {
        let l = labels(&[0, 1]);
        assert!(smooth(&l, 2).is_err());
        assert!(smooth(&l, 0).is_err());
    }

    #[test]
    fn smooth_dissolves_balanced_short_runs_deterministically() {
        // both runs are below the survival length for window 5; the earlier
        // one is absorbed first and the sequence collapses
        let l = labels(&[0, 0, 1, 1]);
        assert_eq!(smooth(&l, 5).unwrap(), labels(&[1, 1, 1, 1]));
        // at window 3 both runs are long enough to survive
        assert_eq!(smooth(&l, 3).unwrap(), l);
    }

    #[test]
    fn smooth_prefers_the_longer_neighbor() {
        let l = labels(&[0, 0, 0, 2, 1, 1, 1, 1]);
        assert_eq!(smooth(&l, 5).unwrap(), labels(&[0, 0, 0, 1, 1, 1, 1, 1]));
    }
}
