//! Per-class prototype features.

use crate::error::{Error, Result};
use crate::features::{FeatureMatrix, RunningMean};
use crate::labels::PointAnnotationList;

/// Per-class mean feature vectors with a presence mask. A class that never
/// appears in the training annotations has an all-zero mean and must not be
/// queried by generators.
#[derive(Debug, Clone, PartialEq)]
pub struct Prototypes {
    means: Vec<f64>,
    present: Vec<bool>,
    class_count: usize,
    dim: usize,
}

impl Prototypes {
    /// Build directly from per-class mean rows; rows of absent classes must
    /// be all-zero.
    pub fn from_means(means: Vec<Vec<f64>>, present: Vec<bool>) -> Result<Self> {
        if means.len() != present.len() {
            return Err(Error::Shape(format!(
                "{} mean rows but {} presence flags",
                means.len(),
                present.len()
            )));
        }
        if means.is_empty() {
            return Err(Error::Argument("prototypes need at least one class".into()));
        }
        let dim = means[0].len();
        if dim == 0 {
            return Err(Error::Argument("prototype dimension must be positive".into()));
        }
        let class_count = means.len();
        let mut flat = Vec::with_capacity(class_count * dim);
        for (c, row) in means.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::Shape(format!(
                    "prototype {c} has dimension {}, expected {dim}",
                    row.len()
                )));
            }
            if !present[c] && row.iter().any(|&v| v != 0.0) {
                return Err(Error::Argument(format!(
                    "class {c} is absent but has a non-zero mean"
                )));
            }
            flat.extend_from_slice(row);
        }
        Ok(Self {
            means: flat,
            present,
            class_count,
            dim,
        })
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn present(&self, class: usize) -> bool {
        self.present[class]
    }

    pub fn present_mask(&self) -> &[bool] {
        &self.present
    }

    pub fn mean(&self, class: usize) -> &[f64] {
        &self.means[class * self.dim..(class + 1) * self.dim]
    }
}

/// Group all point annotations of the training set by class and average the
/// feature rows at the annotated frames.
///
/// `features[i]` and `annotations[i]` must describe the same sequence.
pub fn compute_prototypes(
    features: &[FeatureMatrix],
    annotations: &[PointAnnotationList],
    class_count: usize,
) -> Result<Prototypes> {
    if features.len() != annotations.len() {
        return Err(Error::Shape(format!(
            "{} feature sequences but {} annotation lists",
            features.len(),
            annotations.len()
        )));
    }
    if features.is_empty() {
        return Err(Error::Argument("no sequences to compute prototypes from".into()));
    }
    if class_count == 0 {
        return Err(Error::Argument("class count must be positive".into()));
    }
    let dim = features[0].cols();
    let mut acc: Vec<RunningMean> = (0..class_count).map(|_| RunningMean::new(dim)).collect();
    for (i, (feat, anns)) in features.iter().zip(annotations).enumerate() {
        if feat.cols() != dim {
            return Err(Error::Shape(format!(
                "sequence {i} has feature dimension {}, expected {dim}",
                feat.cols()
            )));
        }
        if anns.sequence_length() != feat.rows() {
            return Err(Error::Shape(format!(
                "sequence {i}: annotations describe {} frames but features have {}",
                anns.sequence_length(),
                feat.rows()
            )));
        }
        for p in anns.points() {
            if p.frame >= feat.rows() {
                return Err(Error::Index(format!(
                    "sequence {i}: annotated frame {} outside {} frames",
                    p.frame,
                    feat.rows()
                )));
            }
            if p.class >= class_count {
                return Err(Error::Index(format!(
                    "sequence {i}: class {} outside the {class_count} known classes",
                    p.class
                )));
            }
            acc[p.class].add(feat.row(p.frame));
        }
    }
    let present: Vec<bool> = acc.iter().map(|a| a.count() > 0).collect();
    let mut means = Vec::with_capacity(class_count * dim);
    for a in acc {
        means.extend_from_slice(a.mean());
    }
    Ok(Prototypes {
        means,
        present,
        class_count,
        dim,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labels::PointAnnotation;

    fn matrix(rows: Vec<Vec<f64>>) -> FeatureMatrix {
        FeatureMatrix::from_rows(rows).unwrap()
    }

    fn annotations(pairs: &[(usize, usize)], len: usize) -> PointAnnotationList {
        PointAnnotationList::new(
            pairs
                .iter()
                .map(|&(frame, class)| PointAnnotation { frame, class })
                .collect(),
            len,
        )
        .unwrap()
    }

    #[test]
    fn single_annotation_copies_the_row() {
        let f = matrix(vec![vec![1.0, 2.0], vec![3.0, 4.0]]);
        let a = annotations(&[(1, 0)], 2);
        let protos = compute_prototypes(&[f], &[a], 1).unwrap();
        assert_eq!(protos.mean(0), &[3.0, 4.0]);
        assert!(protos.present(0));
    }

    #[test]
    fn two_point_mean() {
        let f = matrix(vec![vec![1.0, 0.0], vec![3.0, 0.0]]);
        let a = annotations(&[(0, 0), (1, 0)], 2);
        let protos = compute_prototypes(&[f], &[a], 1).unwrap();
        assert_eq!(protos.mean(0), &[2.0, 0.0]);
    }

    #[test]
    fn unannotated_class_is_absent_and_zero() {
        let f = matrix(vec![vec![5.0], vec![6.0]]);
        let a = annotations(&[(0, 0), (1, 1)], 2);
        let protos = compute_prototypes(&[f], &[a], 3).unwrap();
        assert!(!protos.present(2));
        assert_eq!(protos.mean(2), &[0.0]);
    }

    #[test]
    fn rejects_class_outside_range() {
        let f = matrix(vec![vec![5.0]]);
        let a = annotations(&[(0, 7)], 1);
        assert!(matches!(
            compute_prototypes(&[f], &[a], 3),
            Err(Error::Index(_))
        ));
    }

    #[test]
    fn rejects_annotation_length_mismatch() {
        let f = matrix(vec![vec![5.0], vec![6.0]]);
        let a = annotations(&[(4, 0)], 9);
        assert!(matches!(
            compute_prototypes(&[f], &[a], 1),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn averages_across_sequences() {
        let f1 = matrix(vec![vec![0.0]]);
        let f2 = matrix(vec![vec![6.0]]);
        let a1 = annotations(&[(0, 0)], 1);
        let a2 = annotations(&[(0, 0)], 1);
        let protos = compute_prototypes(&[f1, f2], &[a1, a2], 1).unwrap();
        assert_eq!(protos.mean(0), &[3.0]);
    }
}
