//! Frame-wise label sequences and sparse point annotations.

use crate::error::{Error, Result};

/// A length-T per-frame class sequence. `None` marks an unlabeled frame,
/// written as `-1` in the on-disk format.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameLabels {
    labels: Vec<Option<usize>>,
}

impl FrameLabels {
    /// Build from per-frame entries; the sequence must be non-empty.
    pub fn new(labels: Vec<Option<usize>>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::Argument("label sequence must be non-empty".into()));
        }
        Ok(Self { labels })
    }

    /// Build a fully labeled sequence.
    pub fn dense(labels: Vec<usize>) -> Result<Self> {
        Self::new(labels.into_iter().map(Some).collect())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn get(&self, frame: usize) -> Option<usize> {
        self.labels[frame]
    }

    pub fn as_slice(&self) -> &[Option<usize>] {
        &self.labels
    }

    /// True when no frame is unlabeled.
    pub fn is_dense(&self) -> bool {
        self.labels.iter().all(|l| l.is_some())
    }

    pub fn unlabeled_count(&self) -> usize {
        self.labels.iter().filter(|l| l.is_none()).count()
    }
}

/// One sparse annotation: a frame index and the class observed there.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PointAnnotation {
    pub frame: usize,
    pub class: usize,
}

/// Sparse point annotations for one sequence, with strictly increasing
/// frames and at least one point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointAnnotationList {
    points: Vec<PointAnnotation>,
    sequence_length: usize,
}

impl PointAnnotationList {
    pub fn new(points: Vec<PointAnnotation>, sequence_length: usize) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Argument(
                "a sequence needs at least one point annotation".into(),
            ));
        }
        for pair in points.windows(2) {
            if pair[1].frame <= pair[0].frame {
                return Err(Error::Argument(format!(
                    "annotation frames must be strictly increasing; got {} then {}",
                    pair[0].frame, pair[1].frame
                )));
            }
        }
        if let Some(last) = points.last() {
            if last.frame >= sequence_length {
                return Err(Error::Index(format!(
                    "annotation frame {} outside sequence of length {}",
                    last.frame, sequence_length
                )));
            }
        }
        Ok(Self {
            points,
            sequence_length,
        })
    }

    pub fn points(&self) -> &[PointAnnotation] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn sequence_length(&self) -> usize {
        self.sequence_length
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_labels() {
        assert!(FrameLabels::new(vec![]).is_err());
    }

    #[test]
    fn density_checks() {
        let l = FrameLabels::new(vec![Some(1), None, Some(2)]).unwrap();
        assert!(!l.is_dense());
        assert_eq!(l.unlabeled_count(), 1);
        let d = FrameLabels::dense(vec![0, 0, 1]).unwrap();
        assert!(d.is_dense());
    }

    #[test]
    fn rejects_unordered_points() {
        let pts = vec![
            PointAnnotation { frame: 4, class: 0 },
            PointAnnotation { frame: 4, class: 1 },
        ];
        assert!(PointAnnotationList::new(pts, 10).is_err());
    }

    #[test]
    fn rejects_out_of_range_points() {
        let pts = vec![PointAnnotation { frame: 10, class: 0 }];
        assert!(PointAnnotationList::new(pts, 10).is_err());
    }

    #[test]
    fn rejects_empty_points() {
        assert!(PointAnnotationList::new(vec![], 5).is_err());
    }
}
