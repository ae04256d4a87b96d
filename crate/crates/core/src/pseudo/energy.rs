//! Transition search by two-cluster energy minimization.

use crate::error::{Error, Result};
use crate::features::{euclidean, FeatureMatrix, RunningMean};
use crate::labels::{FrameLabels, PointAnnotationList};

use super::{assemble_labels, check_points};

/// Mean feature row over the inclusive frame range `lo..=hi`.
///
/// Uses an incremental mean so that identical rows yield their exact common
/// value; the energy of a perfect split is then exactly zero and equal-cost
/// splits tie bit-for-bit.
fn mean_of(features: &FeatureMatrix, lo: usize, hi: usize) -> Vec<f64> {
    let mut acc = RunningMean::new(features.cols());
    for t in lo..=hi {
        acc.add(features.row(t));
    }
    acc.into_mean()
}

/// Find the split of `[start, stop]` into two runs that minimizes the summed
/// Euclidean distance of each frame to its run's mean, the means being
/// recomputed for every candidate split.
///
/// Returns the last frame of the left run, in `[start, stop)`. Requires
/// `start < stop <= T - 1`. Equal-energy splits resolve to the smallest
/// index.
pub fn energy_boundary(features: &FeatureMatrix, start: usize, stop: usize) -> Result<usize> {
    let t = features.rows();
    if stop >= t {
        return Err(Error::Index(format!(
            "interval end {stop} outside sequence of {t} frames"
        )));
    }
    if start >= stop {
        return Err(Error::Argument(format!(
            "interval [{start}, {stop}] admits no split"
        )));
    }
    let mut best = start;
    let mut best_energy = f64::INFINITY;
    for cand in start..stop {
        let left = mean_of(features, start, cand);
        let right = mean_of(features, cand + 1, stop);
        let mut energy = 0.0;
        for u in start..=cand {
            energy += euclidean(features.row(u), &left);
        }
        for u in cand + 1..=stop {
            energy += euclidean(features.row(u), &right);
        }
        if energy < best_energy {
            best_energy = energy;
            best = cand;
        }
    }
    Ok(best)
}

/// Dense labels from point annotations, splitting every adjacent
/// distinct-class pair at its minimum-energy transition.
pub fn generate_energy_labels(
    features: &FeatureMatrix,
    points: &PointAnnotationList,
) -> Result<FrameLabels> {
    check_points(features, points)?;
    assemble_labels(features.rows(), points, |a, b| {
        energy_boundary(features, a.frame, b.frame)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labels::PointAnnotation;

    fn matrix_1d(values: &[f64]) -> FeatureMatrix {
        FeatureMatrix::new(values.to_vec(), values.len(), 1).unwrap()
    }

    fn points(pairs: &[(usize, usize)], len: usize) -> PointAnnotationList {
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
    fn single_candidate_interval() {
        let f = matrix_1d(&[0.0, 1.0, 2.0]);
        assert_eq!(energy_boundary(&f, 1, 2).unwrap(), 1);
    }

    #[test]
    fn step_signal_splits_at_the_step() {
        let f = matrix_1d(&[0.0, 0.0, 0.0, 10.0, 10.0]);
        assert_eq!(energy_boundary(&f, 0, 4).unwrap(), 2);
    }

    #[test]
    fn constant_signal_ties_to_smallest_split() {
        // a messy constant exercises the exact-mean property
        let f = matrix_1d(&[0.3; 6]);
        assert_eq!(energy_boundary(&f, 0, 5).unwrap(), 0);
    }

    #[test]
    fn rejects_degenerate_interval() {
        let f = matrix_1d(&[0.0, 1.0]);
        assert!(energy_boundary(&f, 1, 1).is_err());
        assert!(energy_boundary(&f, 1, 0).is_err());
        assert!(energy_boundary(&f, 0, 2).is_err());
    }

    #[test]
    fn single_point_labels_everything() {
        let f = matrix_1d(&[0.0; 6]);
        let p = points(&[(3, 7)], 6);
        let labels = generate_energy_labels(&f, &p).unwrap();
        assert_eq!(labels, FrameLabels::dense(vec![7; 6]).unwrap());
    }

    #[test]
    fn step_signal_labels_by_hand() {
        let f = matrix_1d(&[0.0, 0.0, 0.0, 10.0, 10.0]);
        let p = points(&[(0, 1), (4, 2)], 5);
        let labels = generate_energy_labels(&f, &p).unwrap();
        assert_eq!(labels, FrameLabels::dense(vec![1, 1, 1, 2, 2]).unwrap());
    }

    #[test]
    fn same_class_pair_fills_without_search() {
        // non-constant features must not matter for a same-class pair
        let f = matrix_1d(&[5.0, -2.0, 9.0, 0.0, 1.0]);
        let p = points(&[(1, 4), (3, 4)], 5);
        let labels = generate_energy_labels(&f, &p).unwrap();
        assert_eq!(labels, FrameLabels::dense(vec![4; 5]).unwrap());
    }
}
