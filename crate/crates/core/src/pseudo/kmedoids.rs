//! Temporally constrained k-medoids clustering.
//!
//! One cluster per annotation, medoids initialized at the annotated frames.
//! Clusters are contiguous frame runs, so the assignment step reduces to
//! choosing one boundary between each pair of adjacent medoids. Unlike the
//! energy split, frames are compared against the medoid feature rows
//! themselves rather than against running means.

use crate::error::Result;
use crate::features::{euclidean, FeatureMatrix};
use crate::labels::{FrameLabels, PointAnnotationList};

use super::{check_points, GeneratorConfig};

/// For each adjacent medoid pair, pick the boundary (last frame of the left
/// cluster) minimizing the summed distance of every frame between the
/// medoids to its side's medoid row. Ties resolve to the smallest boundary.
fn boundaries_for(features: &FeatureMatrix, medoids: &[usize]) -> Vec<usize> {
    let mut bounds = Vec::with_capacity(medoids.len().saturating_sub(1));
    for pair in medoids.windows(2) {
        let (ml, mr) = (pair[0], pair[1]);
        let left = features.row(ml);
        let right = features.row(mr);
        // prefix sums of the two per-frame distance profiles over [ml, mr]
        let span = mr - ml + 1;
        let mut to_left = Vec::with_capacity(span);
        let mut to_right = Vec::with_capacity(span);
        let mut acc_l = 0.0;
        let mut acc_r = 0.0;
        for t in ml..=mr {
            acc_l += euclidean(features.row(t), left);
            to_left.push(acc_l);
            acc_r += euclidean(features.row(t), right);
            to_right.push(acc_r);
        }
        let total_r = acc_r;
        let mut best = ml;
        let mut best_cost = f64::INFINITY;
        for b in ml..mr {
            let cost = to_left[b - ml] + (total_r - to_right[b - ml]);
            if cost < best_cost {
                best_cost = cost;
                best = b;
            }
        }
        bounds.push(best);
    }
    bounds
}

/// Segment spans implied by the boundary vector: segment k ends at
/// `bounds[k]` and the last segment runs to the end of the sequence.
fn segment_spans(bounds: &[usize], total_frames: usize) -> Vec<(usize, usize)> {
    let mut spans = Vec::with_capacity(bounds.len() + 1);
    let mut start = 0;
    for &b in bounds {
        spans.push((start, b));
        start = b + 1;
    }
    spans.push((start, total_frames - 1));
    spans
}

/// Move each medoid to the frame of its segment with the smallest total
/// distance to all frames of that segment; ties to the smallest frame.
fn update_medoids(features: &FeatureMatrix, spans: &[(usize, usize)]) -> Vec<usize> {
    spans
        .iter()
        .map(|&(start, end)| {
            let mut best = start;
            let mut best_cost = f64::INFINITY;
            for cand in start..=end {
                let row = features.row(cand);
                let mut cost = 0.0;
                for u in start..=end {
                    cost += euclidean(row, features.row(u));
                }
                if cost < best_cost {
                    best_cost = cost;
                    best = cand;
                }
            }
            best
        })
        .collect()
}

/// Dense labels by constrained k-medoids. Iterates boundary assignment and
/// medoid updates until the boundary vector repeats or the iteration cap is
/// reached, then labels segment k with the class of the k-th annotation.
pub fn generate_kmedoids_labels(
    features: &FeatureMatrix,
    points: &PointAnnotationList,
    cfg: &GeneratorConfig,
) -> Result<FrameLabels> {
    check_points(features, points)?;
    cfg.validate()?;
    let total = features.rows();
    let medoids: Vec<usize> = points.points().iter().map(|p| p.frame).collect();

    let mut bounds = boundaries_for(features, &medoids);
    for _ in 1..cfg.max_kmedoids_iters {
        let spans = segment_spans(&bounds, total);
        let medoids = update_medoids(features, &spans);
        let next = boundaries_for(features, &medoids);
        if next == bounds {
            break;
        }
        bounds = next;
    }

    let spans = segment_spans(&bounds, total);
    let mut labels = vec![None; total];
    for (span, point) in spans.iter().zip(points.points()) {
        for slot in labels.iter_mut().take(span.1 + 1).skip(span.0) {
            *slot = Some(point.class);
        }
    }
    FrameLabels::new(labels)
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

    fn cfg(iters: usize) -> GeneratorConfig {
        GeneratorConfig {
            max_kmedoids_iters: iters,
            ..GeneratorConfig::default()
        }
    }

    #[test]
    fn single_point_labels_whole_sequence() {
        let f = matrix_1d(&[1.0, 2.0, 3.0]);
        let p = points(&[(1, 6)], 3);
        let labels = generate_kmedoids_labels(&f, &p, &cfg(1)).unwrap();
        assert_eq!(labels, FrameLabels::dense(vec![6; 3]).unwrap());
    }

    #[test]
    fn step_signal_recovers_the_step() {
        let f = matrix_1d(&[0.0, 0.0, 0.0, 10.0, 10.0, 10.0]);
        let p = points(&[(1, 0), (4, 1)], 6);
        let labels = generate_kmedoids_labels(&f, &p, &GeneratorConfig::default()).unwrap();
        assert_eq!(labels, FrameLabels::dense(vec![0, 0, 0, 1, 1, 1]).unwrap());
    }

    #[test]
    fn step_signal_matches_exhaustive_search() {
        // check both stages against a brute-force scan on one instance
        let values = [0.0, 0.0, 0.0, 10.0, 10.0, 10.0];
        let f = matrix_1d(&values);
        let (ml, mr) = (1usize, 4usize);
        let mut best = (usize::MAX, f64::INFINITY);
        for b in ml..mr {
            let mut cost = 0.0;
            for t in ml..=b {
                cost += (values[t] - values[ml]).abs();
            }
            for t in b + 1..=mr {
                cost += (values[t] - values[mr]).abs();
            }
            if cost < best.1 {
                best = (b, cost);
            }
        }
        assert_eq!(boundaries_for(&f, &[ml, mr]), vec![best.0]);

        // medoid update over the left segment [0, 2]
        let mut medoid = (usize::MAX, f64::INFINITY);
        for cand in 0..=2usize {
            let cost: f64 = (0..=2).map(|u| (values[cand] - values[u]).abs()).sum();
            if cost < medoid.1 {
                medoid = (cand, cost);
            }
        }
        assert_eq!(update_medoids(&f, &[(0, 2)]), vec![medoid.0]);
    }

    #[test]
    fn constant_features_tie_to_smallest_boundary() {
        let f = matrix_1d(&[4.2; 8]);
        let p = points(&[(0, 0), (5, 1)], 8);
        let labels = generate_kmedoids_labels(&f, &p, &GeneratorConfig::default()).unwrap();
        assert_eq!(
            labels,
            FrameLabels::dense(vec![0, 1, 1, 1, 1, 1, 1, 1]).unwrap()
        );
    }

    #[test]
    fn one_iteration_is_the_initial_assignment() {
        let f = matrix_1d(&[0.0, 3.0, 1.0, 9.0, 8.0, 2.0, 7.0]);
        let p = points(&[(0, 0), (3, 1), (6, 2)], 7);
        let one = generate_kmedoids_labels(&f, &p, &cfg(1)).unwrap();
        // recompute the one-pass assignment directly
        let medoids = vec![0, 3, 6];
        let bounds = boundaries_for(&f, &medoids);
        let spans = segment_spans(&bounds, 7);
        let mut expect = vec![None; 7];
        for (span, point) in spans.iter().zip(p.points()) {
            for slot in expect.iter_mut().take(span.1 + 1).skip(span.0) {
                *slot = Some(point.class);
            }
        }
        assert_eq!(one, FrameLabels::new(expect).unwrap());
    }
}
