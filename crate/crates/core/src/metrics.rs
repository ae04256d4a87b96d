//! Evaluation metrics for temporal segmentation.
//!
//! Three metrics are provided. Frame accuracy is the percentage of correctly
//! classified frames. The edit score compares the ordered segment-class
//! sequences of prediction and ground truth through a normalized Levenshtein
//! distance, penalizing over-segmentation that frame accuracy cannot see.
//! The segmental F1 at a tIoU threshold greedily matches predicted segments
//! to same-class ground-truth segments: each prediction claims its
//! best-overlapping still-unmatched ground-truth segment and counts as a
//! true positive when that overlap reaches the threshold.
//!
//! Dataset-level scores average per-video accuracy and edit scores, and pool
//! true/false positive and false negative counts across videos for F1
//! (per-video F1 averaging is available as an option).

use crate::error::{Error, Result};
use crate::labels::FrameLabels;

/// A maximal run of one class, inclusive on both ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Segment {
    pub start: usize,
    pub end: usize,
    pub class: usize,
}

impl Segment {
    pub fn len(&self) -> usize {
        self.end - self.start + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Precision, recall, and their harmonic mean, all in percent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct F1Score {
    pub f1: f64,
    pub precision: f64,
    pub recall: f64,
}

/// Bundled scores; `f1` holds one entry per tIoU threshold, ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricReport {
    pub acc: f64,
    pub edit: f64,
    pub f1: Vec<(f64, F1Score)>,
}

/// Options for dataset-level evaluation.
#[derive(Debug, Clone)]
pub struct EvalOptions {
    /// tIoU thresholds, each strictly inside (0, 1).
    pub thresholds: Vec<f64>,
    /// Classes excluded from scoring: their ground-truth frames are skipped
    /// by accuracy and their segments are dropped from both sides of the
    /// segment metrics.
    pub ignore_classes: Vec<usize>,
    /// Average per-video F1 instead of pooling counts across videos.
    pub per_video_f1: bool,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            thresholds: vec![0.1, 0.25, 0.5],
            ignore_classes: Vec::new(),
            per_video_f1: false,
        }
    }
}

/// Decompose a dense label sequence into its maximal same-class runs.
pub fn extract_segments(labels: &FrameLabels) -> Result<Vec<Segment>> {
    let mut segments = Vec::new();
    let mut start = 0;
    let mut current = match labels.get(0) {
        Some(c) => c,
        None => return Err(Error::Argument("labels contain unlabeled frames".into())),
    };
    for t in 1..labels.len() {
        let class = labels
            .get(t)
            .ok_or_else(|| Error::Argument("labels contain unlabeled frames".into()))?;
        if class != current {
            segments.push(Segment {
                start,
                end: t - 1,
                class: current,
            });
            start = t;
            current = class;
        }
    }
    segments.push(Segment {
        start,
        end: labels.len() - 1,
        class: current,
    });
    Ok(segments)
}

fn check_pair(pred: &FrameLabels, gt: &FrameLabels) -> Result<()> {
    if pred.len() != gt.len() {
        return Err(Error::Shape(format!(
            "prediction has {} frames but ground truth has {}",
            pred.len(),
            gt.len()
        )));
    }
    if !pred.is_dense() || !gt.is_dense() {
        return Err(Error::Argument(
            "metrics require dense labels on both sides".into(),
        ));
    }
    Ok(())
}

/// Percentage of frames whose predicted class equals the ground truth.
pub fn frame_accuracy(pred: &FrameLabels, gt: &FrameLabels) -> Result<f64> {
    check_pair(pred, gt)?;
    let correct = pred
        .as_slice()
        .iter()
        .zip(gt.as_slice())
        .filter(|(p, g)| p == g)
        .count();
    Ok(100.0 * correct as f64 / pred.len() as f64)
}

/// Levenshtein distance between two class sequences, two-row dynamic program.
fn levenshtein(xs: &[usize], ys: &[usize]) -> usize {
    if xs.is_empty() {
        return ys.len();
    }
    let mut row: Vec<usize> = (0..=ys.len()).collect();
    for (i, &x) in xs.iter().enumerate() {
        let mut diag = row[0];
        row[0] = i + 1;
        for (j, &y) in ys.iter().enumerate() {
            let above = row[j + 1];
            let sub = diag + usize::from(x != y);
            row[j + 1] = sub.min(above + 1).min(row[j] + 1);
            diag = above;
        }
    }
    row[ys.len()]
}

fn edit_score_from_classes(xs: &[usize], ys: &[usize]) -> f64 {
    let max = xs.len().max(ys.len());
    if max == 0 {
        return 100.0;
    }
    let e = levenshtein(xs, ys);
    100.0 * (1.0 - e as f64 / max as f64)
}

/// Edit score: 100 times one minus the Levenshtein distance between the two
/// segment-class sequences, normalized by the longer sequence.
pub fn edit_score(pred: &FrameLabels, gt: &FrameLabels) -> Result<f64> {
    check_pair(pred, gt)?;
    let xs: Vec<usize> = extract_segments(pred)?.iter().map(|s| s.class).collect();
    let ys: Vec<usize> = extract_segments(gt)?.iter().map(|s| s.class).collect();
    Ok(edit_score_from_classes(&xs, &ys))
}

/// Temporal IoU of two segments, in frame counts.
fn tiou(a: &Segment, b: &Segment) -> f64 {
    let lo = a.start.max(b.start);
    let hi = a.end.min(b.end);
    if hi < lo {
        return 0.0;
    }
    let inter = (hi - lo + 1) as f64;
    let union = (a.len() + b.len()) as f64 - inter;
    inter / union
}

/// Greedy first-match counting. Each prediction, in temporal order, claims
/// its best-overlapping unmatched ground-truth segment of the same class and
/// is a true positive when that overlap is at least the threshold; otherwise
/// it is a false positive. Unclaimed ground-truth segments are false
/// negatives.
fn match_counts(pred: &[Segment], gt: &[Segment], threshold: f64) -> (usize, usize, usize) {
    let mut used = vec![false; gt.len()];
    let mut tp = 0;
    let mut fp = 0;
    for p in pred {
        let mut best: Option<(usize, f64)> = None;
        for (i, g) in gt.iter().enumerate() {
            if used[i] || g.class != p.class {
                continue;
            }
            let overlap = tiou(p, g);
            if best.is_none_or(|(_, b)| overlap > b) {
                best = Some((i, overlap));
            }
        }
        match best {
            Some((i, overlap)) if overlap >= threshold => {
                used[i] = true;
                tp += 1;
            }
            _ => fp += 1,
        }
    }
    let fn_count = used.iter().filter(|u| !**u).count();
    (tp, fp, fn_count)
}

fn score_from_counts(tp: usize, fp: usize, fn_count: usize) -> F1Score {
    let precision = if tp + fp == 0 {
        0.0
    } else {
        100.0 * tp as f64 / (tp + fp) as f64
    };
    let recall = if tp + fn_count == 0 {
        0.0
    } else {
        100.0 * tp as f64 / (tp + fn_count) as f64
    };
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    F1Score {
        f1,
        precision,
        recall,
    }
}

fn check_threshold(threshold: f64) -> Result<()> {
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(Error::Argument(format!(
            "tIoU threshold must lie strictly between 0 and 1, got {threshold}"
        )));
    }
    Ok(())
}

/// Segmental F1 at one tIoU threshold.
pub fn f1_at_tiou(pred: &FrameLabels, gt: &FrameLabels, threshold: f64) -> Result<F1Score> {
    check_pair(pred, gt)?;
    check_threshold(threshold)?;
    let ps = extract_segments(pred)?;
    let gs = extract_segments(gt)?;
    let (tp, fp, fn_count) = match_counts(&ps, &gs, threshold);
    Ok(score_from_counts(tp, fp, fn_count))
}

/// All metrics for a single video at the given thresholds.
pub fn evaluate(pred: &FrameLabels, gt: &FrameLabels, thresholds: &[f64]) -> Result<MetricReport> {
    evaluate_dataset(
        &[(pred, gt)],
        &EvalOptions {
            thresholds: thresholds.to_vec(),
            ..EvalOptions::default()
        },
    )
}

/// Dataset-level metrics over (prediction, ground truth) pairs.
pub fn evaluate_dataset(
    pairs: &[(&FrameLabels, &FrameLabels)],
    opts: &EvalOptions,
) -> Result<MetricReport> {
    if pairs.is_empty() {
        return Err(Error::Argument("no videos to evaluate".into()));
    }
    for &t in &opts.thresholds {
        check_threshold(t)?;
    }
    let ignored = |class: usize| opts.ignore_classes.contains(&class);

    let mut acc_sum = 0.0;
    let mut edit_sum = 0.0;
    let mut pooled: Vec<(usize, usize, usize)> = vec![(0, 0, 0); opts.thresholds.len()];
    let mut per_video: Vec<Vec<F1Score>> = vec![Vec::new(); opts.thresholds.len()];

    for (pred, gt) in pairs {
        check_pair(pred, gt)?;

        let mut counted = 0usize;
        let mut correct = 0usize;
        for (p, g) in pred.as_slice().iter().zip(gt.as_slice()) {
            let g = g.expect("checked dense");
            if ignored(g) {
                continue;
            }
            counted += 1;
            if *p == Some(g) {
                correct += 1;
            }
        }
        // a video with nothing to score counts as vacuously perfect
        acc_sum += if counted == 0 {
            100.0
        } else {
            100.0 * correct as f64 / counted as f64
        };

        let ps: Vec<Segment> = extract_segments(pred)?
            .into_iter()
            .filter(|s| !ignored(s.class))
            .collect();
        let gs: Vec<Segment> = extract_segments(gt)?
            .into_iter()
            .filter(|s| !ignored(s.class))
            .collect();
        let xs: Vec<usize> = ps.iter().map(|s| s.class).collect();
        let ys: Vec<usize> = gs.iter().map(|s| s.class).collect();
        edit_sum += edit_score_from_classes(&xs, &ys);

        for (k, &thr) in opts.thresholds.iter().enumerate() {
            let (tp, fp, fn_count) = match_counts(&ps, &gs, thr);
            pooled[k].0 += tp;
            pooled[k].1 += fp;
            pooled[k].2 += fn_count;
            if opts.per_video_f1 {
                per_video[k].push(score_from_counts(tp, fp, fn_count));
            }
        }
    }

    let n = pairs.len() as f64;
    let f1 = opts
        .thresholds
        .iter()
        .enumerate()
        .map(|(k, &thr)| {
            let score = if opts.per_video_f1 {
                let m = per_video[k].len() as f64;
                F1Score {
                    f1: per_video[k].iter().map(|s| s.f1).sum::<f64>() / m,
                    precision: per_video[k].iter().map(|s| s.precision).sum::<f64>() / m,
                    recall: per_video[k].iter().map(|s| s.recall).sum::<f64>() / m,
                }
            } else {
                let (tp, fp, fn_count) = pooled[k];
                score_from_counts(tp, fp, fn_count)
            };
            (thr, score)
        })
        .collect();

    Ok(MetricReport {
        acc: acc_sum / n,
        edit: edit_sum / n,
        f1,
    })
}
