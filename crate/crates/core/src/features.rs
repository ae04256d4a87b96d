//! Per-frame feature matrices and feature-space operations.

use crate::error::{Error, Result};

/// Cutoff below which a dimension's standard deviation is treated as zero
/// during fusion; such dimensions are zeroed instead of divided.
pub const STDEV_EPSILON: f64 = 1e-8;

/// A T x D matrix with one feature row per frame. All values are finite.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    data: Vec<f64>,
    rows: usize,
    cols: usize,
}

impl FeatureMatrix {
    pub fn new(data: Vec<f64>, rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Argument(format!(
                "feature matrix must have at least one row and one column; got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "feature data has {} values, expected {rows}x{cols} = {}",
                data.len(),
                rows * cols
            )));
        }
        if let Some(i) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!(
                "feature value at row {}, column {}",
                i / cols,
                i % cols
            )));
        }
        Ok(Self { data, rows, cols })
    }

    /// Build from row vectors, which must all share one length.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        let d = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(n * d);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != d {
                return Err(Error::Shape(format!(
                    "row {i} has {} values, expected {d}",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Self::new(data, n, d)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, t: usize) -> &[f64] {
        &self.data[t * self.cols..(t + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.cols)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}

/// Euclidean distance between two equal-length vectors.
pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x - y;
            d * d
        })
        .sum::<f64>()
        .sqrt()
}

/// Incremental mean of vectors. The update `m += (x - m) / k` keeps the mean
/// bit-exact when every input is identical, which the generators rely on for
/// deterministic tie handling on degenerate data.
#[derive(Debug, Clone)]
pub(crate) struct RunningMean {
    mean: Vec<f64>,
    count: usize,
}

impl RunningMean {
    pub fn new(dim: usize) -> Self {
        Self {
            mean: vec![0.0; dim],
            count: 0,
        }
    }

    pub fn add(&mut self, row: &[f64]) {
        debug_assert_eq!(row.len(), self.mean.len());
        self.count += 1;
        let k = self.count as f64;
        for (m, &x) in self.mean.iter_mut().zip(row) {
            *m += (x - *m) / k;
        }
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn into_mean(self) -> Vec<f64> {
        self.mean
    }
}

/// Z-normalize each input per dimension (mean 0, standard deviation 1 over
/// the frames; degenerate dimensions become all-zero) and concatenate the
/// two along the feature axis.
///
/// Normalizing first keeps a higher-dimensional input from dominating
/// Euclidean distances in the fused space.
pub fn fuse_inputs(raw: &FeatureMatrix, feat: &FeatureMatrix) -> Result<FeatureMatrix> {
    if raw.rows() != feat.rows() {
        return Err(Error::Shape(format!(
            "cannot fuse inputs with {} and {} frames",
            raw.rows(),
            feat.rows()
        )));
    }
    let t = raw.rows();
    let cols = raw.cols() + feat.cols();
    let mut data = vec![0.0; t * cols];
    write_znormed(raw, &mut data, cols, 0);
    write_znormed(feat, &mut data, cols, raw.cols());
    FeatureMatrix::new(data, t, cols)
}

fn write_znormed(m: &FeatureMatrix, out: &mut [f64], stride: usize, offset: usize) {
    for d in 0..m.cols() {
        // Welford pass: mean and population variance for this dimension
        let mut mean = 0.0;
        let mut m2 = 0.0;
        for t in 0..m.rows() {
            let x = m.row(t)[d];
            let delta = x - mean;
            mean += delta / (t + 1) as f64;
            m2 += delta * (x - mean);
        }
        let std = (m2 / m.rows() as f64).sqrt();
        for t in 0..m.rows() {
            let z = if std < STDEV_EPSILON {
                0.0
            } else {
                (m.row(t)[d] - mean) / std
            };
            out[t * stride + offset + d] = z;
        }
    }
}

/// Centered moving average over frames, truncated at the edges. A cheap
/// stand-in feature embedding for datasets that ship no precomputed features.
pub fn box_smooth(m: &FeatureMatrix, window: usize) -> Result<FeatureMatrix> {
    if window == 0 || window.is_multiple_of(2) {
        return Err(Error::Argument(format!(
            "smoothing window must be odd and positive, got {window}"
        )));
    }
    let half = window / 2;
    let t = m.rows();
    let mut data = vec![0.0; t * m.cols()];
    for i in 0..t {
        let lo = i.saturating_sub(half);
        let hi = (i + half).min(t - 1);
        let span = (hi - lo + 1) as f64;
        for d in 0..m.cols() {
            let sum: f64 = (lo..=hi).map(|u| m.row(u)[d]).sum();
            data[i * m.cols() + d] = sum / span;
        }
    }
    FeatureMatrix::new(data, t, m.cols())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant_matrix(value: f64, rows: usize, cols: usize) -> FeatureMatrix {
        FeatureMatrix::new(vec![value; rows * cols], rows, cols).unwrap()
    }

    #[test]
    fn rejects_non_finite() {
        assert!(FeatureMatrix::new(vec![0.0, f64::NAN], 1, 2).is_err());
        assert!(FeatureMatrix::new(vec![0.0, f64::INFINITY], 2, 1).is_err());
    }

    #[test]
    fn fuse_constant_inputs_is_all_zero() {
        let raw = constant_matrix(3.5, 4, 2);
        let feat = constant_matrix(-1.0, 4, 3);
        let fused = fuse_inputs(&raw, &feat).unwrap();
        assert_eq!(fused.cols(), 5);
        assert!(fused.as_slice().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn fuse_concatenates_widths() {
        let raw = constant_matrix(0.0, 6, 4);
        let feat = constant_matrix(0.0, 6, 8);
        let fused = fuse_inputs(&raw, &feat).unwrap();
        assert_eq!(fused.rows(), 6);
        assert_eq!(fused.cols(), 12);
    }

    #[test]
    fn fuse_znormalizes_by_hand_example() {
        let raw = FeatureMatrix::new(vec![0.0, 2.0], 2, 1).unwrap();
        let feat = FeatureMatrix::new(vec![10.0, 30.0], 2, 1).unwrap();
        let fused = fuse_inputs(&raw, &feat).unwrap();
        assert_eq!(fused.row(0), &[-1.0, -1.0]);
        assert_eq!(fused.row(1), &[1.0, 1.0]);
    }

    #[test]
    fn fuse_rejects_mismatched_frame_counts() {
        let raw = constant_matrix(0.0, 3, 2);
        let feat = constant_matrix(0.0, 4, 2);
        assert!(matches!(fuse_inputs(&raw, &feat), Err(Error::Shape(_))));
    }

    #[test]
    fn running_mean_is_exact_on_identical_rows() {
        let v = [0.123_456_789_012_345_7, -9.87, 3.0];
        let mut acc = RunningMean::new(3);
        for _ in 0..17 {
            acc.add(&v);
        }
        assert_eq!(acc.mean(), &v);
    }

    #[test]
    fn box_smooth_rejects_even_window() {
        let m = constant_matrix(1.0, 3, 1);
        assert!(box_smooth(&m, 2).is_err());
    }

    #[test]
    fn box_smooth_window_one_is_identity() {
        let m = FeatureMatrix::new(vec![1.0, 2.0, 3.0], 3, 1).unwrap();
        assert_eq!(box_smooth(&m, 1).unwrap(), m);
    }
}
