//! Serialized forms of the metric report and the classifier model.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use pointseg_core::{MetricReport, PrototypeClassifier};

use crate::error::{CliError, Result};
use crate::formats;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct F1Entry {
    pub f1: f64,
    pub precision: f64,
    pub recall: f64,
}

/// The machine-readable report: accuracy, edit score, and per-threshold F1.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ReportJson {
    pub acc: f64,
    pub edit: f64,
    pub f1: BTreeMap<String, F1Entry>,
}

impl ReportJson {
    pub fn from_report(report: &MetricReport) -> Self {
        let f1 = report
            .f1
            .iter()
            .map(|(thr, s)| {
                (
                    format!("{thr}"),
                    F1Entry {
                        f1: s.f1,
                        precision: s.precision,
                        recall: s.recall,
                    },
                )
            })
            .collect();
        Self {
            acc: report.acc,
            edit: report.edit,
            f1,
        }
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization cannot fail");
        s.push('\n');
        s
    }
}

pub fn write_report(path: &Path, report: &MetricReport) -> Result<ReportJson> {
    let json = ReportJson::from_report(report);
    formats::write_atomic(path, &json.to_json_string())?;
    Ok(json)
}

/// One aligned table row per run, for terminal output.
pub fn format_table(report: &MetricReport) -> String {
    let mut header = format!("{:>8} {:>8}", "Acc", "Edit");
    let mut row = format!("{:>8.2} {:>8.2}", report.acc, report.edit);
    for (thr, s) in &report.f1 {
        header.push_str(&format!(" {:>9}", format!("F1@{thr}")));
        row.push_str(&format!(" {:>9.2}", s.f1));
    }
    format!("{header}\n{row}\n")
}

/// On-disk model: feature dimension, class count, presence mask, and the
/// per-class mean rows.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelFile {
    pub feature_dim: usize,
    pub class_count: usize,
    pub present: Vec<bool>,
    pub class_means: Vec<Vec<f64>>,
}

impl ModelFile {
    pub fn from_classifier(model: &PrototypeClassifier) -> Self {
        Self {
            feature_dim: model.feature_dim(),
            class_count: model.class_count(),
            present: model.present_mask().to_vec(),
            class_means: (0..model.class_count())
                .map(|c| model.mean(c).to_vec())
                .collect(),
        }
    }

    pub fn into_classifier(self) -> Result<PrototypeClassifier> {
        if self.class_means.len() != self.class_count || self.present.len() != self.class_count {
            return Err(CliError::Argument(format!(
                "model file declares {} classes but carries {} means and {} flags",
                self.class_count,
                self.class_means.len(),
                self.present.len()
            )));
        }
        PrototypeClassifier::from_parts(self.feature_dim, self.class_means, self.present)
            .map_err(CliError::from)
    }
}

pub fn write_model(path: &Path, model: &PrototypeClassifier) -> Result<()> {
    let file = ModelFile::from_classifier(model);
    let mut json = serde_json::to_string_pretty(&file).expect("model serialization cannot fail");
    json.push('\n');
    formats::write_atomic(path, &json)
}

pub fn read_model(path: &Path) -> Result<PrototypeClassifier> {
    let text = formats::read_to_string(path)?;
    let file: ModelFile = serde_json::from_str(&text).map_err(|e| CliError::ParseFile {
        path: path.to_path_buf(),
        line: 1,
        message: e.to_string(),
    })?;
    file.into_classifier()
}

#[cfg(test)]
mod tests {
    use super::*;
    use pointseg_core::F1Score;
    use tempfile::tempdir;

    #[test]
    fn report_keys_are_threshold_strings() {
        let report = MetricReport {
            acc: 90.0,
            edit: 80.0,
            f1: vec![
                (0.1, F1Score { f1: 70.0, precision: 60.0, recall: 85.0 }),
                (0.5, F1Score { f1: 50.0, precision: 40.0, recall: 65.0 }),
            ],
        };
        let json = ReportJson::from_report(&report);
        assert_eq!(json.f1.keys().cloned().collect::<Vec<_>>(), vec!["0.1", "0.5"]);
        let text = json.to_json_string();
        let back: ReportJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back, json);
    }

    #[test]
    fn model_file_round_trips() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("model.json");
        let model = PrototypeClassifier::from_parts(
            2,
            vec![vec![0.25, -1.5], vec![0.0, 0.0]],
            vec![true, false],
        )
        .unwrap();
        write_model(&path, &model).unwrap();
        let back = read_model(&path).unwrap();
        assert_eq!(back, model);
        let bytes = std::fs::read(&path).unwrap();
        write_model(&path, &back).unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), bytes);
    }
}
