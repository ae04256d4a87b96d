//! The experiment pipeline: sample points, resolve generator inputs,
//! generate and integrate pseudo-labels, fit the frame classifier, predict
//! the test split, and score it.
//!
//! Per-video work runs on a worker pool; every aggregation (prototypes,
//! classifier fitting, pooled metrics) is a sequential reduce in manifest
//! order, so a run is fully deterministic for a given manifest and config.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use pointseg_core::{
    derive_bone, derive_motion, evaluate_dataset, flatten, fuse_inputs, generate_energy_labels,
    generate_kmedoids_labels, generate_prototype_labels, integrate, simulate_points, smooth,
    EvalOptions, FeatureMatrix, FrameLabels, GeneratorConfig, MetricReport, PointAnnotationList,
    Prototypes, SkeletonTopology,
};

use crate::config::{GeneratorKind, InputRoute, Modality, PipelineConfig, SourceKind};
use crate::error::{CliError, Result};
use crate::formats;
use crate::manifest::{DatasetManifest, VideoEntry};
use crate::report::{self, ReportJson};

/// Raw modality matrix for one video, from `raw_paths` when present or
/// derived from the skeleton otherwise.
fn load_raw(
    manifest: &DatasetManifest,
    video: &VideoEntry,
    modality: Modality,
    topo: Option<&SkeletonTopology>,
) -> Result<FeatureMatrix> {
    if let Some(paths) = &video.raw_paths {
        if let Some(p) = paths.get(modality) {
            return formats::read_feature_csv(&manifest.resolve(p));
        }
    }
    if let Some(skel_path) = &video.skeleton_path {
        let topo = topo.ok_or_else(|| {
            CliError::Config(format!(
                "video {:?} needs modalities derived from its skeleton, but the manifest has no topology_path",
                video.id
            ))
        })?;
        let skel = formats::read_skeleton_csv(&manifest.resolve(skel_path), topo.joint_count())?;
        let derived = match modality {
            Modality::Joint => flatten(&skel),
            Modality::Bone => flatten(&derive_bone(&skel, topo)?),
            Modality::Motion => flatten(&derive_motion(&skel)),
        };
        return Ok(derived);
    }
    Err(CliError::Argument(format!(
        "video {:?} has neither raw_paths.{} nor a skeleton to derive it from",
        video.id,
        modality.name()
    )))
}

fn load_feature(
    manifest: &DatasetManifest,
    video: &VideoEntry,
    modality: Modality,
) -> Result<FeatureMatrix> {
    video
        .feature_paths
        .as_ref()
        .and_then(|p| p.get(modality))
        .map(|p| formats::read_feature_csv(&manifest.resolve(p)))
        .unwrap_or_else(|| {
            Err(CliError::Argument(format!(
                "video {:?} has no feature_paths.{}",
                video.id,
                modality.name()
            )))
        })
}

/// Resolve the matrix a route names for one video.
pub fn load_route(
    manifest: &DatasetManifest,
    video: &VideoEntry,
    route: InputRoute,
    topo: Option<&SkeletonTopology>,
) -> Result<FeatureMatrix> {
    match route.kind {
        SourceKind::Raw => load_raw(manifest, video, route.modality, topo),
        SourceKind::Feature => load_feature(manifest, video, route.modality),
        SourceKind::Fused => {
            let raw = load_raw(manifest, video, route.modality, topo)?;
            let feat = load_feature(manifest, video, route.modality)?;
            fuse_inputs(&raw, &feat).map_err(CliError::from)
        }
    }
}

pub fn load_topology(manifest: &DatasetManifest) -> Result<Option<SkeletonTopology>> {
    manifest
        .topology_path
        .as_ref()
        .map(|p| formats::read_topology(&manifest.resolve(p)))
        .transpose()
}

/// Points for one video: taken from the manifest or sampled from the
/// ground-truth labels with the configured strategy.
pub fn points_for(
    manifest: &DatasetManifest,
    video: &VideoEntry,
    labels: &FrameLabels,
    cfg: &PipelineConfig,
) -> Result<PointAnnotationList> {
    if cfg.use_manifest_points {
        let p = video.points_path.as_ref().ok_or_else(|| {
            CliError::Config(format!(
                "config asks for manifest points but video {:?} has no points_path",
                video.id
            ))
        })?;
        formats::read_points(&manifest.resolve(p), labels.len())
    } else {
        simulate_points(labels, &cfg.strategy(), &video.id).map_err(CliError::from)
    }
}

#[derive(Debug)]
pub struct PipelineOutcome {
    pub report: MetricReport,
    pub report_json: ReportJson,
    pub report_path: PathBuf,
    pub model_path: PathBuf,
}

struct TrainVideo {
    points: PointAnnotationList,
    matrices: HashMap<InputRoute, FeatureMatrix>,
}

fn generator_stage(kind: GeneratorKind) -> &'static str {
    match kind {
        GeneratorKind::Prototype => "pseudo-prototype",
        GeneratorKind::Kmedoids => "pseudo-kmedoids",
        GeneratorKind::Energy => "pseudo-energy",
    }
}

/// Run the full pipeline and write all artifacts under `out`:
/// `config.json`, `points/`, `pseudo/<generator>/`, `pseudo/integrated/`,
/// `model.json`, `predictions/`, and `report.json`.
pub fn run_pipeline(
    manifest: &DatasetManifest,
    cfg: &PipelineConfig,
    out: &Path,
) -> Result<PipelineOutcome> {
    cfg.validate(manifest)?;
    let topo = load_topology(manifest)?;
    let class_count = manifest.class_count;

    let mut resolved = serde_json::to_string_pretty(cfg).expect("config serialization cannot fail");
    resolved.push('\n');
    formats::write_atomic(&out.join("config.json"), &resolved)?;

    let train: Vec<&VideoEntry> = cfg
        .train_videos
        .iter()
        .map(|id| manifest.video(id).expect("validated"))
        .collect();
    let test: Vec<&VideoEntry> = cfg
        .test_videos
        .iter()
        .map(|id| manifest.video(id).expect("validated"))
        .collect();

    let mut routes: Vec<InputRoute> = Vec::new();
    for route in cfg
        .generators
        .iter()
        .map(|g| cfg.route_for(*g))
        .chain([cfg.classifier_input])
    {
        if !routes.contains(&route) {
            routes.push(route);
        }
    }

    // per-video loading and point sampling
    let train_data: Vec<TrainVideo> = train
        .par_iter()
        .map(|video| {
            let labels = manifest
                .labels_for(video)
                .map_err(|e| CliError::stage("load-labels", &video.id, e))?;
            let points = points_for(manifest, video, &labels, cfg)
                .map_err(|e| CliError::stage("points", &video.id, e))?;
            let mut matrices = HashMap::new();
            for &route in &routes {
                let m = load_route(manifest, video, route, topo.as_ref())
                    .map_err(|e| CliError::stage("load-input", &video.id, e))?;
                if m.rows() != labels.len() {
                    return Err(CliError::stage(
                        "load-input",
                        &video.id,
                        format!(
                            "input {route} has {} frames but the labels have {}",
                            m.rows(),
                            labels.len()
                        ),
                    ));
                }
                matrices.insert(route, m);
            }
            Ok(TrainVideo { points, matrices })
        })
        .collect::<Result<Vec<_>>>()?;

    for (video, data) in train.iter().zip(&train_data) {
        formats::write_points(&out.join(format!("points/{}.csv", video.id)), &data.points)?;
    }

    let prototypes: Option<Prototypes> = if cfg.generators.contains(&GeneratorKind::Prototype) {
        let feats: Vec<FeatureMatrix> = train_data
            .iter()
            .map(|d| d.matrices[&cfg.prototype_input].clone())
            .collect();
        let anns: Vec<PointAnnotationList> =
            train_data.iter().map(|d| d.points.clone()).collect();
        Some(
            pointseg_core::compute_prototypes(&feats, &anns, class_count)
                .map_err(|e| CliError::stage("prototypes", "(training set)", e))?,
        )
    } else {
        None
    };

    // pseudo-label generation and integration
    let gen_cfg = GeneratorConfig {
        max_kmedoids_iters: cfg.max_kmedoids_iters,
        ..GeneratorConfig::default()
    };
    let pseudo: Vec<(Vec<FrameLabels>, FrameLabels)> = train
        .par_iter()
        .zip(&train_data)
        .map(|(video, data)| {
            let mut per_generator = Vec::with_capacity(cfg.generators.len());
            for &kind in &cfg.generators {
                let feats = &data.matrices[&cfg.route_for(kind)];
                let labels = match kind {
                    GeneratorKind::Energy => generate_energy_labels(feats, &data.points),
                    GeneratorKind::Kmedoids => {
                        generate_kmedoids_labels(feats, &data.points, &gen_cfg)
                    }
                    GeneratorKind::Prototype => generate_prototype_labels(
                        feats,
                        &data.points,
                        prototypes.as_ref().expect("enabled prototype generator"),
                    ),
                }
                .map_err(|e| CliError::stage(generator_stage(kind), &video.id, e))?;
                per_generator.push(labels);
            }
            let integrated = integrate(&per_generator)
                .map_err(|e| CliError::stage("integrate", &video.id, e))?;
            Ok((per_generator, integrated))
        })
        .collect::<Result<Vec<_>>>()?;

    for ((video, _), (per_generator, integrated)) in train.iter().zip(&train_data).zip(&pseudo) {
        for (kind, labels) in cfg.generators.iter().zip(per_generator) {
            formats::write_labels(
                &out.join(format!("pseudo/{}/{}.txt", kind.name(), video.id)),
                labels,
            )?;
        }
        formats::write_labels(
            &out.join(format!("pseudo/integrated/{}.txt", video.id)),
            integrated,
        )?;
    }

    // classifier fitting on the integrated labels
    let fit_features: Vec<FeatureMatrix> = train_data
        .iter()
        .map(|d| d.matrices[&cfg.classifier_input].clone())
        .collect();
    let fit_labels: Vec<FrameLabels> = pseudo.iter().map(|(_, l)| l.clone()).collect();
    let model = pointseg_core::fit(&fit_features, &fit_labels, class_count)
        .map_err(|e| CliError::stage("train", "(training set)", e))?;
    let model_path = out.join("model.json");
    report::write_model(&model_path, &model)?;

    // prediction and smoothing on the test split
    let predictions: Vec<(FrameLabels, FrameLabels)> = test
        .par_iter()
        .map(|video| {
            let gt = manifest
                .labels_for(video)
                .map_err(|e| CliError::stage("load-labels", &video.id, e))?;
            let feats = load_route(manifest, video, cfg.classifier_input, topo.as_ref())
                .map_err(|e| CliError::stage("load-input", &video.id, e))?;
            if feats.rows() != gt.len() {
                return Err(CliError::stage(
                    "predict",
                    &video.id,
                    format!(
                        "input has {} frames but the labels have {}",
                        feats.rows(),
                        gt.len()
                    ),
                ));
            }
            let pred = model
                .predict(&feats)
                .map_err(|e| CliError::stage("predict", &video.id, e))?;
            let smoothed = smooth(&pred, cfg.smoothing_window)
                .map_err(|e| CliError::stage("smooth", &video.id, e))?;
            Ok((smoothed, gt))
        })
        .collect::<Result<Vec<_>>>()?;

    for (video, (pred, _)) in test.iter().zip(&predictions) {
        formats::write_labels(&out.join(format!("predictions/{}.txt", video.id)), pred)?;
    }

    let pairs: Vec<(&FrameLabels, &FrameLabels)> =
        predictions.iter().map(|(p, g)| (p, g)).collect();
    let opts = EvalOptions {
        thresholds: cfg.thresholds.clone(),
        ignore_classes: cfg.ignore_classes.clone(),
        per_video_f1: cfg.per_video_f1,
    };
    let metric_report = evaluate_dataset(&pairs, &opts)?;
    let report_path = out.join("report.json");
    let report_json = report::write_report(&report_path, &metric_report)?;

    Ok(PipelineOutcome {
        report: metric_report,
        report_json,
        report_path,
        model_path,
    })
}
