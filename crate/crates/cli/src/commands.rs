//! Implementations behind the CLI verbs. Each takes plain arguments so
//! integration tests can drive them without spawning the binary.

use std::path::{Path, PathBuf};

use pointseg_core::features::box_smooth;
use pointseg_core::{
    derive_bone, derive_motion, evaluate_dataset, flatten, integrate, simulate_points, smooth,
    EvalOptions, FeatureMatrix, FrameLabels, GeneratorConfig, MetricReport, PointAnnotationList,
    PointStrategy,
};

use crate::config::{GeneratorKind, InputRoute, Modality, PipelineConfig, SourceKind, StrategyKind};
use crate::error::{CliError, Result};
use crate::formats;
use crate::manifest::{load_manifest, write_manifest, DatasetManifest, ModalityPaths, VideoEntry};
use crate::pipeline::{self, load_route, load_topology, PipelineOutcome};
use crate::report::{self, ReportJson};
use crate::synth::{generate_synthetic, write_default_splits, SynthSpec};

pub fn cmd_synth(spec: &SynthSpec, train_count: Option<usize>, out: &Path) -> Result<PathBuf> {
    let manifest_path = generate_synthetic(spec, out)?;
    if let Some(n) = train_count {
        write_default_splits(spec, out, n)?;
    }
    Ok(manifest_path)
}

/// Derive raw modality matrices (and optionally embedded features) from
/// skeletons, writing an updated manifest under `out`.
pub fn cmd_derive(manifest_path: &Path, out: &Path, embed_window: Option<usize>) -> Result<PathBuf> {
    let manifest = load_manifest(manifest_path)?;
    let topo = load_topology(&manifest)?;
    let mut updated = manifest.absolutized();
    for (i, video) in manifest.videos.iter().enumerate() {
        let Some(skel_rel) = &video.skeleton_path else {
            continue;
        };
        let topo = topo.as_ref().ok_or_else(|| {
            CliError::Config(format!(
                "video {:?} has a skeleton but the manifest has no topology_path",
                video.id
            ))
        })?;
        let skel = formats::read_skeleton_csv(&manifest.resolve(skel_rel), topo.joint_count())?;
        let matrices = [
            (Modality::Joint, flatten(&skel)),
            (Modality::Bone, flatten(&derive_bone(&skel, topo)?)),
            (Modality::Motion, flatten(&derive_motion(&skel))),
        ];
        for (modality, matrix) in matrices {
            let rel = PathBuf::from(format!("raw/{}.{}.csv", video.id, modality.name()));
            formats::write_feature_csv(&out.join(&rel), &matrix)?;
            updated.videos[i]
                .raw_paths
                .get_or_insert_with(ModalityPaths::default)
                .set(modality, rel);
            if let Some(window) = embed_window {
                let feat = box_smooth(&matrix, window)?;
                let rel = PathBuf::from(format!("features/{}.{}.csv", video.id, modality.name()));
                formats::write_feature_csv(&out.join(&rel), &feat)?;
                updated.videos[i]
                    .feature_paths
                    .get_or_insert_with(ModalityPaths::default)
                    .set(modality, rel);
            }
        }
    }
    let path = out.join("manifest.json");
    write_manifest(&path, &updated)?;
    Ok(path)
}

/// Sample point annotations for every video and write an updated manifest.
pub fn cmd_points(
    manifest_path: &Path,
    out: &Path,
    strategy: StrategyKind,
    seed: u64,
) -> Result<PathBuf> {
    let manifest = load_manifest(manifest_path)?;
    let strategy = match strategy {
        StrategyKind::UniformRandom => PointStrategy::UniformRandom { seed },
        StrategyKind::Center => PointStrategy::Center,
    };
    let mut updated = manifest.absolutized();
    for (i, video) in manifest.videos.iter().enumerate() {
        let labels = manifest.labels_for(video)?;
        let points = simulate_points(&labels, &strategy, &video.id)
            .map_err(|e| CliError::stage("points", &video.id, e))?;
        let rel = PathBuf::from(format!("points/{}.csv", video.id));
        formats::write_points(&out.join(&rel), &points)?;
        updated.videos[i].points_path = Some(rel);
    }
    let path = out.join("manifest.json");
    write_manifest(&path, &updated)?;
    Ok(path)
}

fn default_route(generator: GeneratorKind) -> InputRoute {
    let cfg = PipelineConfig::default();
    cfg.route_for(generator)
}

fn video_points(
    manifest: &DatasetManifest,
    video: &VideoEntry,
    labels: &FrameLabels,
    use_manifest_points: bool,
    strategy: StrategyKind,
    seed: u64,
) -> Result<PointAnnotationList> {
    if use_manifest_points {
        let p = video.points_path.as_ref().ok_or_else(|| {
            CliError::Config(format!("video {:?} has no points_path", video.id))
        })?;
        formats::read_points(&manifest.resolve(p), labels.len())
    } else {
        let strategy = match strategy {
            StrategyKind::UniformRandom => PointStrategy::UniformRandom { seed },
            StrategyKind::Center => PointStrategy::Center,
        };
        simulate_points(labels, &strategy, &video.id).map_err(CliError::from)
    }
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_pseudo(
    manifest_path: &Path,
    out: &Path,
    generator: GeneratorKind,
    route: Option<InputRoute>,
    strategy: StrategyKind,
    seed: u64,
    use_manifest_points: bool,
    max_iters: usize,
) -> Result<()> {
    let manifest = load_manifest(manifest_path)?;
    let topo = load_topology(&manifest)?;
    let route = route.unwrap_or_else(|| default_route(generator));

    // labels, points, and the routed input per video
    let mut loaded: Vec<(FeatureMatrix, PointAnnotationList)> = Vec::new();
    for video in &manifest.videos {
        let labels = manifest.labels_for(video)?;
        let points = video_points(&manifest, video, &labels, use_manifest_points, strategy, seed)?;
        let matrix = load_route(&manifest, video, route, topo.as_ref())
            .map_err(|e| CliError::stage("load-input", &video.id, e))?;
        if matrix.rows() != labels.len() {
            return Err(CliError::stage(
                "load-input",
                &video.id,
                format!(
                    "input {route} has {} frames but the labels have {}",
                    matrix.rows(),
                    labels.len()
                ),
            ));
        }
        loaded.push((matrix, points));
    }

    let prototypes = if generator == GeneratorKind::Prototype {
        let feats: Vec<FeatureMatrix> = loaded.iter().map(|(m, _)| m.clone()).collect();
        let anns: Vec<PointAnnotationList> = loaded.iter().map(|(_, p)| p.clone()).collect();
        Some(
            pointseg_core::compute_prototypes(&feats, &anns, manifest.class_count)
                .map_err(|e| CliError::stage("prototypes", "(all videos)", e))?,
        )
    } else {
        None
    };

    let gen_cfg = GeneratorConfig {
        max_kmedoids_iters: max_iters,
        ..GeneratorConfig::default()
    };
    for (video, (matrix, points)) in manifest.videos.iter().zip(&loaded) {
        let labels = match generator {
            GeneratorKind::Energy => pointseg_core::generate_energy_labels(matrix, points),
            GeneratorKind::Kmedoids => {
                pointseg_core::generate_kmedoids_labels(matrix, points, &gen_cfg)
            }
            GeneratorKind::Prototype => pointseg_core::generate_prototype_labels(
                matrix,
                points,
                prototypes.as_ref().expect("prototype generator"),
            ),
        }
        .map_err(|e| CliError::stage("pseudo", &video.id, e))?;
        formats::write_labels(&out.join(format!("{}.txt", video.id)), &labels)?;
    }
    Ok(())
}

/// Intersect per-video label files from several directories.
pub fn cmd_integrate(manifest_path: &Path, out: &Path, inputs: &[PathBuf]) -> Result<()> {
    if inputs.is_empty() {
        return Err(CliError::Argument("no input directories to integrate".into()));
    }
    let manifest = load_manifest(manifest_path)?;
    for video in &manifest.videos {
        let sequences = inputs
            .iter()
            .map(|dir| formats::read_labels(&dir.join(format!("{}.txt", video.id))))
            .collect::<Result<Vec<FrameLabels>>>()?;
        let merged = integrate(&sequences)
            .map_err(|e| CliError::stage("integrate", &video.id, e))?;
        formats::write_labels(&out.join(format!("{}.txt", video.id)), &merged)?;
    }
    Ok(())
}

fn split_or_all(manifest: &DatasetManifest, split: Option<&Path>) -> Result<Vec<String>> {
    match split {
        Some(path) => {
            let ids = formats::read_split(path)?;
            for id in &ids {
                if manifest.video(id).is_none() {
                    return Err(CliError::Argument(format!(
                        "split names video {id:?}, which the manifest does not contain"
                    )));
                }
            }
            Ok(ids)
        }
        None => Ok(manifest.video_ids()),
    }
}

pub fn cmd_train(
    manifest_path: &Path,
    out: &Path,
    pseudo_dir: &Path,
    route: InputRoute,
    split: Option<&Path>,
) -> Result<PathBuf> {
    let manifest = load_manifest(manifest_path)?;
    let topo = load_topology(&manifest)?;
    let ids = split_or_all(&manifest, split)?;
    let mut features = Vec::new();
    let mut labels = Vec::new();
    for id in &ids {
        let video = manifest.video(id).expect("checked");
        let pseudo = formats::read_labels(&pseudo_dir.join(format!("{id}.txt")))?;
        let matrix = load_route(&manifest, video, route, topo.as_ref())
            .map_err(|e| CliError::stage("load-input", id, e))?;
        features.push(matrix);
        labels.push(pseudo);
    }
    let model = pointseg_core::fit(&features, &labels, manifest.class_count)
        .map_err(|e| CliError::stage("train", "(training set)", e))?;
    let path = out.join("model.json");
    report::write_model(&path, &model)?;
    Ok(path)
}

pub fn cmd_predict(
    manifest_path: &Path,
    out: &Path,
    model_path: &Path,
    route: InputRoute,
    split: Option<&Path>,
    smooth_window: usize,
) -> Result<()> {
    let manifest = load_manifest(manifest_path)?;
    let topo = load_topology(&manifest)?;
    let model = report::read_model(model_path)?;
    for id in split_or_all(&manifest, split)? {
        let video = manifest.video(&id).expect("checked");
        let matrix = load_route(&manifest, video, route, topo.as_ref())
            .map_err(|e| CliError::stage("load-input", &id, e))?;
        let pred = model
            .predict(&matrix)
            .map_err(|e| CliError::stage("predict", &id, e))?;
        let smoothed =
            smooth(&pred, smooth_window).map_err(|e| CliError::stage("smooth", &id, e))?;
        formats::write_labels(&out.join(format!("{id}.txt")), &smoothed)?;
    }
    Ok(())
}

pub fn cmd_eval(
    manifest_path: &Path,
    out: &Path,
    pred_dir: &Path,
    split: Option<&Path>,
    opts: &EvalOptions,
) -> Result<(MetricReport, ReportJson)> {
    let manifest = load_manifest(manifest_path)?;
    let ids = split_or_all(&manifest, split)?;
    let mut pairs: Vec<(FrameLabels, FrameLabels)> = Vec::new();
    for id in &ids {
        let video = manifest.video(id).expect("checked");
        let pred = formats::read_labels(&pred_dir.join(format!("{id}.txt")))?;
        let gt = manifest.labels_for(video)?;
        pairs.push((pred, gt));
    }
    let borrowed: Vec<(&FrameLabels, &FrameLabels)> =
        pairs.iter().map(|(p, g)| (p, g)).collect();
    let metric_report = evaluate_dataset(&borrowed, opts)?;
    let json = report::write_report(&out.join("report.json"), &metric_report)?;
    Ok((metric_report, json))
}

pub struct PipelineOverrides {
    pub train_split: Option<PathBuf>,
    pub test_split: Option<PathBuf>,
    pub seed: Option<u64>,
    pub strategy: Option<StrategyKind>,
    pub smooth: Option<usize>,
}

pub fn cmd_pipeline(
    manifest_path: &Path,
    out: &Path,
    config_path: Option<&Path>,
    overrides: PipelineOverrides,
) -> Result<PipelineOutcome> {
    let manifest = load_manifest(manifest_path)?;
    let mut cfg = match config_path {
        Some(path) => {
            let text = formats::read_to_string(path)?;
            serde_json::from_str::<PipelineConfig>(&text).map_err(|e| CliError::ParseFile {
                path: path.to_path_buf(),
                line: 1,
                message: e.to_string(),
            })?
        }
        None => PipelineConfig::default(),
    };
    if let Some(path) = &overrides.train_split {
        cfg.train_videos = formats::read_split(path)?;
    }
    if let Some(path) = &overrides.test_split {
        cfg.test_videos = formats::read_split(path)?;
    }
    if let Some(seed) = overrides.seed {
        cfg.point_seed = seed;
    }
    if let Some(strategy) = overrides.strategy {
        cfg.point_strategy = strategy;
    }
    if let Some(window) = overrides.smooth {
        cfg.smoothing_window = window;
    }
    pipeline::run_pipeline(&manifest, &cfg, out)
}

/// Ablation helper: rewrite the three generator routes' source kind, keeping
/// the modalities and the classifier input. Changing only the pseudo-label
/// inputs isolates their contribution, the quantity the fusion comparison is
/// about.
pub fn with_generator_inputs(cfg: &PipelineConfig, kind: SourceKind) -> PipelineConfig {
    let mut out = cfg.clone();
    out.prototype_input.kind = kind;
    out.kmedoids_input.kind = kind;
    out.energy_input.kind = kind;
    out
}
