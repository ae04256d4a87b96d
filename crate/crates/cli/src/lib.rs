//! Dataset manifests, text formats, synthetic data, and the experiment
//! pipeline gluing the library into reproducible runs.

pub mod commands;
pub mod config;
pub mod error;
pub mod formats;
pub mod manifest;
pub mod pipeline;
pub mod report;
pub mod synth;

pub use config::{GeneratorKind, InputRoute, Modality, PipelineConfig, SourceKind, StrategyKind};
pub use error::{CliError, Result};
pub use manifest::{load_manifest, DatasetManifest, ModalityPaths, VideoEntry};
pub use pipeline::{run_pipeline, PipelineOutcome};
pub use report::{ModelFile, ReportJson};
pub use synth::{generate_synthetic, SynthSpec};
