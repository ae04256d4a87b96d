use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use pointseg_cli::commands::{self, PipelineOverrides};
use pointseg_cli::config::{parse_route, GeneratorKind, InputRoute, StrategyKind};
use pointseg_cli::report::format_table;
use pointseg_cli::synth::SynthSpec;
use pointseg_core::EvalOptions;

#[derive(Parser)]
#[command(
    name = "pointseg",
    version,
    about = "Point-supervised temporal segmentation: pseudo-labels, training, and evaluation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic dataset with a manifest and optional splits.
    Synth {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 20)]
        videos: usize,
        #[arg(long, default_value_t = 5)]
        classes: usize,
        #[arg(long, default_value_t = 10)]
        segments: usize,
        #[arg(long, default_value_t = 20)]
        seg_len_min: usize,
        #[arg(long, default_value_t = 40)]
        seg_len_max: usize,
        #[arg(long, default_value_t = 8)]
        dim: usize,
        #[arg(long, default_value_t = 1.0)]
        separation: f64,
        #[arg(long, default_value_t = 0.1)]
        noise: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Also write train.txt/test.txt, assigning this many videos to
        /// training.
        #[arg(long)]
        train_count: Option<usize>,
    },
    /// Derive joint/bone/motion matrices from skeletons.
    Derive {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Also write moving-average features with this odd window.
        #[arg(long)]
        embed_window: Option<usize>,
    },
    /// Sample one point annotation per ground-truth segment.
    Points {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = StrategyKind::UniformRandom)]
        strategy: StrategyKind,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Generate pseudo-labels with one generator.
    Pseudo {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum)]
        generator: GeneratorKind,
        /// Input route, e.g. joint:fused or motion:raw (defaults to the
        /// generator's standard routing).
        #[arg(long, value_parser = parse_route)]
        input: Option<InputRoute>,
        #[arg(long, value_enum, default_value_t = StrategyKind::UniformRandom)]
        strategy: StrategyKind,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Read points from the manifest instead of sampling them.
        #[arg(long)]
        use_manifest_points: bool,
        #[arg(long, default_value_t = 50)]
        max_iters: usize,
    },
    /// Intersect pseudo-label directories into integrated labels.
    Integrate {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Comma-separated directories of per-video label files.
        #[arg(long, value_delimiter = ',', required = true)]
        inputs: Vec<PathBuf>,
    },
    /// Fit the frame classifier on pseudo-labels.
    Train {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        pseudo_dir: PathBuf,
        #[arg(long, value_parser = parse_route, default_value = "joint:fused")]
        input: InputRoute,
        /// Split file of training video ids (defaults to every video).
        #[arg(long)]
        split: Option<PathBuf>,
    },
    /// Predict frame labels with a trained model.
    Predict {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        model: PathBuf,
        #[arg(long, value_parser = parse_route, default_value = "joint:fused")]
        input: InputRoute,
        #[arg(long)]
        split: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        smooth: usize,
    },
    /// Score predictions against ground truth.
    Eval {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        pred_dir: PathBuf,
        #[arg(long)]
        split: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', default_values_t = [0.1, 0.25, 0.5])]
        thresholds: Vec<f64>,
        #[arg(long, value_delimiter = ',')]
        ignore_classes: Vec<usize>,
        /// Average per-video F1 instead of pooling counts.
        #[arg(long)]
        per_video_f1: bool,
    },
    /// Run the whole loop: points, pseudo-labels, integration, training,
    /// prediction, evaluation.
    Pipeline {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Pipeline config JSON; defaults apply otherwise.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        train_split: Option<PathBuf>,
        #[arg(long)]
        test_split: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum)]
        strategy: Option<StrategyKind>,
        #[arg(long)]
        smooth: Option<usize>,
    },
}

fn run(cli: Cli) -> pointseg_cli::Result<()> {
    match cli.command {
        Command::Synth {
            out,
            videos,
            classes,
            segments,
            seg_len_min,
            seg_len_max,
            dim,
            separation,
            noise,
            seed,
            train_count,
        } => {
            let spec = SynthSpec {
                videos,
                classes,
                segments_per_video: segments,
                segment_len: (seg_len_min, seg_len_max),
                feature_dim: dim,
                class_separation: separation,
                noise_stdev: noise,
                seed,
            };
            let manifest = commands::cmd_synth(&spec, train_count, &out)?;
            println!("wrote {}", manifest.display());
            Ok(())
        }
        Command::Derive {
            manifest,
            out,
            embed_window,
        } => {
            let path = commands::cmd_derive(&manifest, &out, embed_window)?;
            println!("wrote {}", path.display());
            Ok(())
        }
        Command::Points {
            manifest,
            out,
            strategy,
            seed,
        } => {
            let path = commands::cmd_points(&manifest, &out, strategy, seed)?;
            println!("wrote {}", path.display());
            Ok(())
        }
        Command::Pseudo {
            manifest,
            out,
            generator,
            input,
            strategy,
            seed,
            use_manifest_points,
            max_iters,
        } => commands::cmd_pseudo(
            &manifest,
            &out,
            generator,
            input,
            strategy,
            seed,
            use_manifest_points,
            max_iters,
        ),
        Command::Integrate {
            manifest,
            out,
            inputs,
        } => commands::cmd_integrate(&manifest, &out, &inputs),
        Command::Train {
            manifest,
            out,
            pseudo_dir,
            input,
            split,
        } => {
            let path =
                commands::cmd_train(&manifest, &out, &pseudo_dir, input, split.as_deref())?;
            println!("wrote {}", path.display());
            Ok(())
        }
        Command::Predict {
            manifest,
            out,
            model,
            input,
            split,
            smooth,
        } => commands::cmd_predict(&manifest, &out, &model, input, split.as_deref(), smooth),
        Command::Eval {
            manifest,
            out,
            pred_dir,
            split,
            thresholds,
            ignore_classes,
            per_video_f1,
        } => {
            let opts = EvalOptions {
                thresholds,
                ignore_classes,
                per_video_f1,
            };
            let (report, _) =
                commands::cmd_eval(&manifest, &out, &pred_dir, split.as_deref(), &opts)?;
            print!("{}", format_table(&report));
            Ok(())
        }
        Command::Pipeline {
            manifest,
            out,
            config,
            train_split,
            test_split,
            seed,
            strategy,
            smooth,
        } => {
            let outcome = commands::cmd_pipeline(
                &manifest,
                &out,
                config.as_deref(),
                PipelineOverrides {
                    train_split,
                    test_split,
                    seed,
                    strategy,
                    smooth,
                },
            )?;
            print!("{}", format_table(&outcome.report));
            println!("report: {}", outcome.report_path.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
