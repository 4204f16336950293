// SPDX-License-Identifier: MIT OR Apache-2.0

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use clasp::ensemble::{calc_clasp_ensemble, EnsembleConfig, DEFAULT_N_ITER, DEFAULT_SEED};
use clasp::error::{ClaspError, Result};
use clasp::io::{load_series, parse_cp_list, DatasetRecord, Format};
use clasp::metrics::{covering_score, f1_score, CpSet, DEFAULT_MARGIN};
use clasp::profile::Scorer;
use clasp::report::{metric_line, profile_text, segmentation_json};
use clasp::segmentation::{resolve_window, segment, Mode, SegmentationConfig, WindowChoice};
use clasp::suss::{calc_suss, SussConfig, DEFAULT_THRESHOLD};
use clasp::validation::{ValidationConfig, DEFAULT_P_VALUE};

/// Time series segmentation with classification score profiles.
///
/// Thread count follows RAYON_NUM_THREADS (default: all cores).
#[derive(Parser)]
#[command(name = "clasp", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find change points.
    Segment(SegmentArgs),
    /// Write the classification score profile as `offset score` lines.
    Profile(ProfileArgs),
    /// Learn a window size and print it.
    WindowSize(WindowSizeArgs),
    /// Compare predicted change points against ground truth.
    Evaluate(EvaluateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Plain,
    Annotated,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Plain => Format::Plain,
            FormatArg::Annotated => Format::Annotated,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ScoreArg {
    RocAuc,
    MacroF1,
}

impl From<ScoreArg> for Scorer {
    fn from(s: ScoreArg) -> Self {
        match s {
            ScoreArg::RocAuc => Scorer::RocAuc,
            ScoreArg::MacroF1 => Scorer::MacroF1,
        }
    }
}

#[derive(Args)]
struct InputArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "plain")]
    format: FormatArg,
}

#[derive(Args)]
struct WindowArgs {
    /// Fixed window width.
    #[arg(long, conflicts_with = "auto_window")]
    window: Option<usize>,
    /// Learn the window width (the default).
    #[arg(long)]
    auto_window: bool,
}

impl WindowArgs {
    fn choice(&self) -> WindowChoice {
        match self.window {
            Some(w) => WindowChoice::Fixed(w),
            None => WindowChoice::Auto(SussConfig::default()),
        }
    }
}

#[derive(Args)]
struct EnsembleArgs {
    #[arg(long, default_value_t = DEFAULT_N_ITER)]
    n_iter: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, value_enum, default_value = "roc-auc")]
    score: ScoreArg,
}

impl EnsembleArgs {
    fn config(&self) -> EnsembleConfig {
        EnsembleConfig {
            n_iter: self.n_iter,
            seed: self.seed,
            scorer: self.score.into(),
            ..Default::default()
        }
    }
}

#[derive(Args)]
struct SegmentArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    window: WindowArgs,
    #[command(flatten)]
    ensemble: EnsembleArgs,
    /// Number of segments C; reports C - 1 change points instead of
    /// learning the count.
    #[arg(long)]
    n_cps: Option<usize>,
    /// Largest p-value accepted when learning the number of change points.
    #[arg(long, default_value_t = DEFAULT_P_VALUE)]
    p_value: f64,
    /// Write the document here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Also write the top-level profile as `offset score` lines.
    #[arg(long)]
    emit_profile: Option<PathBuf>,
}

#[derive(Args)]
struct ProfileArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    window: WindowArgs,
    #[command(flatten)]
    ensemble: EnsembleArgs,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct WindowSizeArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
    threshold: f64,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum MetricArg {
    Covering,
    F1,
    Both,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Comma-separated offsets or an annotated file.
    #[arg(long, allow_hyphen_values = true)]
    truth: String,
    /// Comma-separated offsets or an annotated file.
    #[arg(long, allow_hyphen_values = true)]
    pred: String,
    #[arg(long)]
    length: usize,
    #[arg(long, value_enum, default_value = "both")]
    metric: MetricArg,
    #[arg(long, default_value_t = DEFAULT_MARGIN)]
    margin: f64,
}

fn load(input: &InputArgs) -> Result<DatasetRecord> {
    load_series(&input.input, input.format.into())
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| ClaspError::Io {
            path: p.display().to_string(),
            message: e.to_string(),
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run_segment(args: &SegmentArgs) -> Result<()> {
    let validation = ValidationConfig::new(args.p_value)?;
    let mode = match args.n_cps {
        Some(c) if c < 1 => return Err(ClaspError::InvalidParameter("--n-cps must be >= 1".into())),
        Some(c) => Mode::Fixed { n_segments: c },
        None => Mode::Learned,
    };
    let record = load(&args.input)?;
    let cfg = SegmentationConfig {
        window: args.window.choice(),
        mode,
        ensemble: args.ensemble.config(),
        validation,
    };
    let started = Instant::now();
    let seg = segment(&record.series, &cfg)?;
    eprintln!("elapsed_ms {}", started.elapsed().as_millis());

    let doc = segmentation_json(&record.name, &seg);
    let profile = args.emit_profile.as_ref().map(|_| profile_text(&seg.profile));
    write_out(args.output.as_deref(), &doc)?;
    if let (Some(path), Some(text)) = (&args.emit_profile, profile) {
        write_out(Some(path), &text)?;
    }
    Ok(())
}

fn run_profile(args: &ProfileArgs) -> Result<()> {
    let record = load(&args.input)?;
    let (w, _) = resolve_window(&record.series, &args.window.choice())?;
    let profile = calc_clasp_ensemble(&record.series, w, &args.ensemble.config())?;
    write_out(args.output.as_deref(), &profile_text(&profile))
}

fn run_window_size(args: &WindowSizeArgs) -> Result<()> {
    let cfg = SussConfig {
        threshold: args.threshold,
        ..Default::default()
    };
    let record = load(&args.input)?;
    let ws = calc_suss(&record.series, &cfg)?;
    if ws.degenerate {
        eprintln!("warning: series has no informative window size; using lower bound {}", ws.width);
    } else if !ws.reached_threshold {
        eprintln!("warning: threshold {} not reached; using upper bound {}", cfg.threshold, ws.width);
    }
    println!("{}", ws.width);
    Ok(())
}

fn run_evaluate(args: &EvaluateArgs) -> Result<()> {
    let truth = CpSet::new(parse_cp_list(&args.truth)?, args.length)?;
    let pred = CpSet::new(parse_cp_list(&args.pred)?, args.length)?;
    let mut out = String::new();
    if matches!(args.metric, MetricArg::Covering | MetricArg::Both) {
        out.push_str(&metric_line("covering", covering_score(&truth, &pred)?));
    }
    if matches!(args.metric, MetricArg::F1 | MetricArg::Both) {
        out.push_str(&metric_line("f1", f1_score(&truth, &pred, args.margin)?));
    }
    print!("{out}");
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    let result = match &cli.command {
        Command::Segment(a) => run_segment(a),
        Command::Profile(a) => run_profile(a),
        Command::WindowSize(a) => run_window_size(a),
        Command::Evaluate(a) => run_evaluate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
