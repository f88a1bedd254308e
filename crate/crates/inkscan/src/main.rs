//! Command-line front end. All logic lives in the library; this file only
//! parses flags, loads inputs, picks the stage to stop at, and maps errors
//! to exit codes: 0 success, 2 input or parse error, 3 stage failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use inkscan::envi::{self, ByteOrder, Interleave};
use inkscan::kmeans::InitStrategy;
use inkscan::pipeline::{self, PipelineConfig, PipelineError, Stage};
use inkscan::preprocess::Rect;
use inkscan::synth::{self, SynthSpec};

#[derive(Parser)]
#[command(name = "inkscan", version, about = "Ink mismatch detection for hyperspectral document images")]
struct Cli {
    /// JSON configuration file: pipeline settings, or a document spec for `synth`
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Directory artifacts are written to
    #[arg(long, global = true, value_name = "DIR", default_value = "out")]
    out: PathBuf,

    /// Random seed, overriding the config file
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print cube dimensions, wavelength range, and data type
    Info {
        /// ENVI header file
        cube: PathBuf,
    },
    /// Crop the cube and save it
    Crop(RunArgs),
    /// Binarize one band: grayscale export, histogram, Otsu threshold, mask
    Threshold(RunArgs),
    /// Segment text lines and extract mean spectral signatures
    Signatures(RunArgs),
    /// Suppress the background and cluster pixel spectra
    Cluster(RunArgs),
    /// Render the color-segmented image and the line-to-cluster table
    Segment(RunArgs),
    /// Run every stage end to end
    Pipeline(RunArgs),
    /// Generate a synthetic document with ground truth
    Synth(SynthArgs),
}

/// Flags shared by the stage subcommands. Each overrides the matching config
/// file field; flags win.
#[derive(Args)]
struct RunArgs {
    /// ENVI header file of the input cube
    cube: PathBuf,

    /// Crop region as top,left,height,width
    #[arg(long, value_name = "T,L,H,W", value_parser = parse_rect)]
    crop: Option<Rect>,

    /// Band index used for thresholding
    #[arg(long)]
    band: Option<usize>,

    /// Manual threshold instead of Otsu's method
    #[arg(long)]
    threshold: Option<f64>,

    /// Ink polarity: true for dark ink on bright paper
    #[arg(long, value_name = "BOOL")]
    ink_is_dark: Option<bool>,

    /// Histogram resolution for threshold selection
    #[arg(long)]
    bins: Option<usize>,

    /// Value written into every band of background pixels
    #[arg(long)]
    fill: Option<f64>,

    /// Row gaps shorter than this merge adjacent line runs
    #[arg(long)]
    min_gap_rows: Option<usize>,

    /// Line runs shorter than this are discarded
    #[arg(long)]
    min_line_rows: Option<usize>,

    /// Number of clusters
    #[arg(long)]
    k: Option<usize>,

    /// Iteration cap for K-means
    #[arg(long = "max-iter")]
    max_iter: Option<usize>,

    /// Centroid initialization strategy
    #[arg(long, value_enum)]
    init: Option<InitArg>,

    /// Render this cluster in the background color
    #[arg(long)]
    merge_cluster: Option<u32>,
}

#[derive(Clone, Copy, ValueEnum)]
enum InitArg {
    /// Centroids evenly spread across the per-band value range
    Uniform,
    /// Squared-distance-weighted sampling of actual pixel spectra
    Kmeanspp,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long)]
    rows: Option<usize>,

    #[arg(long)]
    cols: Option<usize>,

    #[arg(long)]
    bands: Option<usize>,

    /// Number of text lines
    #[arg(long)]
    lines: Option<usize>,

    /// Per-band Gaussian noise sigma
    #[arg(long)]
    noise: Option<f64>,

    /// Draw a printed rule line under each text line
    #[arg(long, value_name = "BOOL")]
    rule_lines: Option<bool>,
}

fn parse_rect(text: &str) -> Result<Rect, String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 4 {
        return Err(format!("expected top,left,height,width, got {text:?}"));
    }
    let mut values = [0usize; 4];
    for (slot, part) in values.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse()
            .map_err(|e| format!("bad crop component {part:?}: {e}"))?;
    }
    Ok(Rect::new(values[0], values[1], values[2], values[3]))
}

enum AppError {
    /// Exit code 2.
    Input(String),
    /// Exit code 3.
    Stage(String),
}

impl From<PipelineError> for AppError {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::Input(msg) => AppError::Input(msg),
            stage @ PipelineError::Stage { .. } => AppError::Stage(stage.to_string()),
        }
    }
}

fn input<E: std::fmt::Display>(e: E) -> AppError {
    AppError::Input(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(AppError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(AppError::Stage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: Cli) -> Result<(), AppError> {
    match &cli.command {
        Command::Info { cube } => {
            let header = envi::read_header(cube).map_err(input)?;
            println!("{}", pipeline::describe(&header));
            Ok(())
        }
        Command::Synth(args) => cmd_synth(cli.config.as_deref(), &cli.out, cli.seed, args),
        Command::Crop(args) => cmd_stage(&cli, args, Stage::Crop),
        Command::Threshold(args) => cmd_stage(&cli, args, Stage::Threshold),
        Command::Signatures(args) => cmd_stage(&cli, args, Stage::Signatures),
        Command::Cluster(args) => cmd_stage(&cli, args, Stage::Cluster),
        Command::Segment(args) => cmd_stage(&cli, args, Stage::Segment),
        Command::Pipeline(args) => cmd_stage(&cli, args, Stage::Segment),
    }
}

fn cmd_stage(cli: &Cli, args: &RunArgs, last_stage: Stage) -> Result<(), AppError> {
    let mut config = match &cli.config {
        None => PipelineConfig::default(),
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| AppError::Input(format!("cannot read {}: {e}", path.display())))?;
            PipelineConfig::from_json(&text)?
        }
    };
    apply_overrides(&mut config, args, cli.seed);

    let cube = envi::read_envi(&args.cube).map_err(input)?;
    let report = pipeline::run_pipeline(&cube, &config, &cli.out, last_stage)?;

    if let Some(t) = report.threshold {
        println!("threshold = {t}");
    }
    if !report.regions.is_empty() {
        println!("text lines = {}", report.regions.len());
    }
    if let Some(iterations) = report.iterations_run {
        println!(
            "k-means: {iterations} iterations, sse = {}, converged = {}",
            report.sse.unwrap_or(f64::NAN),
            report.converged.unwrap_or(false)
        );
    }
    if let Some(table) = &report.table {
        print!("{}", inkscan::segment::table_text(table));
    }
    println!(
        "wrote {} artifacts to {}",
        report.artifacts.len(),
        report.out_dir.display()
    );
    Ok(())
}

fn apply_overrides(config: &mut PipelineConfig, args: &RunArgs, seed: Option<u64>) {
    if let Some(rect) = args.crop {
        config.crop = Some(rect);
    }
    if let Some(band) = args.band {
        config.threshold_band = band;
    }
    if let Some(t) = args.threshold {
        config.threshold = Some(t);
    }
    if let Some(polarity) = args.ink_is_dark {
        config.ink_is_dark = polarity;
    }
    if let Some(bins) = args.bins {
        config.n_bins = bins;
    }
    if let Some(fill) = args.fill {
        config.fill = fill;
    }
    if let Some(gap) = args.min_gap_rows {
        config.min_gap_rows = gap;
    }
    if let Some(rows) = args.min_line_rows {
        config.min_line_rows = rows;
    }
    if let Some(k) = args.k {
        config.k = k;
    }
    if let Some(cap) = args.max_iter {
        config.max_iterations = cap;
    }
    if let Some(init) = args.init {
        config.init_strategy = match init {
            InitArg::Uniform => InitStrategy::UniformSpread,
            InitArg::Kmeanspp => InitStrategy::KMeansPlusPlus,
        };
    }
    if let Some(m) = args.merge_cluster {
        config.merge_cluster = Some(m);
    }
    if let Some(s) = seed {
        config.seed = s;
    }
}

fn cmd_synth(
    config: Option<&Path>,
    out: &Path,
    seed: Option<u64>,
    args: &SynthArgs,
) -> Result<(), AppError> {
    let mut spec = match config {
        None => SynthSpec::default(),
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| AppError::Input(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| AppError::Input(format!("bad synth spec: {e}")))?
        }
    };
    if let Some(rows) = args.rows {
        spec.rows = rows;
    }
    if let Some(cols) = args.cols {
        spec.cols = cols;
    }
    if let Some(bands) = args.bands {
        spec.bands = bands;
    }
    if let Some(lines) = args.lines {
        spec.n_lines = lines;
    }
    if let Some(noise) = args.noise {
        spec.noise_sigma = noise;
    }
    if let Some(rule) = args.rule_lines {
        spec.rule_lines = rule;
    }
    if let Some(s) = seed {
        spec.seed = s;
    }

    let (cube, truth) = synth::generate(&spec).map_err(input)?;
    fs::create_dir_all(out)
        .map_err(|e| AppError::Input(format!("cannot create {}: {e}", out.display())))?;
    let write = |name: &str, bytes: &[u8]| {
        fs::write(out.join(name), bytes)
            .map_err(|e| AppError::Stage(format!("writing {name}: {e}")))
    };
    envi::write_envi(&cube, Interleave::Bsq, ByteOrder::Little, &out.join("synth.hdr"))
        .map_err(|e| AppError::Stage(format!("writing synth cube: {e}")))?;
    write("ground_truth.json", synth::ground_truth_json(&spec, &truth).as_bytes())?;
    write("ground_truth.bin", &synth::encode_gt_map(&truth))?;
    println!(
        "wrote synth.hdr, synth.raw, ground_truth.json, ground_truth.bin to {}",
        out.display()
    );
    Ok(())
}
