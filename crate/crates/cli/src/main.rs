//! `tonelab` command-line front end. Every subcommand reads files, writes
//! files or stdout, and exits 0 on success, 1 on a runtime failure and 2 on
//! a usage, parse or missing-input error.

mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "tonelab", version, about = "Tone transcription distances, tone discovery and dialect clustering")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Curve distance between two transcriptions, or for each pair in a list file
    Dist(DistArgs),
    /// Contour variance between two transcriptions, or for each pair in a list file
    Variance(VarianceArgs),
    /// Transcribe a single-syllable WAV file
    Transcribe(TranscribeArgs),
    /// Train a linear tone model from a clip manifest
    Train(TrainArgs),
    /// Discover tone categories in a set of clips
    ClusterTones(ClusterTonesArgs),
    /// Cluster dialect regions and score against gold labels
    DialectCluster(DialectClusterArgs),
    /// One- or two-dimensional MDS map of dialect regions
    DialectMds(DialectMdsArgs),
    /// Write deterministic synthetic demo data
    #[command(subcommand)]
    Synth(SynthCommand),
}

#[derive(Args)]
struct DistArgs {
    /// Two transcription tokens, e.g. `41 312`
    #[arg(num_args = 2, value_names = ["A", "B"], required_unless_present_any = ["list", "matrix"])]
    pair: Vec<String>,
    /// File with one whitespace-separated token pair per line
    #[arg(long, conflicts_with = "pair")]
    list: Option<PathBuf>,
    /// Write the full 150×150 distance matrix as CSV
    #[arg(long)]
    matrix: Option<PathBuf>,
}

#[derive(Args)]
struct VarianceArgs {
    #[arg(num_args = 2, value_names = ["A", "B"], required_unless_present = "list")]
    pair: Vec<String>,
    /// File with one whitespace-separated token pair per line
    #[arg(long, conflicts_with = "pair")]
    list: Option<PathBuf>,
}

#[derive(Args, Clone, Copy)]
struct F0Args {
    /// Lowest F0 searched, Hz
    #[arg(long, default_value_t = 50.0)]
    fmin: f64,
    /// Highest F0 searched, Hz
    #[arg(long, default_value_t = 600.0)]
    fmax: f64,
    /// Analysis frame length, ms
    #[arg(long, default_value_t = 40.0)]
    frame_ms: f64,
    /// Frame hop, ms
    #[arg(long, default_value_t = 10.0)]
    hop_ms: f64,
    /// Voicing threshold on the normalized difference
    #[arg(long, default_value_t = 0.15)]
    yin_threshold: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    /// Quadratic fit of the F0 contour
    F0,
    /// Trained linear tone model
    Model,
}

#[derive(Args)]
struct TranscribeArgs {
    wav: PathBuf,
    #[arg(long, value_enum, default_value = "f0")]
    method: Method,
    /// Model file, required with `--method model`
    #[arg(long, required_if_eq("method", "model"))]
    model: Option<PathBuf>,
    /// Linearity threshold for two-digit output
    #[arg(long, default_value_t = 0.5)]
    beta: f64,
    /// Print a JSON object with the pitch triple and linearity
    #[arg(long)]
    json: bool,
    /// Also write the F0 track as CSV
    #[arg(long)]
    f0_csv: Option<PathBuf>,
    #[command(flatten)]
    f0: F0Args,
}

#[derive(Args)]
struct TrainArgs {
    /// TSV manifest with `path` and `transcription` columns
    manifest: PathBuf,
    /// Output model file
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 0.02)]
    lr: f64,
    #[arg(long, default_value_t = 2000)]
    epochs: usize,
    #[arg(long, default_value_t = 0.0)]
    l2: f64,
    /// Contour samples per clip
    #[arg(long, default_value_t = 20)]
    k: usize,
    /// Linearity threshold used for the reported training accuracy
    #[arg(long, default_value_t = 0.5)]
    beta: f64,
    #[command(flatten)]
    f0: F0Args,
}

#[derive(Args)]
struct ClusterTonesArgs {
    /// TSV manifest with a `path` column
    manifest: PathBuf,
    #[arg(long)]
    model: PathBuf,
    #[arg(long, default_value_t = 0.6)]
    eps: f64,
    #[arg(long, default_value_t = 4)]
    min_samples: usize,
    #[arg(long, default_value_t = 0.5)]
    beta: f64,
    /// Write per-clip embeddings and labels as CSV
    #[arg(long)]
    assignments: Option<PathBuf>,
    #[command(flatten)]
    f0: F0Args,
}

#[derive(Clone, Copy, ValueEnum)]
enum MetricArg {
    Tone2vec,
    Categorical,
}

#[derive(Args)]
struct DialectClusterArgs {
    /// TSV with `region`, `word_id` and `transcription` columns
    corpus: PathBuf,
    /// TSV with `region` and `gold_label` columns
    #[arg(long)]
    gold: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "tone2vec")]
    metric: MetricArg,
    /// `all` or one of sl, cl, ga, wa, uc, wc, mv
    #[arg(long, default_value = "all")]
    linkage: String,
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Directory for matrix, dendrogram and assignment CSVs
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct DialectMdsArgs {
    corpus: PathBuf,
    #[arg(long, value_enum, default_value = "tone2vec")]
    metric: MetricArg,
    #[arg(long, default_value_t = 1)]
    dims: usize,
    /// Output CSV; stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum SynthCommand {
    /// Rendered syllable WAVs plus a manifest
    Tones {
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 15)]
        per_class: usize,
        /// Comma-separated transcriptions
        #[arg(long, default_value = "35,51,214,354", value_delimiter = ',')]
        classes: Vec<String>,
    },
    /// Six-region two-family corpus with gold labels
    Dialect {
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long)]
        seed: u64,
    },
}

/// Why a subcommand stopped.
enum Failure {
    /// Bad input the user can fix: exit 2.
    Usage(String),
    /// Valid input that could not be processed: exit 1.
    Runtime(String),
}

impl From<tonelab::Error> for Failure {
    fn from(e: tonelab::Error) -> Self {
        use tonelab::Error as E;
        match e {
            E::Clip { index, source } => match Failure::from(*source) {
                Failure::Usage(m) => Failure::Usage(format!("clip {index}: {m}")),
                Failure::Runtime(m) => Failure::Runtime(format!("clip {index}: {m}")),
            },
            E::Transcription { .. }
            | E::Parse { .. }
            | E::InvalidArgument(_)
            | E::Model(_)
            | E::Json(_)
            | E::Csv(_)
            | E::MalformedWav(_)
            | E::UnsupportedWav(_) => Failure::Usage(e.to_string()),
            E::Io { ref source, .. } if source.kind() == std::io::ErrorKind::NotFound => Failure::Usage(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("TONELAB_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Usage(format!("TONELAB_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Runtime(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| match cli.command {
        Command::Dist(a) => commands::dist(a),
        Command::Variance(a) => commands::variance(a),
        Command::Transcribe(a) => commands::transcribe(a),
        Command::Train(a) => commands::train(a),
        Command::ClusterTones(a) => commands::cluster_tones(a),
        Command::DialectCluster(a) => commands::dialect_cluster(a),
        Command::DialectMds(a) => commands::dialect_mds(a),
        Command::Synth(c) => commands::synth(c),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
