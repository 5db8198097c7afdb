//! `qpi`: construct, validate, simulate, and analyze interpolated quantum
//! polar / Reed-Muller CSS codes on Pauli channels.
//!
//! Exit codes: 0 success (including "no valid α" in a sweep), 2 argument or
//! input-validation errors, 3 I/O errors.

mod commands;
mod csvio;
mod manifest;
mod settings;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use qpi_core::construction::ConstructionMethod;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, parameters, or input file contents (exit 2).
    Usage(String),
    /// Filesystem failures (exit 3).
    Io(String),
}

#[derive(Parser)]
#[command(
    name = "qpi",
    version,
    about = "Interpolated quantum polar / Reed-Muller CSS codes: construction, SCL-C decoding, Monte Carlo evaluation",
    long_about = "Constructs α-interpolated quantum polar / quantum Reed-Muller CSS codes for \
                  Pauli channels with independent equal-XZ noise, checks their validity, \
                  estimates logical X error rates under SC/SCL/SCL-C syndrome decoding, sweeps \
                  the interpolation parameter, and reports structural metrics (mixing factor, \
                  frozen-set overlap fractions, automorphism-group sizes).\n\n\
                  CSV schemas (first line of every output file carries `# schema=<id>`):\n  \
                  qpi.sim.v1:     q,alpha,n,k1,k2,L,coset,trials,failures,rate,ci_lo,ci_hi,seed\n  \
                  qpi.sweep.v1:   sim columns plus `valid` and `is_alpha_star`\n  \
                  qpi.analyze.v1: alpha,q,n,k1,k2,mixing_factor,f_polar,f_rm,decreasing,profile,aut_size\n  \
                  qpi.channel.v1: index,p_err,bhattacharyya\n\n\
                  Every invocation writes `<out>.manifest.json` recording parameters, seed, \
                  version, timestamps, and output paths. The worker count is capped by \
                  --threads, the config key `threads`, or QPI_THREADS, in that order."
)]
struct Cli {
    /// Optional key=value config file; flags override its values.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Cap on worker threads (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Polar,
    Rm,
}

impl std::fmt::Display for MethodArg {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MethodArg::Polar => write!(f, "polar"),
            MethodArg::Rm => write!(f, "rm"),
        }
    }
}

impl From<MethodArg> for ConstructionMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Polar => ConstructionMethod::PolarInterpolated,
            MethodArg::Rm => ConstructionMethod::ReedMuller,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum OnOff {
    On,
    Off,
}

impl From<OnOff> for bool {
    fn from(v: OnOff) -> bool {
        v == OnOff::On
    }
}

#[derive(clap::Args)]
pub struct ConstructArgs {
    /// Transform order; blocklength is N = 2^n.
    #[arg(long)]
    pub n: usize,
    /// Bit-flip classical dimension.
    #[arg(long)]
    pub k1: usize,
    /// Phase-flip classical dimension.
    #[arg(long)]
    pub k2: usize,
    /// Equal-XZ noise parameter.
    #[arg(long, default_value_t = 0.0)]
    pub q: f64,
    /// Interpolation scale in [0, 1]; α = 0 selects the Reed-Muller ranking.
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value_t = MethodArg::Polar)]
    pub method: MethodArg,
    /// Quantization size for the channel approximation (default 256).
    #[arg(long)]
    pub mu: Option<usize>,
    /// Output spec JSON path.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(clap::Args)]
pub struct SimulateArgs {
    /// Spec JSON produced by `construct`.
    #[arg(long)]
    pub spec: PathBuf,
    /// Monte Carlo trials (default 10000).
    #[arg(long)]
    pub trials: Option<u64>,
    /// SCL list size (default 16).
    #[arg(long)]
    pub list_size: Option<usize>,
    /// Master seed (default 0).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Coset aggregation (default on).
    #[arg(long, value_enum)]
    pub coset: Option<OnOff>,
    /// Result CSV; one row is appended per invocation.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(clap::Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k1: usize,
    #[arg(long)]
    pub k2: usize,
    #[arg(long)]
    pub q: f64,
    /// Comma-separated α grid, e.g. `0.41,1.0`.
    #[arg(long, conflicts_with = "random_alphas")]
    pub alphas: Option<String>,
    /// Draw this many α values uniformly from (0, 1] with the sweep seed.
    #[arg(long)]
    pub random_alphas: Option<usize>,
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long)]
    pub list_size: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub mu: Option<usize>,
    #[arg(long, value_enum)]
    pub coset: Option<OnOff>,
    /// Stop an entry early after this many failures (chunk-aligned).
    #[arg(long)]
    pub max_failures: Option<u64>,
    /// Sweep CSV (overwritten).
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(clap::Args)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub spec: PathBuf,
    /// α = 1 reference spec for f_polar.
    #[arg(long)]
    pub ref_polar: Option<PathBuf>,
    /// Reed-Muller reference spec for f_rm.
    #[arg(long)]
    pub ref_rm: Option<PathBuf>,
    /// Metrics CSV (overwritten).
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(clap::Args)]
pub struct ChannelArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub q: f64,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long)]
    pub mu: Option<usize>,
    /// Per-index channel parameter CSV (overwritten).
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Build a code spec and write it as JSON.
    Construct(ConstructArgs),
    /// Estimate the logical X error rate of a spec; appends one CSV row.
    Simulate(SimulateArgs),
    /// Build and evaluate codes over an α grid; reports α*.
    Sweep(SweepArgs),
    /// Structural metrics: mixing factor, overlap fractions, automorphisms.
    Analyze(AnalyzeArgs),
    /// Per-index virtual-channel parameters for BSC(αq).
    Channel(ChannelArgs),
}

fn run() -> Result<(), CliError> {
    let cli = Cli::parse();
    let cfg = settings::FileConfig::load(cli.config.as_deref())?;
    let threads = settings::resolve_threads(cli.threads, &cfg)?;
    qpi_core::simulator::configure_threads(threads);

    match &cli.command {
        Command::Construct(args) => commands::construct(args, &cfg),
        Command::Simulate(args) => commands::simulate(args, &cfg),
        Command::Sweep(args) => commands::sweep(args, &cfg),
        Command::Analyze(args) => commands::analyze(args, &cfg),
        Command::Channel(args) => commands::channel(args, &cfg),
    }
}

fn main() {
    match run() {
        Ok(()) => {}
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(2);
        }
        Err(CliError::Io(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(3);
        }
    }
}
