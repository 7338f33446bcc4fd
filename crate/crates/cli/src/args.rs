use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(name = "cheaptalk", version, about = "Solve, sweep, verify and simulate cheap-talk quantizer equilibria")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute one equilibrium and its certificate
    Solve(SolveArgs),
    /// Tabulate solver outputs over a parameter grid (CSV)
    Sweep(SweepArgs),
    /// Re-certify a result document and cross-check its cost by Monte Carlo
    Verify(VerifyArgs),
    /// Run Lloyd or fixed-point dynamics from an initial partition
    Dynamics(DynamicsArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SourceKind {
    Exp,
    Gauss,
}

#[derive(Args, Debug, Clone)]
pub struct SourceArgs {
    /// Source distribution
    #[arg(long, value_enum)]
    pub source: SourceKind,
    /// Exponential rate λ
    #[arg(long)]
    pub rate: Option<f64>,
    /// Gaussian mean μ
    #[arg(long)]
    pub mean: Option<f64>,
    /// Gaussian standard deviation σ
    #[arg(long)]
    pub std: Option<f64>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Solver {
    /// Exponential backward recursion (Lambert W)
    ClosedForm,
    /// Exponential equal-length bins of length l*, truncated at --depth edges
    Infinite,
    /// Gaussian two-bin equation
    TwoBin,
    /// Gaussian damped fixed-point iteration on N-1 interior edges
    FixedPoint,
    /// Gaussian truncated infinite ladder
    Ladder,
}

#[derive(Args, Debug)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write to this file instead of standard output
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub bias: f64,
    /// Number of bins N (ignored by the infinite and ladder solvers)
    #[arg(long, default_value_t = 2)]
    pub bins: usize,
    /// Defaults to closed-form for exponential, two-bin or fixed-point for Gaussian
    #[arg(long, value_enum)]
    pub solver: Option<Solver>,
    /// Truncation depth K for infinite equilibria
    #[arg(long, default_value_t = 64)]
    pub depth: usize,
    /// Edges next to the truncation excluded from the ladder certificate
    #[arg(long, default_value_t = 5)]
    pub margin: usize,
    #[arg(long, default_value_t = 0.5)]
    pub damping: f64,
    #[arg(long, default_value_t = 100_000)]
    pub max_iter: usize,
    /// Edge-change tolerance for iterative solvers
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Residual tolerance of the certificate
    #[arg(long, default_value_t = 1e-8)]
    pub cert_tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Table {
    /// Largest constructible bin count and the negative-bias bound, per bias
    MaxBins,
    /// One solve per (bias, bins) point
    Solve,
    /// Exponential cost ladder J^{d,N} with excess over J^{d,∞}
    Ladder,
    /// Exponential fixed-point length l* and J^{d,∞}, per bias
    FixedPoint,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long, value_enum)]
    pub table: Table,
    /// Explicit bias values, comma separated
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub bias: Vec<f64>,
    /// Evenly spaced bias grid: first value
    #[arg(long, allow_hyphen_values = true)]
    pub bias_from: Option<f64>,
    /// Evenly spaced bias grid: last value
    #[arg(long, allow_hyphen_values = true)]
    pub bias_to: Option<f64>,
    /// Evenly spaced bias grid: number of points
    #[arg(long)]
    pub bias_steps: Option<usize>,
    /// Bin counts, comma separated or as a range `lo..=hi`
    #[arg(long, default_value = "2")]
    pub bins: String,
    /// Cap on the bin count searched by the max-bins table
    #[arg(long, default_value_t = 64)]
    pub max_bins_cap: usize,
    #[arg(long, default_value_t = 1e-8)]
    pub cert_tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Result document written by `solve`
    #[arg(long)]
    pub input: PathBuf,
    /// Seed for the Monte Carlo cross-check
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: usize,
    /// Residual tolerance; defaults to the one stored in the document
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum MethodArg {
    Lloyd,
    FixedPoint,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitKind {
    /// Equal lengths --width starting at the lower support edge (exponential)
    /// or centred on the mean (Gaussian)
    Equal,
    /// Sorted uniforms between the 0.001 and 0.999 quantiles
    Random,
}

#[derive(Args, Debug)]
pub struct DynamicsArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub bias: f64,
    #[arg(long)]
    pub bins: usize,
    #[arg(long, value_enum, default_value = "lloyd")]
    pub method: MethodArg,
    #[arg(long, default_value_t = 0.5)]
    pub damping: f64,
    #[arg(long, value_enum, default_value = "random")]
    pub init: InitKind,
    /// Bin width for --init equal
    #[arg(long, default_value_t = 1.0)]
    pub width: f64,
    /// Number of random starts; more than one reports a basin summary
    #[arg(long, default_value_t = 1)]
    pub inits: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = 100_000)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
