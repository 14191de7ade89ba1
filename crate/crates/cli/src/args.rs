//! Command-line definitions.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bench::Method;

#[derive(Debug, Parser)]
#[command(
    name = "twt-hnn",
    version,
    about = "Schedule preemptible jobs on identical machines for minimum total weighted tardiness"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Base RNG seed.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Worker threads (falls back to TWT_HNN_THREADS, then all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Output file or directory, depending on the subcommand.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Restrict bench outputs to one format (default: both).
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate random instance files plus a seed manifest.
    Gen(GenArgs),
    /// Solve one instance with a chosen method and print its TWT.
    Solve(SolveArgs),
    /// Run the benchmark harness over generated batches.
    Bench(BenchArgs),
    /// Check a schedule file against an instance file.
    Validate(ValidateArgs),
    /// Exact minimum TWT for a small instance.
    Oracle(OracleArgs),
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Number of jobs per instance.
    #[arg(long)]
    pub jobs: usize,

    /// Number of instances to generate.
    #[arg(long, default_value_t = 1)]
    pub count: usize,

    /// Upper bound on job sizes (and lower bound on deadline slack).
    #[arg(long, default_value_t = 10)]
    pub c1: u64,

    /// Upper bound on integer weights.
    #[arg(long, default_value_t = 5)]
    pub c2: u64,

    /// Machine count as a fraction of the job count.
    #[arg(long, default_value_t = 0.25)]
    pub ratio: f64,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// hnn, edd, wspt, lwpf, lbs, random or oracle.
    #[arg(long)]
    pub method: Method,

    /// Restart budget for the hnn method.
    #[arg(long, default_value_t = 1000)]
    pub restarts: usize,

    /// Repeat budget for the random method.
    #[arg(long, default_value_t = 1000)]
    pub repeats: usize,

    /// Horizon override for the oracle method.
    #[arg(long)]
    pub horizon: Option<usize>,

    /// Solver configuration JSON (flags override nothing in it except the
    /// restart budget and seed when given explicitly).
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Instance file.
    pub instance: PathBuf,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Job counts, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [5usize, 10, 20, 25, 50, 75, 100])]
    pub sizes: Vec<usize>,

    /// Instances per job count.
    #[arg(long, default_value_t = 100)]
    pub count: usize,

    /// Methods to run, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = Method::DEFAULT)]
    pub methods: Vec<Method>,

    /// Restart budget for the hnn method.
    #[arg(long, default_value_t = 1000)]
    pub restarts: usize,

    /// Repeat budget for the random baseline.
    #[arg(long, default_value_t = 1000)]
    pub random_repeats: usize,

    #[arg(long, default_value_t = 10)]
    pub c1: u64,

    #[arg(long, default_value_t = 5)]
    pub c2: u64,

    #[arg(long, default_value_t = 0.25)]
    pub ratio: f64,

    /// Also emit an SVG chart of mean TWT per method.
    #[arg(long)]
    pub svg: bool,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Instance file.
    pub instance: PathBuf,

    /// Schedule file.
    pub schedule: PathBuf,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    /// Slot horizon (default: derived length plus the largest job).
    #[arg(long)]
    pub horizon: Option<usize>,

    /// Instance file.
    pub instance: PathBuf,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}
