//! `mertens`: identity sweeps, Mertens queries, double sums and growth scans.

mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mertens_core::moebius::DEFAULT_SEGMENT_LEN;

/// Environment variable consulted for the default thread count.
pub const THREADS_ENV: &str = "MERTENS_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "mertens",
    version,
    about = "Möbius/Mertens identities and growth scans"
)]
pub struct Cli {
    /// Worker threads; 1 forces a fully sequential run. Defaults to available parallelism.
    #[arg(long, global = true, env = THREADS_ENV)]
    pub threads: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Write records here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<std::path::PathBuf>,

    /// Entries per sieve segment.
    #[arg(long, global = true, default_value_t = DEFAULT_SEGMENT_LEN)]
    pub segment_len: u64,

    /// Suppress the rate line on standard error.
    #[arg(long, short, global = true)]
    pub quiet: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Naive,
    Blocked,
    /// naive for n ≤ 64, blocked above
    Auto,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the identity sweeps and print a pass/fail table.
    Verify(VerifyArgs),
    /// Print (x, M(x)) for the given points.
    Mertens(MertensArgs),
    /// Evaluate the double sum S(n).
    Doublesum(DoubleSumArgs),
    /// Growth scan of S(n) over an arithmetic progression of n.
    #[command(name = "scan-s")]
    ScanS(ScanSArgs),
    /// Growth scan of D(x) = M(x) − 2M(⌊x/2⌋) over a geometric grid or given points.
    #[command(name = "scan-d")]
    ScanD(ScanDArgs),
    /// Continue a difference scan from a checkpoint file.
    Resume(ResumeArgs),
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Exhaustive bound for the `lemma3_sum` / `lemma4_sum` sweeps over j ≤ m.
    #[arg(long, default_value_t = 400)]
    pub m_max: u64,
    #[arg(long, default_value_t = 100_000)]
    pub meissel_max: u64,
    /// Random (m, j) cases per sum.
    #[arg(long, default_value_t = 1000)]
    pub random: usize,
    #[arg(long, default_value_t = 10_000)]
    pub random_m_max: u64,
    /// Cube bound for the nested floor sweep.
    #[arg(long, default_value_t = 500)]
    pub floor_max: u64,
    #[arg(long, default_value_t = 10_000)]
    pub floor_random: usize,
    #[arg(long, default_value_t = 1000)]
    pub bracket_max: u64,
    #[arg(long, default_value_t = mertens_core::verify::DEFAULT_SEED)]
    pub seed: u64,
    /// Also run the double-sum, main-identity, partial-sum and bridging suites.
    #[arg(long)]
    pub extended: bool,
}

#[derive(Debug, Args)]
pub struct MertensArgs {
    /// Strictly ascending points, comma separated.
    #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
    pub points: Vec<u64>,
    /// Merge the answered records into this checkpoint file.
    #[arg(long)]
    pub checkpoint: Option<std::path::PathBuf>,
}

#[derive(Debug, Args)]
pub struct DoubleSumArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    pub method: MethodArg,
    /// Evaluate with both methods and fail unless they agree.
    #[arg(long, conflicts_with = "method")]
    pub check: bool,
}

#[derive(Debug, Args)]
pub struct ScanSArgs {
    #[arg(long)]
    pub n_min: u64,
    #[arg(long)]
    pub n_max: u64,
    #[arg(long, default_value_t = 1)]
    pub stride: u64,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// Largest grid point.
    #[arg(long)]
    pub x_max: Option<u64>,
    #[arg(long, default_value_t = 12)]
    pub per_decade: u32,
    /// Maximum number of grid points.
    #[arg(long, default_value_t = 10_000)]
    pub budget: usize,
}

#[derive(Debug, Args)]
pub struct ScanDArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    /// Explicit ascending points instead of the geometric grid.
    #[arg(long, value_delimiter = ',', num_args = 1.., conflicts_with = "x_max")]
    pub points: Option<Vec<u64>>,
    /// Record every computed (x, M(x)) here for later `resume`.
    #[arg(long)]
    pub checkpoint: Option<std::path::PathBuf>,
}

#[derive(Debug, Args)]
pub struct ResumeArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long)]
    pub checkpoint: std::path::PathBuf,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                commands::EXIT_USAGE
            } else {
                0
            });
        }
    };
    ExitCode::from(commands::run(&cli))
}
