//! `cnat`: validate, enumerate and transform complete non-ambiguous trees.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 domain failure (invalid
//! input object, failed verification).

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::output::CliError;

#[derive(Debug, Parser)]
#[command(name = "cnat", version, about = "Complete non-ambiguous trees toolkit")]
pub struct Cli {
    /// Print a JSON document instead of human-readable text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Also write a CSV table to PATH (count, fnk, transform).
    #[arg(long, global = true, value_name = "PATH")]
    pub csv: Option<PathBuf>,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true, value_name = "N")]
    pub jobs: Option<usize>,
    /// Run sizes beyond the documented feasibility limits.
    #[arg(long, global = true)]
    pub force: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the four axioms on a matrix file ('-' reads stdin).
    Validate { path: PathBuf },
    /// Print the leaf matrix of a CNM.
    LeafMatrix { path: PathBuf },
    /// Print the associated permutation of a CNM.
    Perm { path: PathBuf },
    /// Print the determinant of a CNM.
    Det { path: PathBuf },
    /// Stream all CNMs of size N, or all over one leaf matrix.
    Enumerate {
        /// Size; ignored when --leaf is given.
        n: Option<usize>,
        /// One-line permutation, e.g. "3 1 2".
        #[arg(long, value_name = "PERM")]
        leaf: Option<String>,
    },
    /// Aggregate counts over all CNMs of size N.
    Count { metric: Metric, n: usize },
    /// Apply one of the bijections to an input file.
    Bijection { direction: Direction, path: PathBuf },
    /// f(n,k): upper-diagonal CNMs whose second diagonal starts with k zeros.
    Fnk {
        n: usize,
        /// Omit for the whole row.
        #[arg(allow_negative_numbers = true)]
        k: Option<i64>,
    },
    /// a(n): tree-like tableaux of size n without an occupied corner.
    A { n: usize },
    /// Inverse binomial transform of the b(.,k) column.
    Transform {
        k: u64,
        /// Largest n surveyed.
        #[arg(long, default_value_t = 7)]
        max_n: usize,
        /// Use the forward transform instead.
        #[arg(long)]
        forward: bool,
    },
    /// Reduce a CNM to upper-diagonal form by row and column swaps.
    Reduce {
        path: PathBuf,
        /// Print the matrix after every swap as comments.
        #[arg(long)]
        snapshots: bool,
    },
    /// Re-apply a swap trace to a matrix, validating every step.
    Replay { matrix: PathBuf, trace: PathBuf },
    /// Recompute the golden fixtures.
    Verify {
        #[arg(long, default_value = "fast")]
        suite: SuiteArg,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Metric {
    #[value(name = "T")]
    Total,
    DetParity,
    BTable,
    UniqueLeaf,
    UdCnm,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::Total => "T",
            Metric::DetParity => "det-parity",
            Metric::BTable => "b-table",
            Metric::UniqueLeaf => "unique-leaf",
            Metric::UdCnm => "ud-cnm",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Direction {
    PermToUdftt,
    UdfttToPerm,
    UdcnmToTlt,
    TltToUdcnm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Fast,
    Full,
    Slow,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cnat: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(CliError::Usage("--jobs must be at least 1".into()));
        }
        pool = pool.num_threads(jobs);
    }
    let pool = pool.build().map_err(|e| CliError::Usage(e.to_string()))?;
    pool.install(|| commands::dispatch(&cli))
}
