use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Polygon spaces with fixed edge lengths: construction, equivalence and
/// verification experiments.
///
/// Edge lengths are decimal numbers, given comma-separated to `--ell`
/// (`--ell 1,1,1,1`) or, for `check`, as positional arguments.
#[derive(Debug, Parser)]
#[command(name = "polymod", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub tolerance: ToleranceArgs,

    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Write the primary output here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ToleranceArgs {
    /// Relative singular-value cutoff for numerical rank.
    #[arg(long, global = true)]
    pub eps_rank: Option<f64>,
    /// Relative tolerance for comparing Gram matrices.
    #[arg(long, global = true)]
    pub eps_gram: Option<f64>,
    /// Relative (to the perimeter) tolerance for edge lengths and alignment residuals.
    #[arg(long, global = true)]
    pub eps_align: Option<f64>,
    /// Tolerance for root finding and for zero sums of signed lengths.
    #[arg(long, global = true)]
    pub eps_root: Option<f64>,
    /// Smallest accepted ratio of the last to the first nonzero singular value.
    #[arg(long, global = true)]
    pub cond_floor: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify edge lengths as Interior, Border or Infeasible.
    Check {
        lengths: Vec<String>,
        #[arg(long)]
        ell: Option<String>,
    },
    /// Construct a polygon.
    Build {
        #[arg(value_enum)]
        kind: BuildKind,
        #[arg(long)]
        ell: String,
        /// Target dimension (`dim`).
        #[arg(long)]
        k: Option<usize>,
        /// Ambient dimension; defaults to 2, or to `k` for `dim`.
        #[arg(long)]
        d: Option<usize>,
        /// Sign pattern such as `+-+-` (`degenerate`).
        #[arg(long)]
        pattern: Option<String>,
    },
    /// Print the dimension of a polygon.
    Dim {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Bend a polygon once, raising its dimension by one.
    Bend {
        #[arg(long = "in")]
        input: PathBuf,
        /// Vertex to bend, 1-based; the first bendable vertex by default.
        #[arg(long)]
        index: Option<usize>,
    },
    /// Decide whether two polygons are equivalent and print the alignment residual.
    Equiv {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long, value_enum, default_value_t = Group::So)]
        group: Group,
    },
    /// Fiber of the polygon's class under the map from `R^d` into `R^{d+1}`.
    Fiber {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        from_d: usize,
    },
    /// Run a verification experiment and print its report.
    Verify {
        #[arg(value_enum)]
        experiment: ExperimentArg,
        #[arg(long)]
        ell: String,
        #[arg(long, default_value_t = 3)]
        d: usize,
        #[arg(long, default_value_t = 500)]
        trials: usize,
        /// Also append a CSV summary row (with header if the file is new).
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Print random polygons, one JSON object per line.
    Sample {
        #[arg(long)]
        ell: String,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BuildKind {
    Planar,
    Degenerate,
    Dim,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Group {
    So,
    O,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExperimentArg {
    DimensionBound,
    DimensionRange,
    Chirality,
    Fiber,
    Stabilization,
    Degenerate,
}
