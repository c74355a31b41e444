use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Text,
    Structured,
}

/// Exact computations on resolution graphs, clusters of infinitely near
/// points, valuations and wedge obstructions.
///
/// INPUT arguments are document paths or built-in fixture names such as
/// `A3`, `D4`, `E8` (graphs) and `chain2`, `satellite3`, `two_directions`
/// (clusters); a leading `fixtures/` is accepted.
#[derive(Debug, Parser)]
#[command(name = "wedgekit", version)]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dual graph lattices.
    #[command(subcommand)]
    Graph(GraphCmd),
    /// Clusters of infinitely near points.
    #[command(subcommand)]
    Cluster(ClusterCmd),
    /// Divisorial valuations.
    #[command(subcommand)]
    Val(ValCmd),
    /// Adjacency obstructions.
    #[command(subcommand)]
    Adj(AdjCmd),
    /// Euler characteristic certificates.
    #[command(subcommand)]
    Euler(EulerCmd),
    /// Relative canonical bookkeeping for wedge models.
    #[command(subcommand)]
    Dfd(DfdCmd),
    /// Pair graphs and the verdict store.
    #[command(subcommand)]
    Pair(PairCmd),
    /// Check a document and list every problem found.
    Validate(ValidateArgs),
}

#[derive(Debug, Subcommand)]
pub enum GraphCmd {
    /// Negative definiteness, determinant and sign pattern of M⁻¹.
    Check {
        input: String,
        /// Print the graph in DOT format instead of a report.
        #[arg(long)]
        dot: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum ClusterCmd {
    /// Simulate the blow-ups and report the final model.
    Build {
        input: String,
        #[arg(long)]
        dot: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum ValCmd {
    /// Compare ν_{F_e} with ν_{F_f}.
    Compare { input: String, e: usize, f: usize },
    /// Order of a polynomial along F_e.
    Ord {
        input: String,
        e: usize,
        /// Polynomial in x, y, e.g. "y^2 - x^3".
        #[arg(long)]
        poly: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum AdjCmd {
    /// Valuative obstruction for N_{F_f} ⊂ N_{F_e}, or the returns system
    /// with --returns.
    Obstruct(ObstructArgs),
    /// Valuative verdict for every ordered pair.
    Table { input: String },
}

#[derive(Debug, Args)]
pub struct ObstructArgs {
    pub input: String,
    pub e: Option<usize>,
    pub f: Option<usize>,
    /// Returns profile b_0,...,b_r: solve the returns system instead.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub returns: Option<Vec<i64>>,
    /// Vertex id (graphs) or point index (clusters) of the special component.
    #[arg(long, default_value_t = 0)]
    pub special: u32,
    /// Rule out solutions with a zero coefficient on the special component.
    #[arg(long)]
    pub require_indeterminacy: bool,
}

#[derive(Debug, Subcommand)]
pub enum EulerCmd {
    /// The three partial bounds, the final bound and the certificate.
    Bound {
        input: String,
        #[arg(long, value_delimiter = ',', required = true)]
        coeffs: Vec<u64>,
        #[arg(long)]
        attach: u32,
    },
}

#[derive(Debug, Subcommand)]
pub enum DfdCmd {
    /// Solve for b, verify a supplied b, and run the lifting argument.
    Check {
        input: PathBuf,
        #[arg(long)]
        minimal_target: bool,
        #[arg(long = "assert-b1-lt-1")]
        assert_b1_lt_1: bool,
        #[arg(long)]
        assert_no_lift: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum PairCmd {
    /// Canonical key of a pair graph, with optional store lookup.
    Canon {
        input: String,
        e: Option<usize>,
        f: Option<usize>,
        /// Verdict store: looked up, and the computed verdict is recorded.
        #[arg(long)]
        kb: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(value_enum)]
    pub kind: DocKind,
    pub input: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DocKind {
    Graph,
    Cluster,
    Dfd,
}
