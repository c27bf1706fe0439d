//! `ctxgraph` command-line frontend. Results go to standard output (or
//! `--output`) as JSON, plot data as CSV.
//!
//! Exit status: 0 success, 1 computation failure or failed suite, 2 input error.

mod commands;
mod input;
mod output;
mod schema;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "ctxgraph",
    version,
    about = "Exclusivity-graph bounds, membership tests, KS sets and Bell boxes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Write the result here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,

    /// Numerical tolerance (default depends on the command).
    #[arg(long, global = true, value_name = "TOL")]
    pub tol: Option<f64>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// α, ϑ and α* of a graph.
    #[command(after_help = schema::BOUNDS)]
    Bounds(GraphArgs),

    /// STAB / TH / QSTAB membership of a probability assignment.
    #[command(after_help = schema::MEMBERSHIP)]
    Membership {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        assignment: AssignmentArgs,
    },

    /// Complement-duality checks: ϑ(G)·ϑ(Ḡ), vertex transitivity, self-complementarity.
    #[command(after_help = schema::DUALITY)]
    Duality(GraphArgs),

    /// Batch suites.
    #[command(subcommand)]
    Suite(SuiteCommand),

    /// Kochen-Specker colorability and operator proofs.
    #[command(subcommand)]
    Ks(KsCommand),

    /// Empirical models on measurement scenarios.
    #[command(subcommand)]
    Scenario(ScenarioCommand),

    /// Bell boxes and communication protocols.
    #[command(name = "box", subcommand)]
    Box(BoxCommand),

    /// CSV tables for plotting.
    #[command(subcommand)]
    Plotdata(PlotCommand),
}

#[derive(Subcommand, Debug)]
pub enum SuiteCommand {
    /// ϑ under cosum, twinning, duplication and partial twinning.
    #[command(after_help = schema::SUITE_OPS)]
    Ops {
        /// Seed for the random partial twinning.
        #[arg(long, required = true)]
        seed: u64,
    },
    /// Vertex-transitive graphs on 10 vertices: ϑ against α, with identifications.
    #[command(after_help = schema::SUITE_CIRCULANT10)]
    Circulant10,
    /// The full acceptance battery.
    #[command(after_help = schema::SUITE_ACCEPTANCE)]
    Acceptance {
        /// Run a single criterion.
        #[arg(long, value_name = "ID")]
        criterion: Option<usize>,
        /// Print a plain-text table instead of JSON.
        #[arg(long)]
        table: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum KsCommand {
    /// {0,1}-colorability of a vector system's orthogonality graph.
    #[command(after_help = schema::KS_CHECK)]
    Check {
        #[command(flatten)]
        source: SourceArgs<KsFamily>,
        /// Pin a vector (by label) to 0 or 1, e.g. --pin A=1. Repeatable.
        #[arg(long, value_name = "LABEL=0|1")]
        pin: Vec<String>,
    },
    /// Operator (multiplicative) proof: line products and the assignment search.
    #[command(after_help = schema::KS_MULTIPLICATIVE)]
    Multiplicative {
        #[command(flatten)]
        source: SourceArgs<ProofFamily>,
    },
}

#[derive(Subcommand, Debug)]
pub enum ScenarioCommand {
    /// Non-disturbance (marginals agree on context overlaps).
    #[command(after_help = schema::SCENARIO_CHECK)]
    Check {
        #[command(flatten)]
        source: SourceArgs<ScenarioFamily>,
    },
    /// Whether a global section (noncontextual model) exists.
    #[command(name = "global-section", after_help = schema::SCENARIO_GLOBAL)]
    GlobalSection {
        #[command(flatten)]
        source: SourceArgs<ScenarioFamily>,
    },
    /// Value of a noncontextuality inequality on a model.
    #[command(after_help = schema::SCENARIO_EVALUATE)]
    Evaluate {
        #[command(flatten)]
        source: SourceArgs<ScenarioFamily>,
        /// n-cycle inequality signs.
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            conflicts_with = "inequality"
        )]
        gamma: Vec<i8>,
        /// Inequality JSON file.
        #[arg(long, value_name = "PATH")]
        inequality: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum BoxCommand {
    /// No-signaling and locality.
    #[command(after_help = schema::BOX_CHECK)]
    Check(BoxArgs),
    /// CHSH value E00 + E01 + E10 − E11.
    #[command(after_help = schema::BOX_VALUE)]
    Chsh(BoxArgs),
    /// Guess-your-neighbour's-input success probability.
    #[command(after_help = schema::BOX_VALUE)]
    Gyni(BoxArgs),
    /// Local-orthogonality sum on two copies.
    #[command(after_help = schema::BOX_LO)]
    Lo(BoxArgs),
    /// One-bit information-causality protocol on two input bits.
    #[command(name = "ic-vandam", after_help = schema::BOX_VANDAM)]
    IcVandam {
        #[command(flatten)]
        box_args: BoxArgs,
        #[arg(long, required = true)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
    },
    /// Nested information-causality protocol for noisy PR_d boxes.
    #[command(name = "ic-nested", after_help = schema::BOX_NESTED)]
    IcNested {
        #[arg(long, default_value_t = 2)]
        d: usize,
        /// Box strength E.
        #[arg(long, default_value_t = 1.0)]
        strength: f64,
        /// Nesting depth.
        #[arg(long, default_value_t = 1)]
        levels: usize,
        #[arg(long, requires = "seed")]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Inner product mod 2 with one communicated bit.
    #[command(name = "ip-protocol", after_help = schema::BOX_IP)]
    IpProtocol {
        /// Alice's bits, e.g. 0110.
        #[arg(long)]
        x: String,
        /// Bob's bits.
        #[arg(long)]
        y: String,
        #[arg(long, required = true)]
        seed: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum PlotCommand {
    /// n, α, ϑ, α*, ϑ/α over a family sweep.
    #[command(name = "theta-alpha", after_help = schema::PLOTDATA)]
    ThetaAlpha {
        #[arg(long, value_enum)]
        family: GraphFamily,
        /// Sizes: list and ranges, e.g. 5,7,9 or 4-12.
        #[arg(long, required = true)]
        n: String,
        #[arg(long, value_delimiter = ',')]
        offsets: Vec<usize>,
        #[arg(long)]
        k: Option<usize>,
    },
}

#[derive(Args, Debug, Clone)]
pub struct GraphArgs {
    /// Graph JSON file.
    #[arg(value_name = "FILE", conflicts_with_all = ["input", "family"])]
    pub file: Option<PathBuf>,
    /// Graph JSON file.
    #[arg(long, value_name = "PATH", conflicts_with = "family")]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub family: Option<GraphFamily>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Circulant offsets, e.g. 1,4.
    #[arg(long, value_delimiter = ',')]
    pub offsets: Vec<usize>,
    /// Subset size for the Johnson graph.
    #[arg(long)]
    pub k: Option<usize>,
    /// G(q, s): subset size.
    #[arg(long)]
    pub q: Option<usize>,
    /// G(q, s): shared elements.
    #[arg(long)]
    pub s: Option<usize>,
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct AssignmentArgs {
    /// Comma-separated probabilities.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub p: Option<Vec<f64>>,
    /// JSON array of probabilities.
    #[arg(long, value_name = "PATH")]
    pub p_file: Option<PathBuf>,
    /// The same probability on every vertex.
    #[arg(long, allow_hyphen_values = true)]
    pub constant: Option<f64>,
}

/// Input file or a built-in instance.
#[derive(Args, Debug, Clone)]
pub struct SourceArgs<F: ValueEnum + Clone + Send + Sync + 'static> {
    #[arg(value_name = "FILE", conflicts_with_all = ["input", "family"])]
    pub file: Option<PathBuf>,
    #[arg(long, value_name = "PATH", conflicts_with = "family")]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub family: Option<F>,
}

#[derive(Args, Debug, Clone)]
pub struct BoxArgs {
    #[command(flatten)]
    pub source: SourceArgs<BoxFamily>,
    /// Outcome count of the PR box.
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    /// Strength E of the noisy PR box E·PR + (1−E)·uniform.
    #[arg(long, default_value_t = 1.0)]
    pub strength: f64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFamily {
    Cycle,
    Path,
    Complete,
    Prism,
    Moebius,
    Circulant,
    Johnson,
    JohnsonGqs,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum KsFamily {
    P33,
    P33Table,
    Ks8,
    Ks10,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProofFamily {
    PeresMermin,
    MerminStar,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScenarioFamily {
    Specker,
    Kcbs,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoxFamily {
    Pr,
    Singlet,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(out) => match output::emit(&out, cli.output.as_deref()) {
            Ok(()) => ExitCode::from(out.status()),
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
