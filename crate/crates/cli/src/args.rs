use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use coarsegraph::graph::io::parse_rational;
use coarsegraph::Rational;

#[derive(Debug, Parser)]
#[command(
    name = "coarsegraph",
    version,
    about = "Constructions, fat minor searches and certificate checks on finite graphs"
)]
pub struct Cli {
    /// Print a single JSON report on stdout.
    #[arg(long, global = true)]
    pub json: bool,

    /// Worker threads. Verdicts and certificates do not depend on it.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: u16,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a graph family and write it with its landmark labels.
    Construct(ConstructArgs),
    /// Check a model certificate against a host graph.
    VerifyModel(VerifyModelArgs),
    /// Search for a fat minor model of a pattern.
    FindFatMinor(FindArgs),
    /// Turn a 3-fat model in the k-th power into a k-fat model in the graph.
    Inflate(InflateArgs),
    /// Merge connected sets until they are pairwise far apart.
    MergeSets(MergeArgs),
    /// Check a vertex map between two graphs against a constant.
    CheckQi(CheckQiArgs),
    /// Emit the identity map from a graph into its k-th power.
    PowerQi(PowerQiArgs),
    /// Build, validate and measure tree decompositions.
    #[command(subcommand)]
    TreeDecomp(TreeDecompCommand),
    /// Search for pairwise far paths between two vertex sets.
    SpreadPaths(SpreadArgs),
    /// Build the fatness-2 model of the two-clique pattern in an assembly.
    #[command(name = "witness-2fat")]
    Witness(WitnessArgs),
    /// Cross-check fat minor searches in a graph and in its power.
    #[command(name = "pipeline-theorem13")]
    Pipeline(PipelineArgs),
    /// Bundle inputs, certificate, verdict and hashes into one document.
    #[command(subcommand)]
    Certify(CertifyCommand),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    TreeLeafPath,
    NGadget,
    H,
    G,
}

#[derive(Debug, Clone, Args)]
pub struct FamilyParams {
    pub family: Family,

    /// Comma-separated: depth | depth,path | clique | clique,depth,path,subdivision,connector
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub params: Vec<u64>,

    /// Assembly scale for `g`, instead of --params.
    #[arg(long, conflicts_with = "params")]
    pub q: Option<u32>,

    /// Refuse constructions with more vertices than this.
    #[arg(long, default_value_t = coarsegraph::constructions::DEFAULT_VERTEX_BUDGET)]
    pub max_vertices: usize,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[command(flatten)]
    pub family: FamilyParams,

    #[arg(long)]
    pub out: PathBuf,

    #[arg(long)]
    pub labels: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyModelArgs {
    #[arg(long)]
    pub graph: PathBuf,

    #[arg(long)]
    pub cert: PathBuf,

    /// Fatness to check; defaults to the certificate's.
    #[arg(long, value_parser = rational)]
    pub k: Option<Rational>,
}

#[derive(Debug, Args)]
pub struct FindArgs {
    #[arg(long)]
    pub graph: PathBuf,

    /// k1..k5, p3, p4, c4, c5, or a graph file.
    #[arg(long)]
    pub pattern: String,

    #[arg(long, value_parser = rational)]
    pub k: Rational,

    /// Search node expansions.
    #[arg(long, default_value_t = 10_000_000)]
    pub budget: u64,

    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct InflateArgs {
    #[arg(long)]
    pub graph: PathBuf,

    /// Model certificate in the k-th power graph.
    #[arg(long)]
    pub cert: PathBuf,

    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub k: u64,

    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MergeArgs {
    #[arg(long)]
    pub graph: PathBuf,

    /// JSON array of vertex id arrays.
    #[arg(long)]
    pub sets: PathBuf,

    #[arg(long, value_parser = rational)]
    pub eps: Rational,

    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckQiArgs {
    #[arg(long)]
    pub domain: PathBuf,

    #[arg(long)]
    pub codomain: PathBuf,

    #[arg(long)]
    pub map: PathBuf,
}

#[derive(Debug, Args)]
pub struct PowerQiArgs {
    #[arg(long)]
    pub graph: PathBuf,

    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub k: u64,

    /// Where to write the power graph.
    #[arg(long)]
    pub power_out: Option<PathBuf>,

    /// Where to write the map certificate.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum TreeDecompCommand {
    /// Decompose a constructed family.
    Build {
        #[command(flatten)]
        family: FamilyParams,

        #[arg(long)]
        out: Option<PathBuf>,

        /// Also write the constructed graph.
        #[arg(long)]
        graph_out: Option<PathBuf>,
    },
    Validate {
        #[arg(long)]
        graph: PathBuf,

        #[arg(long)]
        td: PathBuf,
    },
    Width {
        #[arg(long)]
        td: PathBuf,
    },
    /// Exact treewidth for small graphs.
    Exact {
        #[arg(long)]
        graph: PathBuf,

        #[arg(long, default_value_t = coarsegraph::treedecomp::EXACT_DEFAULT_CAP)]
        cap: usize,
    },
}

#[derive(Debug, Clone, Args)]
pub struct SpreadQueryArgs {
    #[arg(long)]
    pub graph: PathBuf,

    /// Label table to resolve --s-labels and --t-labels against.
    #[arg(long)]
    pub labels: Option<PathBuf>,

    /// A label name, or comma-separated vertex ids.
    #[arg(long, default_value = "S")]
    pub s_labels: String,

    #[arg(long, default_value = "T")]
    pub t_labels: String,

    /// Number of paths.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub k: u64,

    /// Required pairwise distance.
    #[arg(long)]
    pub dist: u64,
}

#[derive(Debug, Args)]
pub struct SpreadArgs {
    #[command(flatten)]
    pub query: SpreadQueryArgs,

    #[arg(long, default_value_t = 10_000_000)]
    pub budget: u64,

    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Check this witness instead of searching.
    #[arg(long, conflicts_with_all = ["out"])]
    pub check: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AssemblyChoice {
    #[arg(long, required_unless_present = "params")]
    pub q: Option<u32>,

    /// clique,depth,path,subdivision,connector
    #[arg(long, value_delimiter = ',', num_args = 1.., conflicts_with = "q")]
    pub params: Vec<u64>,
}

#[derive(Debug, Args)]
pub struct WitnessArgs {
    #[command(flatten)]
    pub assembly: AssemblyChoice,

    /// Check the rebuilt assembly equals this graph file.
    #[arg(long)]
    pub graph: Option<PathBuf>,

    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PipelineArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub k: u64,

    #[arg(long)]
    pub pattern: String,

    #[arg(long)]
    pub host: PathBuf,

    /// Expansions for each of the two searches.
    #[arg(long, default_value_t = 10_000_000)]
    pub budget: u64,

    /// Where to write the inflated model, when there is one.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum CertifyCommand {
    Model {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        cert: PathBuf,
        #[arg(long, value_parser = rational)]
        k: Option<Rational>,
        #[arg(long)]
        out: PathBuf,
    },
    QiMap {
        #[arg(long)]
        domain: PathBuf,
        #[arg(long)]
        codomain: PathBuf,
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    TreeDecomposition {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        td: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    SpreadPaths {
        #[command(flatten)]
        query: SpreadQueryArgs,
        #[arg(long)]
        witness: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// A model certificate checked at fatness 2.
    #[command(name = "witness-2fat")]
    Witness {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        cert: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-run the check recorded in a bundle and compare.
    Recheck {
        #[arg(long)]
        bundle: PathBuf,
    },
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).ok_or_else(|| format!("`{s}` is not an integer or num/den"))
}
