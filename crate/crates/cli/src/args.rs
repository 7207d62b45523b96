use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use scg_core::derive::GraphKind;

#[derive(Debug, Parser)]
#[command(
    name = "scg-cli",
    version,
    about = "Extract and analyze semantic code graphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// Options shared by the commands that read a graph directory.
#[derive(Debug, Clone, Args)]
pub struct DataArgs {
    /// Directory holding `.semanticgraph` files.
    pub data: PathBuf,
    /// Graph views to analyze, comma separated: SCG, CCN, CG.
    #[arg(long, value_delimiter = ',', default_value = "SCG")]
    pub graph: Vec<GraphKind>,
    /// Only load files whose source uri matches this glob.
    #[arg(long)]
    pub include: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Extract graphs from a Java source tree.
    Generate {
        project: PathBuf,
        /// Output directory [default: <project>/.semanticgraph].
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print every diagnostic to stderr.
        #[arg(long, short)]
        verbose: bool,
    },
    /// Structure metrics and node/edge distributions.
    Summary(DataArgs),
    /// Top entities per ranking metric plus the combined ranking.
    Crucial {
        #[command(flatten)]
        data: DataArgs,
        /// Rows per table.
        #[arg(short, long, default_value_t = 10)]
        k: usize,
        /// Limit the output to one metric (or "combined").
        #[arg(long)]
        metric: Option<String>,
    },
    /// Methods that use largely the same symbols.
    Similar {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, default_value_t = scg_core::similar::DEFAULT_MIN_SHARED)]
        min_shared: usize,
        #[arg(long, default_value_t = scg_core::similar::DEFAULT_MIN_PERCENT)]
        min_percent: u32,
        /// Print at most this many pairs.
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Community structure as a partitioning suggestion.
    Partition {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1.0)]
        resolution: f64,
        #[arg(long, default_value_t = 2.0)]
        declaration_weight: f64,
        /// Also write a GraphML file with a `community` node attribute.
        #[arg(long)]
        graphml: Option<PathBuf>,
    },
    /// Count nodes grouped by a property, e.g. local variables per file.
    Count {
        #[command(flatten)]
        data: DataArgs,
        /// Node kind filter, e.g. VARIABLE.
        #[arg(long)]
        kind: Option<String>,
        /// Only nodes with isLocal=true.
        #[arg(long)]
        local: bool,
        #[arg(long, default_value = "file")]
        group_by: String,
        #[arg(long, default_value_t = 10)]
        top: usize,
    },
    /// Write a graph view in a third-party format.
    Export {
        data: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "SCG")]
        graph: Vec<GraphKind>,
        #[arg(long)]
        include: Option<String>,
        /// graphml, gdf, dot, csv or jsonl.
        #[arg(long, default_value = "graphml")]
        to: String,
        /// Output directory; one file (or csv pair) per graph view.
        #[arg(long)]
        out: PathBuf,
    },
    /// Serve read-only JSON queries over HTTP.
    Serve {
        data: PathBuf,
        #[arg(long)]
        include: Option<String>,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        #[arg(long, default_value_t = 8080)]
        port: u16,
    },
}
