use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

use commands::Failure;

/// Build, decompose and verify halvings of the complete 3-design.
#[derive(Debug, Parser)]
#[command(name = "tradeforge", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Construct a halving of C(X,3).
    Gen(GenArgs),
    /// Check a collection file against W_tk f = lambda 1.
    Verify(VerifyArgs),
    /// Generate or check a Steiner triple system.
    Sts(StsArgs),
    /// Exact standard kernel basis of W_tk(v).
    Basis(BasisArgs),
    /// Build a single trade.
    Trade(TradeArgs),
    /// Print one of the built-in reference objects.
    Fixture(FixtureArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Ak,
    V10,
    Partition,
    Structured,
    Hillclimb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct OutputOpts {
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t, global = true)]
    pub format: OutputFormat,
    /// Print and read points as 1..=v.
    #[arg(long, global = true)]
    pub one_based: bool,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub method: Method,
    #[arg(long)]
    pub v: u32,
    /// Seed for the hill climb and for --random-circuit.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write the constituent trades as separate stanzas.
    #[arg(long)]
    pub decompose: bool,
    /// Steps per hill-climb attempt, or the AK iteration cap.
    #[arg(long)]
    pub max_iters: Option<u64>,
    /// Hill-climb attempts before giving up.
    #[arg(long)]
    pub restarts: Option<u64>,
    /// Choose among the first N fitting hill-climb candidates only.
    #[arg(long)]
    pub window: Option<usize>,
    /// Worker threads for hill-climb attempts.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Triple system for --method structured (one triple per line).
    #[arg(long)]
    pub sts_file: Option<PathBuf>,
    /// Pair partition for the patched structured case, e.g. "0,1;2,3".
    #[arg(long)]
    pub pairs: Option<String>,
    /// Use a seeded random Eulerian circuit for --method partition.
    #[arg(long)]
    pub random_circuit: bool,
    #[command(flatten)]
    pub output: OutputOpts,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Collection file (text or JSON); `-` reads stdin.
    pub file: PathBuf,
    #[arg(long, default_value_t = 2)]
    pub t: usize,
    /// Check for a t-(v,k,lambda) design instead of a trade.
    #[arg(long)]
    pub lambda: Option<u64>,
    /// Require a halving (simple trade covering every block).
    #[arg(long)]
    pub halving: bool,
    #[arg(long)]
    pub one_based: bool,
    /// Print the report as JSON.
    #[arg(long)]
    pub json: bool,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Debug, Args)]
pub struct StsArgs {
    /// Order of the system to generate.
    #[arg(long, required_unless_present = "check")]
    pub order: Option<u32>,
    /// Verify this triple-system file instead of generating one.
    #[arg(long, conflicts_with = "out")]
    pub check: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub one_based: bool,
}

#[derive(Debug, Args)]
pub struct BasisArgs {
    #[arg(long)]
    pub t: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub v: u32,
    /// Include the row sign-pattern scan in the report.
    #[arg(long)]
    pub check_conjectures: bool,
}

#[derive(Debug, Args)]
pub struct TradeArgs {
    #[command(subcommand)]
    pub kind: TradeCommand,
    #[command(flatten)]
    pub output: OutputOpts,
}

#[derive(Debug, Subcommand)]
pub enum TradeCommand {
    /// (a0-b0)(a1-b1)(a2-b2) for ordered rows a and b.
    Minimal {
        #[arg(long)]
        v: u32,
        #[arg(long, value_delimiter = ',')]
        a: Vec<u32>,
        #[arg(long, value_delimiter = ',')]
        b: Vec<u32>,
    },
    /// Cycle trade on index vertices under the default labelling.
    Cycle {
        #[arg(long)]
        v: u32,
        #[arg(long, value_delimiter = ',')]
        cycle: Vec<usize>,
    },
    /// Volume-10 rotation trade for an index triple.
    V10 {
        #[arg(long)]
        v: u32,
        #[arg(long, value_delimiter = ',')]
        alpha: Vec<usize>,
    },
    /// Companion trade of a block in the lexicographic halving algorithm.
    Companion {
        #[arg(long)]
        v: u32,
        #[arg(long, value_delimiter = ',')]
        block: Vec<u32>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FixtureName {
    Sts7,
    Sts9,
    TenPointPartition,
}

#[derive(Debug, Args)]
pub struct FixtureArgs {
    #[arg(value_enum)]
    pub name: FixtureName,
    #[command(flatten)]
    pub output: OutputOpts,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => commands::gen(a),
        Command::Verify(a) => commands::verify(a),
        Command::Sts(a) => commands::sts(a),
        Command::Basis(a) => commands::basis(a),
        Command::Trade(a) => commands::trade(a),
        Command::Fixture(a) => commands::fixture(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure { code, message }) => {
            if !message.is_empty() {
                eprintln!("tradeforge: {message}");
            }
            ExitCode::from(code)
        }
    }
}
