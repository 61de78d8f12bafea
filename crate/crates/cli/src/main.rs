mod commands;
mod grid;
mod output;
mod repro;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use grid::GridSpec;
use output::Format;

/// Data generator for entanglement distillation over repeater chains.
#[derive(Debug, Parser)]
#[command(name = "distill", version, propagate_version = true)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Output file (written atomically); stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format; defaults to the file extension, else csv.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Worker threads for grid sweeps.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Builtin codes and code-file validation.
    Codes {
        #[command(subcommand)]
        action: CodesAction,
    },
    /// Input-to-output fidelity maps.
    Map {
        #[command(subcommand)]
        target: MapTarget,
    },
    /// Efficiency curves of P1..P4 with their switching points.
    Efficiency(EfficiencyArgs),
    /// Recurrence purification traces or grid sweeps.
    Purify(PurifyArgs),
    /// Purification-then-code scan against pure purification.
    Hybrid(HybridArgs),
    /// Long-run iteration of the untwirled recurrences.
    Converge(ConvergeArgs),
    /// Regenerate every dataset into a timestamped directory with a manifest.
    Repro(ReproArgs),
}

#[derive(Debug, Subcommand)]
pub enum CodesAction {
    /// Registry summary.
    List,
    /// Structural checks on a code's generators and logicals.
    Validate {
        /// Code file (name=/n=/k=/d= header, then H:, X:, Z: sections).
        #[arg(long)]
        file: Option<PathBuf>,
        /// Builtin code to check; all builtins when neither option is given.
        #[arg(long)]
        code: Option<String>,
        /// Also verify the stated distance exhaustively.
        #[arg(long)]
        distance: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum MapTarget {
    /// One decoding round of a single code.
    Qec {
        #[arg(long, default_value = "933")]
        code: String,
        /// Use a code file instead of a builtin code.
        #[arg(long, conflicts_with = "code")]
        code_file: Option<PathBuf>,
        #[arg(long)]
        grid: Option<GridSpec>,
        /// Emit the corrected-error counts per weight instead of the map.
        #[arg(long)]
        enumerator: bool,
    },
    /// Three rounds over a repeater chain.
    Chain {
        #[arg(long, default_value_t = 1)]
        repeaters: u32,
        /// Three comma-separated rounds, each a code name or `skip`.
        #[arg(long, default_value = "913,923,933")]
        rounds: String,
        #[arg(long)]
        grid: Option<GridSpec>,
    },
}

#[derive(Debug, Args)]
pub struct EfficiencyArgs {
    /// Repeater counts (comma separated).
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub repeaters: Vec<u32>,
    #[arg(long, value_delimiter = ',', default_value = "P1,P2,P3,P4")]
    pub protocols: Vec<String>,
    /// Add the envelope value and active plan per grid point.
    #[arg(long)]
    pub envelope: bool,
    /// Emit the switching-point table instead of the curves.
    #[arg(long)]
    pub switchpoints: bool,
    #[arg(long)]
    pub grid: Option<GridSpec>,
}

#[derive(Debug, Args)]
pub struct PurifyArgs {
    #[arg(long, default_value = "dejmps")]
    pub protocol: String,
    /// Twirl after every round.
    #[arg(long, overrides_with = "no_twirl")]
    pub twirl: bool,
    /// Keep the biased distribution between rounds (default).
    #[arg(long, overrides_with = "twirl")]
    pub no_twirl: bool,
    #[arg(long, default_value_t = 5)]
    pub rounds: usize,
    /// Sweep depolarizing inputs over a grid (default 0:1:10000).
    #[arg(long, conflicts_with_all = ["fin", "input_dist"])]
    pub grid: Option<GridSpec>,
    /// Trace a single depolarizing input of this fidelity.
    #[arg(long, conflicts_with = "input_dist")]
    pub fin: Option<f64>,
    /// Trace an explicit input `p_i,p_x,p_y,p_z`.
    #[arg(long)]
    pub input_dist: Option<String>,
}

#[derive(Debug, Args)]
pub struct HybridArgs {
    #[arg(long, default_value = "933")]
    pub code: String,
    /// Input grid (default 0.501:1:10000).
    #[arg(long)]
    pub grid: Option<GridSpec>,
    /// Minimum hashing yield for the efficiency baseline.
    #[arg(long, default_value_t = distill::hybrid::DEFAULT_BASELINE_YIELD)]
    pub baseline: f64,
    /// Emit the checkpoint list instead of the full scan.
    #[arg(long)]
    pub checkpoints: bool,
}

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    #[arg(long, default_value = "bbpssw")]
    pub protocol: String,
    /// Start `a,b,c,d`.
    #[arg(long, default_value = "0.6,0.1333,0.1333,0.1334")]
    pub start: String,
    #[arg(long, default_value_t = 50)]
    pub n: usize,
    /// Print the identity checks to stderr; exit non-zero if any fails.
    #[arg(long)]
    pub check: bool,
}

#[derive(Debug, Args)]
pub struct ReproArgs {
    /// Parent directory (default: $DISTILL_OUT_DIR, else the current directory).
    #[arg(long, env = "DISTILL_OUT_DIR")]
    pub dir: Option<PathBuf>,
}

fn run(cli: Cli) -> anyhow::Result<()> {
    if let Some(jobs) = cli.common.jobs {
        anyhow::ensure!(jobs > 0, "--jobs must be at least 1");
        rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global()?;
    }
    let c = &cli.common;
    match cli.command {
        Command::Codes { action } => commands::codes(action, c),
        Command::Map { target } => commands::map(target, c),
        Command::Efficiency(a) => commands::efficiency(a, c),
        Command::Purify(a) => commands::purify(a, c),
        Command::Hybrid(a) => commands::hybrid(a, c),
        Command::Converge(a) => commands::converge(a, c),
        Command::Repro(a) => repro::run(a, c),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
