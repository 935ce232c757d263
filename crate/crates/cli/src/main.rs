use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

#[derive(Parser, Debug)]
#[command(name = "reachckt", version, about = "Monotone circuits for directed reachability")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a circuit and write it with its depth ledger.
    Build(BuildArgs),
    /// Evaluate a circuit on one graph.
    Eval {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long)]
        graph: PathBuf,
    },
    /// Compare a single-output circuit against breadth-first search.
    Verify(VerifyArgs),
    /// Generate or check covering families.
    Family {
        #[command(subcommand)]
        command: FamilyCommand,
    },
    /// Depth ledger from the stage formulas, without building.
    Predict(PredictArgs),
    /// Depth, gate count and structural validation of a circuit file.
    Stats {
        #[arg(long)]
        circuit: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum BuildMode {
    Squaring,
    Exact,
    Explicit,
    Theorem,
}

#[derive(Args, Debug)]
pub struct BuildArgs {
    #[arg(long, value_enum)]
    mode: BuildMode,
    #[arg(long)]
    n: usize,
    /// Length budget; defaults to n-1 where it is optional.
    #[arg(long)]
    l: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Sampled families tried per level (theorem mode).
    #[arg(long, default_value_t = 10)]
    attempts: u64,
    /// Accept families validated only by random trials when the exact check
    /// is over budget (theorem mode).
    #[arg(long)]
    allow_sampled: bool,
    #[arg(long)]
    out: PathBuf,
    /// Ledger CSV path; defaults to `<out>.csv`.
    #[arg(long)]
    ledger: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum VerifyMode {
    Exhaustive,
    Random,
    Planted,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    circuit: PathBuf,
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum)]
    mode: VerifyMode,
    #[arg(long, default_value_t = 10_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Restrict to promise instances: no path, or a path of length at most l.
    #[arg(long)]
    l: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum FamilyCommand {
    /// The affine-plane family for n points.
    Plane {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sample a family and validate it, retrying with derived seeds.
    Sample(SampleArgs),
    /// Check the covering condition of a family file.
    Check(CheckArgs),
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    s: usize,
    #[arg(long)]
    l: usize,
    #[arg(long)]
    d: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10)]
    attempts: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum CheckMode {
    Exact,
    Sampled,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[arg(long)]
    file: PathBuf,
    #[arg(long, value_enum)]
    mode: CheckMode,
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest number of d-subsets the exact check may visit.
    #[arg(long)]
    budget: Option<u128>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum PredictModeArg {
    Squaring,
    Explicit,
    Theorem,
}

#[derive(Args, Debug)]
pub struct PredictArgs {
    #[arg(long, value_enum)]
    mode: PredictModeArg,
    /// A decimal number or a power of two written `2^E`.
    #[arg(long, required_unless_present = "trend")]
    n: Option<String>,
    #[arg(long)]
    l: Option<String>,
    /// Ratio of predicted depth to (log2 n)^2 over n = 2^10 .. 2^1024.
    #[arg(long, conflicts_with_all = ["n", "l"])]
    trend: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Build(a) => commands::build(&a),
        Command::Eval { circuit, graph } => commands::eval(&circuit, &graph),
        Command::Verify(a) => commands::verify(&a),
        Command::Family { command } => match command {
            FamilyCommand::Plane { n, out } => commands::family_plane(n, &out),
            FamilyCommand::Sample(a) => commands::family_sample(&a),
            FamilyCommand::Check(a) => commands::family_check(&a),
        },
        Command::Predict(a) => commands::predict(&a),
        Command::Stats { circuit } => commands::stats(&circuit),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            commands::exit_code_for(&err)
        }
    }
}
