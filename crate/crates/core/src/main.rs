use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use prolim::bisystem::Window;

mod cli;

#[derive(Parser)]
#[command(name = "prolim", version, about = "Exact limits, derived limits and lim/colim interchange for finitely generated abelian groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    io: Io,
}

#[derive(Args, Clone)]
pub struct Io {
    /// Input JSON file (stdin when omitted).
    #[arg(long = "in", global = true, value_name = "FILE")]
    input: Option<PathBuf>,
    /// Output JSON file (stdout when omitted).
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Bisystem window `A,B`.
    #[arg(long, global = true, value_name = "A,B")]
    window: Option<Window>,
    /// Truncation depth.
    #[arg(long, global = true)]
    depth: Option<usize>,
    /// Seed for randomized corpora.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Smith and Hermite normal forms of an integer matrix.
    Snf,
    /// Integral homology and cohomology of a simplicial complex.
    Homology {
        /// Top degree (defaults to the dimension).
        #[arg(long)]
        dim: Option<usize>,
    },
    /// lim, lim^1, lim^1_fg and the shift-map check of a tower.
    Tower,
    /// Derived limits of a diagram over a finite poset, up to `--depth` (default 3).
    Posetlim,
    /// Nerve of a finite cover and its homology.
    Nerve,
    /// The comparison map colim lim -> lim colim on a window.
    Bisystem,
    /// Mapping cylinder of a simplicial map.
    Cylinder,
    /// Finite mapping telescope.
    Telescope,
    /// Surjectivity of relative cohomology onto the pullback.
    PullbackCheck,
    /// Run a built-in scenario.
    Scenario(ScenarioArgs),
    /// Milnor-sequence verification or a randomized property corpus.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScenarioName {
    Solenoid,
    Telescope,
    NestedFree,
    Alexandroff,
    PPower,
    All,
}

#[derive(Args, Clone)]
pub struct ScenarioArgs {
    name: ScenarioName,
    #[arg(long, default_value_t = 2)]
    p: u64,
    /// Telescope length.
    #[arg(long, default_value_t = 4)]
    m: usize,
    #[arg(long, default_value_t = 5)]
    width: usize,
    #[arg(long, default_value_t = 4)]
    scales: usize,
    #[arg(long, default_value_t = 4)]
    columns: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyTarget {
    /// Milnor sequence of a tower of complexes (`--in`, or `--tower`).
    Milnor,
    /// Random towers, posets and complexes checked against the structural theorems.
    Corpus,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BuiltinTower {
    Solenoid,
    Circle,
}

#[derive(Args, Clone)]
pub struct VerifyArgs {
    target: VerifyTarget,
    /// Built-in tower used when no `--in` file is given.
    #[arg(long, value_enum, default_value_t = BuiltinTower::Solenoid)]
    tower: BuiltinTower,
    /// Homological degree `n`.
    #[arg(long, default_value_t = 0)]
    degree: usize,
    #[arg(long, default_value_t = 2)]
    p: u64,
    /// Corpus size per family.
    #[arg(long, default_value_t = 20)]
    count: usize,
}

fn main() -> ExitCode {
    let args = Cli::parse();
    std::panic::set_hook(Box::new(|_| {}));
    let io = args.io.clone();
    let run = std::panic::catch_unwind(move || cli::run(&args.command, &args.io));
    let outcome = match run {
        Ok(Ok(o)) => o,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
        Err(payload) => {
            eprintln!("error: {}", cli::panic_message(&payload));
            return ExitCode::from(2);
        }
    };
    if let Err(e) = cli::write_outcome(&outcome, &io) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if outcome.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
