mod commands;
mod text;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Codensity liftings, bisimilarity fixpoints, composition checks and games
/// over finite coalgebras.
#[derive(Parser, Debug)]
#[command(name = "codensity", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write the main document here instead of standard output.
    #[arg(short = 'o', long = "output", global = true)]
    pub output: Option<PathBuf>,

    /// Seed for every randomised check.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

/// Selects a lifting for a system.
#[derive(Args, Debug, Clone)]
pub struct LiftArgs {
    /// eqrel, erel, pmet or lmet; defaults to eqrel (pmet for mdp).
    #[arg(long)]
    pub fiber: Option<String>,
    /// Modality family: diamond, da, inf or inf_expectation.
    #[arg(long)]
    pub tau: Option<String>,
    /// Discount on automaton successors.
    #[arg(long, default_value_t = 0.5)]
    pub weight: f64,
}

#[derive(Args, Debug, Clone)]
pub struct IterArgs {
    #[arg(long, default_value_t = codensity::fixpoint::DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long = "max-iter", default_value_t = codensity::fixpoint::DEFAULT_MAX_ITER)]
    pub max_iter: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// One lifting step `c*(Ḟ P)` of a relation or metric.
    Lift {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        lift: LiftArgs,
        /// Also run the independent path and fail on mismatch.
        #[arg(long)]
        oracle: bool,
    },
    /// Bisimilarity as a greatest fixpoint.
    Bisim {
        system: PathBuf,
        #[command(flatten)]
        lift: LiftArgs,
        #[command(flatten)]
        iter: IterArgs,
        #[arg(long)]
        oracle: bool,
    },
    /// Product of two systems of the same kind.
    Compose {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, default_value = "product")]
        law: String,
    },
    /// Whether a structure modality lifts the product law.
    CheckCompat {
        /// kripke, da or mdp.
        #[arg(long)]
        behavior: String,
        #[arg(long)]
        sigma: String,
        #[command(flatten)]
        lift: LiftArgs,
        /// Alphabet size for automata.
        #[arg(long, default_value_t = 2)]
        alphabet: usize,
        #[arg(long, default_value_t = 100)]
        instances: usize,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Transport inequality for products of distributions.
    CheckGebler {
        #[arg(long, default_value = "oplus")]
        sigma: String,
        #[arg(long, default_value_t = 500)]
        trials: usize,
        /// Largest support of the sampled distributions.
        #[arg(long, default_value_t = 6)]
        max_states: usize,
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
    },
    /// Codensity games.
    Game {
        #[command(subcommand)]
        command: GameCommand,
    },
    /// Independent oracles.
    Oracle {
        #[command(subcommand)]
        command: OracleCommand,
    },
    /// Runs the acceptance criteria.
    Selftest {
        /// Criterion ids; all when empty.
        criteria: Vec<u8>,
    },
}

#[derive(Subcommand, Debug)]
pub enum GameCommand {
    /// Decides who wins from a position.
    Solve {
        system: PathBuf,
        #[arg(long)]
        start: PathBuf,
        #[arg(long)]
        fiber: Option<String>,
    },
    /// Checks an invariant and the bisimulation it induces.
    Invariant {
        system: PathBuf,
        invariant: PathBuf,
        #[arg(long)]
        fiber: Option<String>,
    },
    /// Composes component invariants and checks the composite game.
    Compose {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, default_value = "and")]
        sigma: String,
        first_invariant: PathBuf,
        second_invariant: PathBuf,
        #[arg(long)]
        fiber: Option<String>,
    },
    /// Plays Spoiler against the built-in Duplicator on standard input.
    Play {
        system: PathBuf,
        #[arg(long)]
        start: PathBuf,
        #[arg(long)]
        fiber: Option<String>,
        /// Invariant Duplicator plays from.
        #[arg(long)]
        invariant: Option<PathBuf>,
        /// Replays a saved transcript instead of reading moves.
        #[arg(long)]
        replay: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum OracleCommand {
    /// Fixpoint against the classical algorithm.
    Compare {
        #[arg(long)]
        system: PathBuf,
        #[arg(long, default_value = "eqrel")]
        fiber: String,
        #[arg(long, default_value_t = 0.5)]
        weight: f64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}
