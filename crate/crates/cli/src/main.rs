use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qindist::commands::EXIT_ERROR;
use qindist::{run, CliError, Command, Format, RunConfig};
use qindist_core::scheme::{Limits, DEFAULT_MAX_KEYS};

#[derive(Parser)]
#[command(
    name = "qindist",
    version,
    about = "Indistinguishability analysis for quantum encryption schemes"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Largest Hilbert-space dimension to work with.
    #[arg(long, global = true, env = "QIND_MAX_DIM", default_value_t = qindist_core::linalg::DEFAULT_MAX_DIM)]
    max_dim: usize,

    /// Largest number of keys a scheme may have.
    #[arg(long, global = true, env = "QIND_MAX_KEYS", default_value_t = DEFAULT_MAX_KEYS)]
    max_keys: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Pairwise trace distances between cipher states and the resulting verdict.
    Analyze {
        #[arg(long)]
        scheme: PathBuf,
        #[arg(long, default_value_t = qindist_core::analysis::DEFAULT_THRESHOLD)]
        threshold: f64,
    },
    /// Monte Carlo distinguishing game with the Helstrom measurement.
    Game(GameArgs),
    /// Monte Carlo semantic-security game and both reductions.
    Semantic(GameArgs),
    /// Fixed-seed invariant checks.
    Selftest,
}

#[derive(Args)]
struct GameArgs {
    #[arg(long)]
    scheme: PathBuf,
    /// Plaintext name for the first branch (default: first in the file).
    #[arg(long)]
    x: Option<String>,
    /// Plaintext name for the second branch (default: second in the file).
    #[arg(long)]
    y: Option<String>,
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn config(cli: Cli) -> RunConfig {
    let (command, scheme, threshold, game) = match cli.command {
        Cmd::Analyze { scheme, threshold } => {
            (Command::Analyze, Some(scheme), Some(threshold), None)
        }
        Cmd::Game(g) => (Command::Game, Some(g.scheme.clone()), None, Some(g)),
        Cmd::Semantic(g) => (Command::Semantic, Some(g.scheme.clone()), None, Some(g)),
        Cmd::Selftest => (Command::Selftest, None, None, None),
    };
    let mut cfg = RunConfig::new(command);
    cfg.scheme = scheme;
    if let Some(t) = threshold {
        cfg.threshold = t;
    }
    if let Some(g) = game {
        cfg.x = g.x;
        cfg.y = g.y;
        cfg.trials = g.trials;
        cfg.seed = g.seed;
    }
    cfg.output = cli.output;
    cfg.format = match cli.format {
        FormatArg::Text => Format::Text,
        FormatArg::Json => Format::Json,
    };
    cfg.limits = Limits {
        max_dim: cli.max_dim,
        max_keys: cli.max_keys,
    };
    cfg
}

fn main() -> ExitCode {
    let cfg = config(Cli::parse());
    let outcome = run(&cfg).and_then(|outcome| {
        match &cfg.output {
            Some(path) => std::fs::write(path, &outcome.report).map_err(|e| CliError::Io {
                path: path.display().to_string(),
                message: e.to_string(),
            })?,
            None => print!("{}", outcome.report),
        }
        Ok(outcome)
    });
    match outcome {
        Ok(outcome) => {
            for w in &outcome.warnings {
                eprintln!("warning: {w}");
            }
            ExitCode::from(outcome.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR as u8)
        }
    }
}
