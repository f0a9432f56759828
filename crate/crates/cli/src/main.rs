//! `qss`: batch front-end for the secret-sharing simulator.

mod format;
mod keyrate;
mod manifest;
mod mermin;
mod simulate;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

/// Environment variable supplying the seed when neither a flag nor the
/// config file sets one.
pub const SEED_ENV: &str = "QSS_SEED";

#[derive(Debug, Parser)]
#[command(name = "qss", version, about = "Simulate and analyse GHZ-based threshold quantum secret sharing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the protocol end to end from a JSON config.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Emit Werner-state key-rate curves as CSV.
    Keyrate {
        #[arg(long)]
        n_players: usize,
        /// Comma-separated numbers of trusted players.
        #[arg(long, value_delimiter = ',', default_value = "2,3")]
        m_trusted: Vec<u32>,
        /// `start:stop:step`, inclusive of both ends.
        #[arg(long, default_value = "0.5:1:0.005")]
        p_grid: String,
        #[arg(long)]
        out: PathBuf,
        /// Defaults to `<out>.manifest.json`.
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// Exact and sampled Mermin statistic for a state.
    Mermin {
        #[arg(long)]
        n_players: Option<usize>,
        #[arg(long, conflicts_with = "werner", required_unless_present = "werner")]
        spectrum: Option<PathBuf>,
        #[arg(long)]
        werner: Option<f64>,
        #[arg(long, default_value_t = 100_000)]
        rounds: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run a built-in property suite.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long)]
        seed: Option<u64>,
    },
}

/// Failure classes mapped onto exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Bad input: exit 2.
    Usage(String),
    /// A checked property did not hold: exit 1.
    Failed(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Usage(_) => 2,
        }
    }
}

impl From<qss_core::Error> for CliError {
    fn from(e: qss_core::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn io_error(path: &std::path::Path, e: std::io::Error) -> CliError {
    CliError::Usage(format!("{}: {e}", path.display()))
}

/// Flag, then the config value, then the environment, then zero.
pub fn resolve_seed(flag: Option<u64>, from_config: Option<u64>) -> CliResult<u64> {
    if let Some(s) = flag.or(from_config) {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{SEED_ENV}={v:?} is not an unsigned integer"))),
        Err(_) => Ok(0),
    }
}

fn verify(suite: &str, seed: Option<u64>) -> CliResult<()> {
    let seed = resolve_seed(seed, None)?;
    let results = qss_core::verify::run_suite(suite, seed)?;
    let mut failed = 0;
    for r in &results {
        println!("{} {}/{}: {}", if r.passed { "PASS" } else { "FAIL" }, r.suite, r.name, r.detail);
        failed += usize::from(!r.passed);
    }
    println!("{} checks, {} failed", results.len(), failed);
    if failed > 0 {
        return Err(CliError::Failed(format!("{failed} check(s) failed in suite `{suite}`")));
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Simulate { config, out_dir, seed } => simulate::run(&config, &out_dir, seed),
        Command::Keyrate { n_players, m_trusted, p_grid, out, manifest } => {
            keyrate::run(n_players, &m_trusted, &p_grid, &out, manifest.as_deref())
        }
        Command::Mermin { n_players, spectrum, werner, rounds, seed } => {
            mermin::run(n_players, spectrum.as_deref(), werner, rounds, seed)
        }
        Command::Verify { suite, seed } => verify(&suite, seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let (CliError::Usage(msg) | CliError::Failed(msg)) = &e;
            eprintln!("error: {msg}");
            ExitCode::from(e.code())
        }
    }
}
