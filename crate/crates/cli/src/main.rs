//! fidelity-forge: evaluate and estimate channel fidelities, benchmark the
//! estimators over a budget schedule, and optimize parameterised gates on a
//! simulated noisy backend. All commands are deterministic for a fixed
//! --seed and emit CSV with the resolved configuration echoed as comments.

mod commands;
mod config;
mod source;

use clap::{Parser, Subcommand};

/// Exit code for configuration errors.
const EXIT_CONFIG: i32 = 2;
/// Exit code when a benchmark row violates its variance sanity band.
const EXIT_SANITY: i32 = 3;

#[derive(Parser)]
#[command(name = "fidelity-forge", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact process fidelity, 0-fidelity and the full k-fidelity ladder
    /// for a channel pair.
    Exact(commands::exact::ExactArgs),
    /// Scatter of exact fidelities for randomly perturbed targets as the
    /// perturbation strength sweeps 0..1.
    Sweep(commands::sweep::SweepArgs),
    /// Empirical estimator spread against the variance bounds over the
    /// bundled (or a custom) budget schedule.
    Benchmark(commands::benchmark::BenchmarkArgs),
    /// Bayesian optimization of the parameterised CNOT on the noisy
    /// backend.
    Optimize(commands::optimize::OptimizeArgs),
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Exact(args) => commands::exact::run(args),
        Command::Sweep(args) => commands::sweep::run(args),
        Command::Benchmark(args) => commands::benchmark::run(args),
        Command::Optimize(args) => commands::optimize::run(args),
    };
    match result {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("{err}");
            std::process::exit(EXIT_CONFIG);
        }
    }
}

/// Write output to stdout, and to `--out` when given.
pub(crate) fn emit(out: &Option<String>, text: &str) -> Result<(), config::ConfigError> {
    print!("{text}");
    if let Some(path) = out {
        std::fs::write(path, text)
            .map_err(|e| config::ConfigError(format!("cannot write {path}: {e}")))?;
    }
    Ok(())
}

pub(crate) use config::ConfigError;
pub(crate) type CmdResult = Result<i32, ConfigError>;
