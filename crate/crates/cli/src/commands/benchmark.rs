use super::{file_values, resolve, resolve_opt};
use crate::config::Echo;
use crate::source::Source;
use crate::{emit, CmdResult, ConfigError, EXIT_SANITY};
use clap::Args;
use fidelity_forge_core::channels::tables::{budget_schedule, parse_schedule};
use fidelity_forge_core::estimation::{
    benchmark_estimators, ProcessFidelityEstimator, ZeroFidelityEstimator, BENCHMARK_CSV_HEADER,
};
use fidelity_forge_core::fidelity::FidelityBases;

const KNOWN_KEYS: [&str; 6] = ["reps", "seed", "schedule", "target", "compare", "threads"];

#[derive(Args)]
pub struct BenchmarkArgs {
    /// Estimations per schedule row and kind (at least 10).
    #[arg(long)]
    reps: Option<usize>,
    /// Root seed; every stochastic choice derives from it.
    #[arg(long)]
    seed: Option<u64>,
    /// Custom schedule file; defaults to the bundled budget schedule.
    #[arg(long)]
    schedule: Option<String>,
    /// Target channel source; defaults to the bundled benchmark circuit.
    #[arg(long)]
    target: Option<String>,
    /// Comparison channel source; defaults to its perturbed companion.
    #[arg(long)]
    compare: Option<String>,
    /// Worker threads for estimator repetitions (results identical for any count).
    #[arg(long)]
    threads: Option<usize>,
    /// Key/value config file; flags override its entries.
    #[arg(long)]
    config: Option<String>,
    /// Also write the output to this file.
    #[arg(long)]
    out: Option<String>,
}

pub fn run(args: BenchmarkArgs) -> CmdResult {
    let file = file_values(&args.config, &KNOWN_KEYS)?;
    let reps = resolve(&args.reps, &file, "reps", 200usize)?;
    let seed = resolve(&args.seed, &file, "seed", 0u64)?;
    let schedule_path = resolve_opt::<String>(&args.schedule, &file, "schedule")?;
    let target_src = resolve(&args.target, &file, "target", "table6".to_string())?;
    let compare_src = resolve(&args.compare, &file, "compare", "table7".to_string())?;
    let threads =
        fidelity_forge_core::parallel::resolve_threads(resolve_opt(&args.threads, &file, "threads")?);
    if reps < 10 {
        return Err(ConfigError(format!("reps must be >= 10, got {reps}")));
    }

    let schedule = match &schedule_path {
        None => budget_schedule(),
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| ConfigError(format!("cannot read {path}: {e}")))?;
            parse_schedule(&text).map_err(|e| ConfigError(e.to_string()))?
        }
    };

    let target = Source::parse(&target_src, 3, seed)?;
    let compare = Source::parse(&compare_src, 3, seed)?;
    if target.n_qubits() != compare.n_qubits() {
        return Err(ConfigError("target and compare qubit counts differ".into()));
    }
    let u_target = target.unitary(None)?;
    let lam = target.channel(None)?;
    let gam = compare.channel(Some(&u_target))?;
    let bases = FidelityBases::new(target.n_qubits()).map_err(|e| ConfigError(e.to_string()))?;
    let zero = ZeroFidelityEstimator::new(&lam, &gam, &bases)
        .map_err(|e| ConfigError(e.to_string()))?;
    let proc = ProcessFidelityEstimator::new(&lam, &gam, &bases)
        .map_err(|e| ConfigError(e.to_string()))?;

    let rows = benchmark_estimators(&zero, &proc, &schedule, reps, seed, threads)
        .map_err(|e| ConfigError(e.to_string()))?;

    let mut echo = Echo::new("benchmark");
    echo.push("target", &target_src);
    echo.push("compare", &compare_src);
    echo.push("reps", reps);
    echo.push("seed", seed);
    echo.push("threads", threads);
    echo.push(
        "schedule",
        schedule_path.as_deref().unwrap_or("bundled"),
    );
    echo.push("exact_process_fidelity", proc.exact_value());
    echo.push("exact_zero_fidelity", zero.exact_value());

    let mut text = echo.header();
    text.push_str(BENCHMARK_CSV_HEADER);
    text.push('\n');
    let mut violations = 0usize;
    for row in &rows {
        text.push_str(&row.csv_line());
        text.push('\n');
        if !row.within_sanity_band() {
            violations += 1;
        }
    }
    emit(&args.out, &text)?;
    if violations > 0 {
        eprintln!("benchmark: {violations} row(s) violate the variance sanity band");
        return Ok(EXIT_SANITY);
    }
    Ok(0)
}
