use super::{file_values, resolve, resolve_opt};
use crate::config::Echo;
use crate::source::Source;
use crate::{emit, CmdResult, ConfigError};
use clap::Args;
use fidelity_forge_core::basis::sic_product_states;
use fidelity_forge_core::fidelity::{k_fidelity_profile, process_fidelity_exact, zero_fidelity};

const KNOWN_KEYS: [&str; 5] = ["target", "compare", "qubits", "seed", "threads"];

#[derive(Args)]
pub struct ExactArgs {
    /// Target channel source (`table<N> | seed:<k> | circuit:<file>`).
    #[arg(long)]
    target: Option<String>,
    /// Comparison channel source (additionally `perturb:<src>:eps=<x>`).
    #[arg(long)]
    compare: Option<String>,
    /// Qubit count for `seed:<k>` sources.
    #[arg(long)]
    qubits: Option<usize>,
    /// Root seed; every stochastic choice derives from it.
    #[arg(long)]
    seed: Option<u64>,
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

pub fn run(args: ExactArgs) -> CmdResult {
    let file = file_values(&args.config, &KNOWN_KEYS)?;
    let target_src = resolve_opt::<String>(&args.target, &file, "target")?
        .ok_or_else(|| ConfigError("--target is required".into()))?;
    let compare_src = resolve_opt::<String>(&args.compare, &file, "compare")?
        .ok_or_else(|| ConfigError("--compare is required".into()))?;
    let qubits = resolve(&args.qubits, &file, "qubits", 3usize)?;
    let seed = resolve(&args.seed, &file, "seed", 0u64)?;
    let threads =
        fidelity_forge_core::parallel::resolve_threads(resolve_opt(&args.threads, &file, "threads")?);

    let target = Source::parse(&target_src, qubits, seed)?;
    let compare = Source::parse(&compare_src, qubits, seed)?;
    let n = target.n_qubits();
    if compare.n_qubits() != n {
        return Err(ConfigError(format!(
            "qubit mismatch: target has {n}, compare has {}",
            compare.n_qubits()
        )));
    }

    let u_target = target.unitary(None)?;
    let lam = target.channel(None)?;
    let gam = compare.channel(Some(&u_target))?;

    let sic = sic_product_states(n).map_err(|e| ConfigError(e.to_string()))?;
    let f = process_fidelity_exact(&lam, &gam).map_err(|e| ConfigError(e.to_string()))?;
    let f0 = zero_fidelity(&lam, &gam, &sic).map_err(|e| ConfigError(e.to_string()))?;
    let profile = k_fidelity_profile(&lam, &gam, &sic).map_err(|e| ConfigError(e.to_string()))?;

    let mut echo = Echo::new("exact");
    echo.push("target", &target_src);
    echo.push("compare", &compare_src);
    echo.push("qubits", n);
    echo.push("seed", seed);
    echo.push("threads", threads);

    let mut text = echo.header();
    text.push_str("quantity,value\n");
    text.push_str(&format!("F,{f}\n"));
    text.push_str(&format!("F0,{f0}\n"));
    for (k, v) in profile.iter().enumerate() {
        text.push_str(&format!("k{k},{v}\n"));
    }
    emit(&args.out, &text)?;
    Ok(0)
}
