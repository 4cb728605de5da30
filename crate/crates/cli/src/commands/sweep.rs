use super::{file_values, resolve, resolve_opt};
use crate::config::Echo;
use crate::{emit, CmdResult, ConfigError};
use clap::Args;
use fidelity_forge_core::basis::sic_product_states;
use fidelity_forge_core::channels::tables::{coefficient_table, CoefficientTable};
use fidelity_forge_core::channels::{
    hermitian_from_coeffs, perturbed_unitary, random_hermitian, Channel,
};
use fidelity_forge_core::fidelity::{k_fidelity_profile, process_fidelity_exact, zero_fidelity};
use fidelity_forge_core::linalg::expm_minus_i;
use fidelity_forge_core::rng::derive_stream;

const KNOWN_KEYS: [&str; 4] = ["qubits", "samples", "seed", "threads"];

#[derive(Args)]
pub struct SweepArgs {
    /// Qubit count (2..=5). 2 and 3 use the bundled targets; 4 and 5 draw a
    /// fresh random target from the seed.
    #[arg(long)]
    qubits: Option<usize>,
    /// Number of rows; the perturbation strength is an even grid over `[0,1]`.
    #[arg(long)]
    samples: Option<usize>,
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

pub fn run(args: SweepArgs) -> CmdResult {
    let file = file_values(&args.config, &KNOWN_KEYS)?;
    let qubits = resolve(&args.qubits, &file, "qubits", 3usize)?;
    let samples = resolve(&args.samples, &file, "samples", 200usize)?;
    let seed = resolve(&args.seed, &file, "seed", 0u64)?;
    let threads =
        fidelity_forge_core::parallel::resolve_threads(resolve_opt(&args.threads, &file, "threads")?);
    if !(2..=5).contains(&qubits) {
        return Err(ConfigError(format!("qubits must be 2..=5, got {qubits}")));
    }
    if samples < 1 {
        return Err(ConfigError("samples must be >= 1".into()));
    }

    let h_target = match qubits {
        2 => hermitian_from_coeffs(&coefficient_table(CoefficientTable::Table2)),
        3 => hermitian_from_coeffs(&coefficient_table(CoefficientTable::Table3)),
        _ => {
            let mut rng = derive_stream(seed, 0x7A6);
            random_hermitian(qubits, &mut rng).1
        }
    };
    let u_target = expm_minus_i(&h_target, 1.0).map_err(|e| ConfigError(e.to_string()))?;
    let lam = Channel::unitary(u_target.clone()).map_err(|e| ConfigError(e.to_string()))?;
    let sic = sic_product_states(qubits).map_err(|e| ConfigError(e.to_string()))?;

    let mut echo = Echo::new("sweep");
    echo.push("qubits", qubits);
    echo.push("samples", samples);
    echo.push("seed", seed);
    echo.push("threads", threads);

    let mut text = echo.header();
    text.push_str("epsilon,F,F0");
    for k in 1..=qubits {
        text.push_str(&format!(",F{k}"));
    }
    text.push('\n');

    for s in 0..samples {
        let eps = if samples == 1 {
            0.0
        } else {
            s as f64 / (samples - 1) as f64
        };
        let mut rng = derive_stream(seed, 0x51EE_0000 + s as u64);
        let (_, h_rot) = random_hermitian(qubits, &mut rng);
        let u_cmp =
            perturbed_unitary(&u_target, &h_rot, eps).map_err(|e| ConfigError(e.to_string()))?;
        let gam = Channel::unitary(u_cmp).map_err(|e| ConfigError(e.to_string()))?;
        let f = process_fidelity_exact(&lam, &gam).map_err(|e| ConfigError(e.to_string()))?;
        let f0 = zero_fidelity(&lam, &gam, &sic).map_err(|e| ConfigError(e.to_string()))?;
        let profile = k_fidelity_profile(&lam, &gam, &sic).map_err(|e| ConfigError(e.to_string()))?;
        text.push_str(&format!("{eps},{f},{f0}"));
        for v in &profile[1..] {
            text.push_str(&format!(",{v}"));
        }
        text.push('\n');
    }
    emit(&args.out, &text)?;
    Ok(0)
}
