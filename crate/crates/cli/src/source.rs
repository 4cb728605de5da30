//! Channel-source mini-language:
//! ```text
//! table<N>                bundled coefficient or circuit-parameter table
//! seed:<k>                fresh random Hermitian generator from seed k
//! perturb:<src>:eps=<x>   conjugate the target by e^{-i eps H_src}
//! circuit:<file>          unitary of a gate-list file
//! ```

use crate::config::ConfigError;
use fidelity_forge_core::channels::tables::{
    benchmark_compare_circuit, benchmark_target_circuit, coefficient_table, CoefficientTable,
};
use fidelity_forge_core::channels::{
    circuit_unitary, hermitian_from_coeffs, perturbed_unitary, random_hermitian, Channel,
    CircuitSpec, Gate,
};
use fidelity_forge_core::linalg::{expm_minus_i, ComplexMatrix};
use fidelity_forge_core::rng::derive_stream;

pub enum Source {
    /// Source with an explicit Hermitian generator (usable in perturb).
    Hermitian { h: ComplexMatrix, n_qubits: usize },
    /// Direct unitary (circuit tables and circuit files).
    Unitary { u: ComplexMatrix, n_qubits: usize },
    /// Perturbation of the target by the inner source's Hermitian.
    Perturb { inner: Box<Source>, eps: f64 },
}

impl Source {
    pub fn parse(text: &str, default_qubits: usize, seed: u64) -> Result<Source, ConfigError> {
        let text = text.trim();
        if let Some(rest) = text.strip_prefix("perturb:") {
            let Some((inner, eps)) = rest.rsplit_once(":eps=") else {
                return Err(ConfigError(format!(
                    "perturb source must look like perturb:<src>:eps=<x>, got {text:?}"
                )));
            };
            let eps: f64 = eps
                .parse()
                .map_err(|_| ConfigError(format!("bad eps in {text:?}")))?;
            let inner = Source::parse(inner, default_qubits, seed)?;
            if !matches!(inner, Source::Hermitian { .. }) {
                return Err(ConfigError(format!(
                    "perturb needs a Hermitian-bearing source (table1..table5 or seed:<k>), got {text:?}"
                )));
            }
            return Ok(Source::Perturb {
                inner: Box::new(inner),
                eps,
            });
        }
        if let Some(k) = text.strip_prefix("seed:") {
            let k: u64 = k
                .parse()
                .map_err(|_| ConfigError(format!("bad seed in {text:?}")))?;
            let mut rng = derive_stream(seed, 0xC4A2_0000 | k);
            let (_, h) = random_hermitian(default_qubits, &mut rng);
            return Ok(Source::Hermitian {
                h,
                n_qubits: default_qubits,
            });
        }
        if let Some(path) = text.strip_prefix("circuit:") {
            let spec = parse_circuit_file(path)?;
            let n_qubits = spec.n_qubits;
            let u = circuit_unitary(&spec)
                .map_err(|e| ConfigError(format!("circuit {path}: {e}")))?;
            return Ok(Source::Unitary { u, n_qubits });
        }
        match text {
            "table1" | "table2" | "table3" | "table4" | "table5" => {
                let table = match text {
                    "table1" => CoefficientTable::Table1,
                    "table2" => CoefficientTable::Table2,
                    "table3" => CoefficientTable::Table3,
                    "table4" => CoefficientTable::Table4,
                    _ => CoefficientTable::Table5,
                };
                Ok(Source::Hermitian {
                    h: hermitian_from_coeffs(&coefficient_table(table)),
                    n_qubits: table.n_qubits(),
                })
            }
            "table6" | "table7" => {
                let spec = if text == "table6" {
                    benchmark_target_circuit()
                } else {
                    benchmark_compare_circuit()
                };
                let u = circuit_unitary(&spec)
                    .map_err(|e| ConfigError(format!("{text}: {e}")))?;
                Ok(Source::Unitary { u, n_qubits: 3 })
            }
            other => Err(ConfigError(format!(
                "unknown channel source {other:?} (expected table<N>, seed:<k>, perturb:<src>:eps=<x> or circuit:<file>)"
            ))),
        }
    }

    pub fn n_qubits(&self) -> usize {
        match self {
            Source::Hermitian { n_qubits, .. } | Source::Unitary { n_qubits, .. } => *n_qubits,
            Source::Perturb { inner, .. } => inner.n_qubits(),
        }
    }

    /// Build the unitary; `target` is required for perturb sources.
    pub fn unitary(&self, target: Option<&ComplexMatrix>) -> Result<ComplexMatrix, ConfigError> {
        match self {
            Source::Hermitian { h, .. } => {
                expm_minus_i(h, 1.0).map_err(|e| ConfigError(e.to_string()))
            }
            Source::Unitary { u, .. } => Ok(u.clone()),
            Source::Perturb { inner, eps } => {
                let target = target.ok_or_else(|| {
                    ConfigError("perturb:<src> is only valid for --compare (it rotates the target)".into())
                })?;
                let Source::Hermitian { h, .. } = inner.as_ref() else {
                    return Err(ConfigError("perturb needs a Hermitian inner source".into()));
                };
                perturbed_unitary(target, h, *eps).map_err(|e| ConfigError(e.to_string()))
            }
        }
    }

    pub fn channel(&self, target: Option<&ComplexMatrix>) -> Result<Channel, ConfigError> {
        Channel::unitary(self.unitary(target)?).map_err(|e| ConfigError(e.to_string()))
    }
}

/// Circuit file format: `qubits <n>` then one gate per line,
/// `u3 <qubit> <theta> <phi> <lambda>` or `cnot <control> <target>`.
pub fn parse_circuit_file(path: &str) -> Result<CircuitSpec, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("cannot read {path}: {e}")))?;
    parse_circuit(&text).map_err(|e| ConfigError(format!("{path}: {}", e.0)))
}

pub fn parse_circuit(text: &str) -> Result<CircuitSpec, ConfigError> {
    let mut n_qubits: Option<usize> = None;
    let mut gates = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let bad = |msg: &str| ConfigError(format!("line {}: {msg}: {raw:?}", lineno + 1));
        match fields[0] {
            "qubits" => {
                if fields.len() != 2 {
                    return Err(bad("qubits takes one count"));
                }
                n_qubits = Some(fields[1].parse().map_err(|_| bad("bad qubit count"))?);
            }
            "u3" => {
                if fields.len() != 5 {
                    return Err(bad("u3 takes qubit theta phi lambda"));
                }
                gates.push(Gate::U3 {
                    qubit: fields[1].parse().map_err(|_| bad("bad qubit"))?,
                    theta: fields[2].parse().map_err(|_| bad("bad theta"))?,
                    phi: fields[3].parse().map_err(|_| bad("bad phi"))?,
                    lambda: fields[4].parse().map_err(|_| bad("bad lambda"))?,
                });
            }
            "cnot" => {
                if fields.len() != 3 {
                    return Err(bad("cnot takes control target"));
                }
                gates.push(Gate::Cnot {
                    control: fields[1].parse().map_err(|_| bad("bad control"))?,
                    target: fields[2].parse().map_err(|_| bad("bad target"))?,
                });
            }
            other => return Err(bad(&format!("unknown gate {other:?}"))),
        }
    }
    let n_qubits = n_qubits.ok_or_else(|| ConfigError("circuit file missing `qubits <n>`".into()))?;
    let spec = CircuitSpec { n_qubits, gates };
    spec.validate().map_err(|e| ConfigError(e.to_string()))?;
    Ok(spec)
}
