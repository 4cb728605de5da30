//! Circuit specifications built from U3 and CNOT gates, and their unitaries.
//!
//! Qubit indices are little-endian: qubit 0 is the least significant bit of
//! a basis-state index.

use super::ChannelError;
use crate::linalg::{kron, ComplexMatrix, C64, ONE};
use rand::Rng;

#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    U3 {
        qubit: usize,
        theta: f64,
        phi: f64,
        lambda: f64,
    },
    Cnot {
        control: usize,
        target: usize,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct CircuitSpec {
    pub n_qubits: usize,
    pub gates: Vec<Gate>,
}

impl CircuitSpec {
    pub fn validate(&self) -> Result<(), ChannelError> {
        for gate in &self.gates {
            match *gate {
                Gate::U3 { qubit, .. } => {
                    if qubit >= self.n_qubits {
                        return Err(ChannelError::InvalidQubitIndex {
                            index: qubit,
                            n_qubits: self.n_qubits,
                        });
                    }
                }
                Gate::Cnot { control, target } => {
                    if control >= self.n_qubits {
                        return Err(ChannelError::InvalidQubitIndex {
                            index: control,
                            n_qubits: self.n_qubits,
                        });
                    }
                    if target >= self.n_qubits || target == control {
                        return Err(ChannelError::InvalidQubitIndex {
                            index: target,
                            n_qubits: self.n_qubits,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// All U3 parameters in gate order (theta, phi, lambda per gate).
    pub fn u3_parameters(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for g in &self.gates {
            if let Gate::U3 {
                theta, phi, lambda, ..
            } = g
            {
                out.extend([*theta, *phi, *lambda]);
            }
        }
        out
    }
}

/// The standard three-parameter single-qubit gate
/// [[cos(t/2), -e^{i l} sin(t/2)], [e^{i p} sin(t/2), e^{i(l+p)} cos(t/2)]].
pub fn u3_matrix(theta: f64, phi: f64, lambda: f64) -> ComplexMatrix {
    let c = (theta / 2.0).cos();
    let s = (theta / 2.0).sin();
    ComplexMatrix::from_rows(&[
        &[C64::new(c, 0.0), -C64::from_polar(s, lambda)],
        &[
            C64::from_polar(s, phi),
            C64::from_polar(c, lambda + phi),
        ],
    ])
}

/// Embed a single-qubit unitary on `qubit` of an `n_qubits` register.
pub fn embed_single(n_qubits: usize, qubit: usize, u: &ComplexMatrix) -> ComplexMatrix {
    let mut m = if qubit == n_qubits - 1 {
        u.clone()
    } else {
        ComplexMatrix::identity(1 << (n_qubits - 1 - qubit))
    };
    if qubit != n_qubits - 1 {
        m = kron(&m, u);
    }
    if qubit > 0 {
        m = kron(&m, &ComplexMatrix::identity(1 << qubit));
    }
    m
}

/// CNOT as a permutation matrix straight from the bit logic.
pub fn cnot_matrix(n_qubits: usize, control: usize, target: usize) -> ComplexMatrix {
    let dim = 1usize << n_qubits;
    let mut m = ComplexMatrix::zeros(dim, dim);
    for col in 0..dim {
        let row = if (col >> control) & 1 == 1 {
            col ^ (1 << target)
        } else {
            col
        };
        m[(row, col)] = ONE;
    }
    m
}

/// Diagonal exp(-i theta Z_a Z_b) on the given qubit pair.
pub fn zz_rotation(n_qubits: usize, a: usize, b: usize, theta: f64) -> ComplexMatrix {
    let dim = 1usize << n_qubits;
    let mut m = ComplexMatrix::zeros(dim, dim);
    for idx in 0..dim {
        let za = 1.0 - 2.0 * ((idx >> a) & 1) as f64;
        let zb = 1.0 - 2.0 * ((idx >> b) & 1) as f64;
        m[(idx, idx)] = C64::from_polar(1.0, -theta * za * zb);
    }
    m
}

/// Diagonal exp(-i theta Z_a).
pub fn z_rotation(n_qubits: usize, a: usize, theta: f64) -> ComplexMatrix {
    let dim = 1usize << n_qubits;
    let mut m = ComplexMatrix::zeros(dim, dim);
    for idx in 0..dim {
        let za = 1.0 - 2.0 * ((idx >> a) & 1) as f64;
        m[(idx, idx)] = C64::from_polar(1.0, -theta * za);
    }
    m
}

pub fn gate_matrix(n_qubits: usize, gate: &Gate) -> ComplexMatrix {
    match *gate {
        Gate::U3 {
            qubit,
            theta,
            phi,
            lambda,
        } => embed_single(n_qubits, qubit, &u3_matrix(theta, phi, lambda)),
        Gate::Cnot { control, target } => cnot_matrix(n_qubits, control, target),
    }
}

/// Product of the gate embeddings in application order (first gate acts
/// first).
pub fn circuit_unitary(spec: &CircuitSpec) -> Result<ComplexMatrix, ChannelError> {
    spec.validate()?;
    let dim = 1usize << spec.n_qubits;
    let mut u = ComplexMatrix::identity(dim);
    for gate in &spec.gates {
        u = gate_matrix(spec.n_qubits, gate).matmul(&u);
    }
    Ok(u)
}

pub const PARAM_COUNT_CNOT_SPEC: usize = 18;
pub const PARAM_COUNT_RANDOM_SPEC: usize = 30;

/// Parameterised CNOT between the end qubits of a three-qubit chain: a U3 on
/// every qubit, the four-CNOT identity CNOT(0,1) CNOT(1,2) CNOT(0,1)
/// CNOT(1,2) realizing CNOT(0 -> 2) through the middle qubit, then a U3 on
/// every qubit again. All parameters zero gives the ideal gate.
pub fn parameterised_cnot_spec(params: &[f64]) -> Result<CircuitSpec, ChannelError> {
    if params.len() != PARAM_COUNT_CNOT_SPEC {
        return Err(ChannelError::WrongParameterCount {
            expected: PARAM_COUNT_CNOT_SPEC,
            got: params.len(),
        });
    }
    let u3 = |q: usize, p: &[f64]| Gate::U3 {
        qubit: q,
        theta: p[0],
        phi: p[1],
        lambda: p[2],
    };
    let gates = vec![
        u3(0, &params[0..3]),
        u3(1, &params[3..6]),
        u3(2, &params[6..9]),
        Gate::Cnot {
            control: 0,
            target: 1,
        },
        Gate::Cnot {
            control: 1,
            target: 2,
        },
        Gate::Cnot {
            control: 0,
            target: 1,
        },
        Gate::Cnot {
            control: 1,
            target: 2,
        },
        u3(0, &params[9..12]),
        u3(1, &params[12..15]),
        u3(2, &params[15..18]),
    ];
    Ok(CircuitSpec { n_qubits: 3, gates })
}

/// Fixed layout of the random three-qubit benchmark circuit: ten U3 gates
/// interleaved with four CNOTs. The published figure does not pin the
/// layout, so this one is canonical for the artifact.
pub fn random_circuit_spec_from_params(params: &[f64]) -> Result<CircuitSpec, ChannelError> {
    if params.len() != PARAM_COUNT_RANDOM_SPEC {
        return Err(ChannelError::WrongParameterCount {
            expected: PARAM_COUNT_RANDOM_SPEC,
            got: params.len(),
        });
    }
    let u3 = |q: usize, p: &[f64]| Gate::U3 {
        qubit: q,
        theta: p[0],
        phi: p[1],
        lambda: p[2],
    };
    let gates = vec![
        u3(0, &params[0..3]),
        u3(1, &params[3..6]),
        u3(2, &params[6..9]),
        Gate::Cnot {
            control: 0,
            target: 1,
        },
        Gate::Cnot {
            control: 1,
            target: 2,
        },
        u3(0, &params[9..12]),
        u3(1, &params[12..15]),
        u3(2, &params[15..18]),
        Gate::Cnot {
            control: 0,
            target: 1,
        },
        Gate::Cnot {
            control: 1,
            target: 2,
        },
        u3(0, &params[18..21]),
        u3(1, &params[21..24]),
        u3(2, &params[24..27]),
        u3(0, &params[27..30]),
    ];
    Ok(CircuitSpec { n_qubits: 3, gates })
}

/// Random instance of the benchmark circuit, all 30 parameters uniform in
/// [0, 2 pi].
pub fn random_circuit_spec(rng: &mut impl Rng) -> CircuitSpec {
    let params: Vec<f64> = (0..PARAM_COUNT_RANDOM_SPEC)
        .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
        .collect();
    random_circuit_spec_from_params(&params).expect("parameter count is fixed")
}
