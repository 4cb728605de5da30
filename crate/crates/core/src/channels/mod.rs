//! Quantum channels in Kraus form, circuit construction, noise models and
//! the random-instance generators, with the published coefficient tables
//! bundled as fixtures.

mod circuit;
mod generators;
mod noise;
pub mod tables;

pub use circuit::{
    circuit_unitary, parameterised_cnot_spec, random_circuit_spec, random_circuit_spec_from_params,
    u3_matrix, CircuitSpec, Gate, PARAM_COUNT_CNOT_SPEC, PARAM_COUNT_RANDOM_SPEC,
};
pub use generators::{
    hermitian_from_coeffs, perturbed_unitary, random_hermitian, RandomHermitianCoeffs,
};
pub use noise::{noisy_backend, NoiseConfig};

use crate::basis::PauliStringAction;
use crate::linalg::{herm_eig, kron, ComplexMatrix, LinalgError, C64, ZERO};
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ChannelError {
    #[error("matrix is not unitary (deviation {0:.3e})")]
    NotUnitary(f64),
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    InvalidQubitIndex { index: usize, n_qubits: usize },
    #[error("expected {expected} parameters, got {got}")]
    WrongParameterCount { expected: usize, got: usize },
    #[error("channel is not trace preserving (deviation {0:.3e})")]
    NotTracePreserving(f64),
    #[error("fixture error: {0}")]
    Fixture(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A completely-positive trace-preserving map stored as a Kraus-operator
/// list. Unitary channels are single-Kraus.
#[derive(Clone)]
pub struct Channel {
    dim: usize,
    kraus_ops: Vec<ComplexMatrix>,
}

impl Channel {
    /// Channel from an explicit Kraus list; validates trace preservation.
    pub fn from_kraus(kraus_ops: Vec<ComplexMatrix>) -> Result<Self, ChannelError> {
        assert!(!kraus_ops.is_empty(), "Kraus list must be nonempty");
        let dim = kraus_ops[0].rows();
        for k in &kraus_ops {
            if k.rows() != dim || k.cols() != dim {
                return Err(ChannelError::DimensionMismatch {
                    left: dim,
                    right: k.rows(),
                });
            }
        }
        let ch = Self { dim, kraus_ops };
        let dev = ch.trace_preservation_deviation();
        if dev > 1e-9 * (dim as f64).sqrt() {
            return Err(ChannelError::NotTracePreserving(dev));
        }
        Ok(ch)
    }

    /// Single-Kraus channel rho -> U rho U^dag.
    pub fn unitary(u: ComplexMatrix) -> Result<Self, ChannelError> {
        if !u.is_square() {
            return Err(ChannelError::DimensionMismatch {
                left: u.rows(),
                right: u.cols(),
            });
        }
        let p = u.adjoint().matmul(&u);
        let dev = p.sub(&ComplexMatrix::identity(u.rows())).frob_norm();
        if dev > 1e-8 * (u.rows() as f64).sqrt().max(1.0) {
            return Err(ChannelError::NotUnitary(dev));
        }
        Ok(Self {
            dim: u.rows(),
            kraus_ops: vec![u],
        })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            kraus_ops: vec![ComplexMatrix::identity(dim)],
        }
    }

    /// Uniform Pauli (depolarizing) channel on `n_qubits` qubits:
    /// rho -> (1-p) rho + p I/d. Kraus form keeps all 4^n Pauli strings,
    /// with the identity weight absorbing the (1-p) part.
    pub fn depolarizing(n_qubits: usize, p: f64) -> Self {
        let dim = 1usize << n_qubits;
        let count = 1usize << (2 * n_qubits);
        let uniform = p / count as f64;
        let mut kraus = Vec::with_capacity(count);
        for idx in 0..count {
            let weight = if idx == 0 { (1.0 - p) + uniform } else { uniform };
            let m = PauliStringAction::new(n_qubits, idx)
                .to_matrix()
                .scaled(C64::new(weight.sqrt(), 0.0));
            kraus.push(m);
        }
        Self {
            dim,
            kraus_ops: kraus,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kraus_ops(&self) -> &[ComplexMatrix] {
        &self.kraus_ops
    }

    /// True when the channel is stored as a single (necessarily unitary)
    /// Kraus operator.
    pub fn is_unitary(&self) -> bool {
        self.kraus_ops.len() == 1
    }

    pub fn trace_preservation_deviation(&self) -> f64 {
        let mut acc = ComplexMatrix::zeros(self.dim, self.dim);
        for k in &self.kraus_ops {
            acc = acc.add(&k.adjoint().matmul(k));
        }
        acc.sub(&ComplexMatrix::identity(self.dim)).frob_norm()
    }

    /// Apply to a density matrix: sum_k K rho K^dag.
    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix, ChannelError> {
        if rho.rows() != self.dim || rho.cols() != self.dim {
            return Err(ChannelError::DimensionMismatch {
                left: self.dim,
                right: rho.rows(),
            });
        }
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        for k in &self.kraus_ops {
            out = out.add(&k.matmul(rho).matmul(&k.adjoint()));
        }
        Ok(out)
    }

    /// Apply to a pure state given as a ket, returning the output density
    /// matrix. Cheaper than `apply` when the Kraus rank is low.
    pub fn apply_ket(&self, ket: &[C64]) -> Result<ComplexMatrix, ChannelError> {
        if ket.len() != self.dim {
            return Err(ChannelError::DimensionMismatch {
                left: self.dim,
                right: ket.len(),
            });
        }
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        for k in &self.kraus_ops {
            let v = k.matvec(ket);
            for r in 0..self.dim {
                for c in 0..self.dim {
                    out[(r, c)] += v[r] * v[c].conj();
                }
            }
        }
        Ok(out)
    }

    /// Sequential composition: `outer` after `inner`, Kraus list {K_o K_i}.
    pub fn compose(outer: &Channel, inner: &Channel) -> Result<Channel, ChannelError> {
        if outer.dim != inner.dim {
            return Err(ChannelError::DimensionMismatch {
                left: outer.dim,
                right: inner.dim,
            });
        }
        let mut kraus = Vec::with_capacity(outer.kraus_ops.len() * inner.kraus_ops.len());
        for ko in &outer.kraus_ops {
            for ki in &inner.kraus_ops {
                kraus.push(ko.matmul(ki));
            }
        }
        Ok(Channel {
            dim: outer.dim,
            kraus_ops: kraus,
        })
    }

    /// Parallel composition, Kraus list {K_a (x) K_b}.
    pub fn tensor(a: &Channel, b: &Channel) -> Channel {
        let mut kraus = Vec::with_capacity(a.kraus_ops.len() * b.kraus_ops.len());
        for ka in &a.kraus_ops {
            for kb in &b.kraus_ops {
                kraus.push(kron(ka, kb));
            }
        }
        Channel {
            dim: a.dim * b.dim,
            kraus_ops: kraus,
        }
    }

    /// Column-stacking superoperator S = sum_k conj(K) (x) K, so that
    /// vec(E(rho)) = S vec(rho).
    pub fn superoperator(&self) -> ComplexMatrix {
        let d2 = self.dim * self.dim;
        let mut s = ComplexMatrix::zeros(d2, d2);
        for k in &self.kraus_ops {
            s = s.add(&kron(&k.conj(), k));
        }
        s
    }

    /// Rebuild a channel from its superoperator via the Choi eigendecomposition.
    pub fn from_superoperator(dim: usize, s: &ComplexMatrix) -> Result<Channel, ChannelError> {
        let d2 = dim * dim;
        assert_eq!(s.rows(), d2);
        // Reshuffle to the Choi matrix: C[(j1 d + i1),(j2 d + i2)] =
        // S[(i2 d + i1),(j2 d + j1)] under column-stacking.
        let mut choi = ComplexMatrix::zeros(d2, d2);
        for i1 in 0..dim {
            for j1 in 0..dim {
                for i2 in 0..dim {
                    for j2 in 0..dim {
                        choi[(j1 * dim + i1, j2 * dim + i2)] = s[(i2 * dim + i1, j2 * dim + j1)];
                    }
                }
            }
        }
        let eig = herm_eig(&choi)?;
        let total: f64 = eig.eigenvalues.iter().sum();
        let cut = 1e-12 * total.max(1.0);
        let mut kraus = Vec::new();
        for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
            if lambda <= cut {
                continue;
            }
            let v = eig.eigenvector(k);
            let scale = lambda.sqrt();
            let mut m = ComplexMatrix::zeros(dim, dim);
            for col in 0..dim {
                for row in 0..dim {
                    m[(row, col)] = v[col * dim + row] * scale;
                }
            }
            kraus.push(m);
        }
        Channel::from_kraus(kraus)
    }

    /// Re-express with at most d^2 Kraus operators (Choi rank), preserving
    /// the channel action.
    pub fn compressed(&self) -> Result<Channel, ChannelError> {
        if self.kraus_ops.len() <= self.dim * self.dim {
            return Ok(self.clone());
        }
        Channel::from_superoperator(self.dim, &self.superoperator())
    }
}

/// Random CPTP channel of the given Kraus rank from a Haar-random isometry
/// (QR of a complex Gaussian block matrix).
pub fn random_cptp(n_qubits: usize, kraus_rank: usize, rng: &mut impl Rng) -> Channel {
    let dim = 1usize << n_qubits;
    let rank = kraus_rank.max(1);
    // Gaussian (rank*dim) x dim matrix, orthonormalized columns.
    let rows = rank * dim;
    let mut cols: Vec<Vec<C64>> = (0..dim)
        .map(|_| {
            (0..rows)
                .map(|_| C64::new(gaussian_sample(rng), gaussian_sample(rng)))
                .collect()
        })
        .collect();
    // Modified Gram-Schmidt.
    for j in 0..dim {
        for i in 0..j {
            let proj = cols[i]
                .iter()
                .zip(&cols[j])
                .map(|(a, b)| a.conj() * b)
                .fold(ZERO, |acc, z| acc + z);
            let (head, tail) = cols.split_at_mut(j);
            for (a, b) in head[i].iter().zip(tail[0].iter_mut()) {
                *b -= proj * a;
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in cols[j].iter_mut() {
            *z /= norm;
        }
    }
    let kraus = (0..rank)
        .map(|k| {
            let mut m = ComplexMatrix::zeros(dim, dim);
            for r in 0..dim {
                for c in 0..dim {
                    m[(r, c)] = cols[c][k * dim + r];
                }
            }
            m
        })
        .collect();
    Channel {
        dim,
        kraus_ops: kraus,
    }
}

/// Standard normal via Box-Muller.
pub(crate) fn gaussian_sample(rng: &mut impl Rng) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::sic_product_states;
    use crate::linalg::frob_inner;
    use crate::rng::derive_stream;
    use rand::Rng;

    fn random_density(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
        let g = ComplexMatrix::new(
            dim,
            dim,
            (0..dim * dim)
                .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect(),
        );
        let p = g.matmul(&g.adjoint());
        let t = p.trace().re;
        p.scaled(C64::new(1.0 / t, 0.0))
    }

    #[test]
    fn unitary_channel_basics() {
        let id = Channel::unitary(ComplexMatrix::identity(2)).unwrap();
        let mut rng = derive_stream(1, 0);
        let rho = random_density(2, &mut rng);
        assert!(id.apply(&rho).unwrap().sub(&rho).frob_norm() < 1e-14);

        let x = Channel::unitary(crate::basis::pauli_matrix(1)).unwrap();
        let zero = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 0.0]]);
        let one = ComplexMatrix::from_real_rows(&[&[0.0, 0.0], &[0.0, 1.0]]);
        assert!(x.apply(&zero).unwrap().sub(&one).frob_norm() < 1e-14);

        let not_unitary = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 2.0]]);
        assert!(matches!(
            Channel::unitary(not_unitary),
            Err(ChannelError::NotUnitary(_))
        ));
    }

    #[test]
    fn fully_depolarizing_maps_to_maximally_mixed() {
        let mut rng = derive_stream(2, 0);
        for n in 1..=2usize {
            let d = 1usize << n;
            let ch = Channel::depolarizing(n, 1.0);
            let rho = random_density(d, &mut rng);
            let out = ch.apply(&rho).unwrap();
            let mixed = ComplexMatrix::identity(d).scaled(C64::new(1.0 / d as f64, 0.0));
            assert!(out.sub(&mixed).frob_norm() < 1e-12);
        }
    }

    #[test]
    fn unitary_preserves_purity() {
        let mut rng = derive_stream(3, 0);
        let h = crate::channels::random_hermitian(2, &mut rng).1;
        let u = crate::linalg::expm_minus_i(&h, 1.0).unwrap();
        let ch = Channel::unitary(u).unwrap();
        let sic = sic_product_states(2).unwrap();
        for rho in &sic.states {
            let out = ch.apply(rho).unwrap();
            let purity = frob_inner(&out, &out).unwrap().re;
            assert!((purity - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn apply_matches_superoperator_oracle() {
        // Column-stacking superoperator oracle built independently:
        // vec(K rho K^dag) = (conj(K) (x) K) vec(rho), with vec stacking
        // columns (entry (r,c) at position c*d + r).
        let mut rng = derive_stream(4, 0);
        let ch = random_cptp(2, 3, &mut rng);
        let rho = random_density(4, &mut rng);
        let d = 4usize;

        let s = ch.superoperator();
        let mut vec_rho = vec![ZERO; d * d];
        for c in 0..d {
            for r in 0..d {
                vec_rho[c * d + r] = rho[(r, c)];
            }
        }
        let vec_out = s.matvec(&vec_rho);
        let direct = ch.apply(&rho).unwrap();
        let mut max_dev = 0.0f64;
        for c in 0..d {
            for r in 0..d {
                max_dev = max_dev.max((vec_out[c * d + r] - direct[(r, c)]).norm());
            }
        }
        assert!(max_dev < 1e-10, "superoperator mismatch {max_dev}");
    }

    #[test]
    fn apply_preserves_density_matrix_invariants() {
        let mut rng = derive_stream(5, 0);
        let ch = random_cptp(2, 4, &mut rng);
        let rho = random_density(4, &mut rng);
        let out = ch.apply(&rho).unwrap();
        assert!((out.trace().re - 1.0).abs() < 1e-10);
        assert!(out.hermitian_deviation() < 1e-10);
        let eig = herm_eig(&out).unwrap();
        assert!(eig.eigenvalues.iter().all(|&l| l >= -1e-9));
    }

    #[test]
    fn compose_unitary_with_inverse_is_identity() {
        let mut rng = derive_stream(6, 0);
        let h = crate::channels::random_hermitian(2, &mut rng).1;
        let u = crate::linalg::expm_minus_i(&h, 1.0).unwrap();
        let fwd = Channel::unitary(u.clone()).unwrap();
        let bwd = Channel::unitary(u.adjoint()).unwrap();
        let both = Channel::compose(&bwd, &fwd).unwrap();
        let rho = random_density(4, &mut rng);
        assert!(both.apply(&rho).unwrap().sub(&rho).frob_norm() < 1e-10);
    }

    #[test]
    fn cnot_cubed_equals_cnot() {
        let spec = CircuitSpec {
            n_qubits: 2,
            gates: vec![Gate::Cnot {
                control: 0,
                target: 1,
            }],
        };
        let u = circuit_unitary(&spec).unwrap();
        let single = Channel::unitary(u).unwrap();
        let cubed = Channel::compose(
            &single,
            &Channel::compose(&single, &single).unwrap(),
        )
        .unwrap();
        let mut rng = derive_stream(7, 0);
        let rho = random_density(4, &mut rng);
        let a = single.apply(&rho).unwrap();
        let b = cubed.apply(&rho).unwrap();
        assert!(a.sub(&b).frob_norm() < 1e-12);
    }

    #[test]
    fn tensor_depolarizes_first_factor_only() {
        // Partial-trace oracle: on a product state the first factor is
        // depolarized while the second is untouched.
        let p = 0.37;
        let ch = Channel::tensor(&Channel::depolarizing(1, p), &Channel::identity(2));
        let mut rng = derive_stream(8, 0);
        let rho_a = random_density(2, &mut rng);
        let rho_b = random_density(2, &mut rng);
        let joint = kron(&rho_a, &rho_b);
        let out = ch.apply(&joint).unwrap();
        let mixed = ComplexMatrix::identity(2).scaled(C64::new(0.5, 0.0));
        let expect = kron(
            &rho_a
                .scaled(C64::new(1.0 - p, 0.0))
                .add(&mixed.scaled(C64::new(p, 0.0))),
            &rho_b,
        );
        assert!(out.sub(&expect).frob_norm() < 1e-12);
    }

    #[test]
    fn superoperator_round_trip_preserves_action() {
        let mut rng = derive_stream(9, 0);
        let ch = random_cptp(2, 5, &mut rng);
        let rebuilt = Channel::from_superoperator(ch.dim(), &ch.superoperator()).unwrap();
        assert!(rebuilt.kraus_ops().len() <= 16);
        for _ in 0..5 {
            let rho = random_density(4, &mut rng);
            let a = ch.apply(&rho).unwrap();
            let b = rebuilt.apply(&rho).unwrap();
            assert!(a.sub(&b).frob_norm() < 1e-10);
        }
    }

    #[test]
    fn random_cptp_is_trace_preserving() {
        for seed in 0..10u64 {
            let mut rng = derive_stream(seed, 3);
            let ch = random_cptp(2, 1 + (seed % 4) as usize, &mut rng);
            assert!(ch.trace_preservation_deviation() < 1e-9, "seed {seed}");
        }
    }

    #[test]
    fn apply_ket_matches_apply() {
        let mut rng = derive_stream(10, 0);
        let ch = random_cptp(2, 3, &mut rng);
        let sic = sic_product_states(2).unwrap();
        for (ket, rho) in sic.kets.iter().zip(&sic.states).take(4) {
            let a = ch.apply_ket(ket).unwrap();
            let b = ch.apply(rho).unwrap();
            assert!(a.sub(&b).frob_norm() < 1e-11);
        }
    }
}
