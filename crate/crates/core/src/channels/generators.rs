//! Random-instance generators: Hermitian matrices from uniform Pauli
//! coefficients and controlled perturbations of a target unitary.

use super::ChannelError;
use crate::basis::{PauliStringAction, MAX_QUBITS};
use crate::linalg::{expm_minus_i, ComplexMatrix};
use rand::Rng;

/// Pauli-string coefficients of a random Hermitian generator. Index order is
/// base-4 lexicographic, matching the basis module.
#[derive(Clone, Debug)]
pub struct RandomHermitianCoeffs {
    pub n_qubits: usize,
    pub alpha: Vec<f64>,
}

impl RandomHermitianCoeffs {
    pub fn new(n_qubits: usize, alpha: Vec<f64>) -> Self {
        assert_eq!(alpha.len(), 1 << (2 * n_qubits), "need 4^n coefficients");
        Self { n_qubits, alpha }
    }
}

/// H = sum_i alpha_i P_i over unnormalized Pauli strings.
pub fn hermitian_from_coeffs(coeffs: &RandomHermitianCoeffs) -> ComplexMatrix {
    let dim = 1usize << coeffs.n_qubits;
    let mut h = ComplexMatrix::zeros(dim, dim);
    for (idx, &a) in coeffs.alpha.iter().enumerate() {
        if a == 0.0 {
            continue;
        }
        let action = PauliStringAction::new(coeffs.n_qubits, idx);
        for c in 0..dim {
            h[(c ^ action.xor_mask, c)] += action.phases[c] * a;
        }
    }
    h
}

/// Coefficients sampled uniformly from [-1, 1] and the resulting Hermitian.
pub fn random_hermitian(
    n_qubits: usize,
    rng: &mut impl Rng,
) -> (RandomHermitianCoeffs, ComplexMatrix) {
    assert!((1..=MAX_QUBITS).contains(&n_qubits));
    let alpha: Vec<f64> = (0..1usize << (2 * n_qubits))
        .map(|_| rng.gen_range(-1.0..=1.0))
        .collect();
    let coeffs = RandomHermitianCoeffs::new(n_qubits, alpha);
    let h = hermitian_from_coeffs(&coeffs);
    (coeffs, h)
}

/// U_c = e^{-i eps H_r} U_t e^{i eps H_r}; eps controls how far the
/// comparison unitary sits from the target.
pub fn perturbed_unitary(
    u_t: &ComplexMatrix,
    h_r: &ComplexMatrix,
    eps: f64,
) -> Result<ComplexMatrix, ChannelError> {
    let rot = expm_minus_i(h_r, eps)?;
    Ok(rot.matmul(u_t).matmul(&rot.adjoint()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::derive_stream;

    #[test]
    fn pure_identity_coefficient() {
        let mut alpha = vec![0.0; 64];
        alpha[0] = 0.7;
        let h = hermitian_from_coeffs(&RandomHermitianCoeffs::new(3, alpha));
        let expect = ComplexMatrix::identity(8).scaled(crate::linalg::C64::new(0.7, 0.0));
        assert!(h.sub(&expect).frob_norm() < 1e-14);
    }

    #[test]
    fn random_hermitian_is_hermitian() {
        let mut rng = derive_stream(13, 0);
        let (_, h) = random_hermitian(3, &mut rng);
        assert!(h.hermitian_deviation() < 1e-12);
    }

    #[test]
    fn trace_is_dim_times_identity_coefficient() {
        let mut rng = derive_stream(14, 0);
        let (coeffs, h) = random_hermitian(2, &mut rng);
        assert!((h.trace().re - 4.0 * coeffs.alpha[0]).abs() < 1e-12);
    }

    #[test]
    fn perturbation_at_zero_is_identity_map() {
        let mut rng = derive_stream(15, 0);
        let (_, ht) = random_hermitian(2, &mut rng);
        let (_, hr) = random_hermitian(2, &mut rng);
        let ut = expm_minus_i(&ht, 1.0).unwrap();
        let uc = perturbed_unitary(&ut, &hr, 0.0).unwrap();
        assert!(uc.sub(&ut).frob_norm() < 1e-12);
    }

    #[test]
    fn perturbed_unitary_stays_unitary() {
        let mut rng = derive_stream(16, 0);
        let (_, ht) = random_hermitian(3, &mut rng);
        let (_, hr) = random_hermitian(3, &mut rng);
        let ut = expm_minus_i(&ht, 1.0).unwrap();
        let uc = perturbed_unitary(&ut, &hr, 0.631).unwrap();
        assert!(uc.is_unitary(1e-9));
    }
}
