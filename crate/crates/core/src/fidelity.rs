//! Exact fidelity functionals: the process fidelity in its operator-basis,
//! state-basis and local-observable formulations, the k-fidelity hierarchy,
//! and the 0-fidelity.
//!
//! Values are returned raw, never clamped; low-order truncations of the
//! hierarchy are legitimately negative at very low fidelity.

use crate::basis::{
    hamming_distance, order_coefficient, pauli_basis, sic_product_states, BasisError,
    OverlapStructure, PauliBasis, PauliStringAction, SicSet,
};
use crate::channels::{Channel, ChannelError};
use crate::linalg::{frob_inner, ComplexMatrix, C64, ZERO};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FidelityError {
    #[error("channel dimensions differ: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("basis dimension {basis} does not match channel dimension {channel}")]
    BasisMismatch { basis: usize, channel: usize },
    #[error("truncation order {k} out of range for {n} qubits")]
    OutOfRange { k: usize, n: usize },
    #[error("imaginary residual {0:.3e} exceeds tolerance")]
    ImaginaryResidual(f64),
    #[error(transparent)]
    Basis(#[from] BasisError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Linalg(#[from] crate::linalg::LinalgError),
}

/// Which published formulation produced a fidelity value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Formulation {
    /// Orthonormal-operator sum over the normalized Pauli basis.
    OperatorBasis,
    /// Double sum over SIC input states weighted by the inverse overlap matrix.
    StateBasis,
    /// Contraction against local observables through the C coefficients.
    LocalObservable,
}

#[derive(Clone, Debug)]
pub struct FidelityReport {
    pub value: f64,
    pub formulation: Formulation,
    /// Number of trace evaluations the formulation consumed.
    pub n_terms: usize,
}

fn check_dims(lam: &Channel, gam: &Channel) -> Result<usize, FidelityError> {
    if lam.dim() != gam.dim() {
        return Err(FidelityError::DimensionMismatch {
            left: lam.dim(),
            right: gam.dim(),
        });
    }
    Ok(lam.dim())
}

fn qubits_of_dim(dim: usize) -> usize {
    dim.trailing_zeros() as usize
}

const IMAG_TOL: f64 = 1e-10;

/// Process fidelity from the operator-basis sum
/// F = (1/d^2) sum_i tr[Lambda(sigma_i) Gamma(sigma_i)]
/// over the normalized Pauli strings.
pub fn process_fidelity_exact(lam: &Channel, gam: &Channel) -> Result<f64, FidelityError> {
    Ok(process_fidelity_exact_report(lam, gam)?.value)
}

pub fn process_fidelity_exact_report(
    lam: &Channel,
    gam: &Channel,
) -> Result<FidelityReport, FidelityError> {
    let dim = check_dims(lam, gam)?;
    let n = qubits_of_dim(dim);
    let count = 1usize << (2 * n);
    let mut sum = ZERO;

    if lam.is_unitary() && gam.is_unitary() {
        // Unitary fast path, term-by-term identical to the generic sum:
        // tr[(U P U^dag)(V P V^dag)]/d = tr[P W P W^dag]/d with W = U^dag V.
        let u = &lam.kraus_ops()[0];
        let v = &gam.kraus_ops()[0];
        let w = u.adjoint().matmul(v);
        for idx in 0..count {
            let p = PauliStringAction::new(n, idx);
            // tr[P W P W^dag] = tr[W^dag (P W P)] = <W, P W P>_F.
            let m = p.mul_left(&p.mul_right(&w));
            sum += frob_inner(&w, &m)? / dim as f64;
        }
    } else {
        let paulis = pauli_basis(n)?;
        for w in &paulis.observables {
            let a = lam.apply(w)?;
            let b = gam.apply(w)?;
            sum += frob_inner(&a, &b)?;
        }
    }

    let scaled = sum / (dim * dim) as f64;
    if scaled.im.abs() > IMAG_TOL {
        return Err(FidelityError::ImaginaryResidual(scaled.im.abs()));
    }
    Ok(FidelityReport {
        value: scaled.re,
        formulation: Formulation::OperatorBasis,
        n_terms: count,
    })
}

/// Table of pairwise traces `T[i][j] = tr[Lambda(rho_i) Gamma(rho_j)]` over the
/// SIC set. The state-basis and hierarchy formulations all contract against
/// this table.
pub fn pair_trace_table(
    lam: &Channel,
    gam: &Channel,
    basis: &SicSet,
) -> Result<Vec<f64>, FidelityError> {
    let dim = check_dims(lam, gam)?;
    if basis.dim() != dim {
        return Err(FidelityError::BasisMismatch {
            basis: basis.dim(),
            channel: dim,
        });
    }
    let count = basis.len();
    let mut table = vec![0.0f64; count * count];

    if lam.is_unitary() && gam.is_unitary() {
        // Pure-state fast path: tr[(U|i><i|U^dag)(V|j><j|V^dag)] = |<Ui|Vj>|^2.
        let u = &lam.kraus_ops()[0];
        let v = &gam.kraus_ops()[0];
        let us: Vec<Vec<C64>> = basis.kets.iter().map(|k| u.matvec(k)).collect();
        let vs: Vec<Vec<C64>> = basis.kets.iter().map(|k| v.matvec(k)).collect();
        for i in 0..count {
            for j in 0..count {
                let ip = us[i]
                    .iter()
                    .zip(&vs[j])
                    .map(|(a, b)| a.conj() * b)
                    .fold(ZERO, |acc, z| acc + z);
                table[i * count + j] = ip.norm_sqr();
            }
        }
    } else {
        let lam_out: Vec<ComplexMatrix> = basis
            .states
            .iter()
            .map(|rho| lam.apply(rho))
            .collect::<Result<_, _>>()?;
        let gam_out: Vec<ComplexMatrix> = basis
            .states
            .iter()
            .map(|rho| gam.apply(rho))
            .collect::<Result<_, _>>()?;
        for i in 0..count {
            for j in 0..count {
                let v = frob_inner(&lam_out[i], &gam_out[j])?;
                if v.im.abs() > IMAG_TOL * lam_out[i].frob_norm().max(1.0) {
                    return Err(FidelityError::ImaginaryResidual(v.im.abs()));
                }
                table[i * count + j] = v.re;
            }
        }
    }
    Ok(table)
}

/// Process fidelity from the state-basis double sum
/// F = (1/d^2) sum_ij [B^-1]_ij tr[Lambda(rho_i) Gamma(rho_j)].
pub fn process_fidelity_statebasis(
    lam: &Channel,
    gam: &Channel,
    basis: &SicSet,
    overlaps: &OverlapStructure,
) -> Result<f64, FidelityError> {
    let dim = check_dims(lam, gam)?;
    let table = pair_trace_table(lam, gam, basis)?;
    let count = basis.len();
    let mut sum = 0.0;
    for i in 0..count {
        for j in 0..count {
            sum += overlaps.b_inverse.get(i, j) * table[i * count + j];
        }
    }
    Ok(sum / (dim * dim) as f64)
}

/// Truncation of the state-basis expansion keeping only input pairs that
/// differ on at most k sites, weighted by the Hamming-class coefficients.
/// At k = n it coincides with the process fidelity.
pub fn k_fidelity(
    lam: &Channel,
    gam: &Channel,
    k: usize,
    basis: &SicSet,
) -> Result<f64, FidelityError> {
    let profile = k_fidelity_profile(lam, gam, basis)?;
    profile
        .get(k)
        .copied()
        .ok_or(FidelityError::OutOfRange {
            k,
            n: basis.n_qubits,
        })
}

/// All k-fidelities k = 0..=n in one pass over the pair-trace table.
pub fn k_fidelity_profile(
    lam: &Channel,
    gam: &Channel,
    basis: &SicSet,
) -> Result<Vec<f64>, FidelityError> {
    let dim = check_dims(lam, gam)?;
    let n = basis.n_qubits;
    let table = pair_trace_table(lam, gam, basis)?;
    let count = basis.len();
    // Partial sums per Hamming class.
    let mut class_sums = vec![0.0f64; n + 1];
    for i in 0..count {
        for j in 0..count {
            let m = hamming_distance(n, i, j);
            class_sums[m] += table[i * count + j];
        }
    }
    let norm = (dim * dim) as f64;
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    for (m, &s) in class_sums.iter().enumerate() {
        acc += order_coefficient(n, m)? * s;
        out.push(acc / norm);
    }
    Ok(out)
}

/// The 0-fidelity: F0 = (1/d^2) sum_i tr[Lambda(rho_i) Gamma(rho_i)].
pub fn zero_fidelity(
    lam: &Channel,
    gam: &Channel,
    basis: &SicSet,
) -> Result<f64, FidelityError> {
    let dim = check_dims(lam, gam)?;
    if basis.dim() != dim {
        return Err(FidelityError::BasisMismatch {
            basis: basis.dim(),
            channel: dim,
        });
    }
    let mut sum = 0.0;
    if lam.is_unitary() && gam.is_unitary() {
        let u = &lam.kraus_ops()[0];
        let v = &gam.kraus_ops()[0];
        for ket in &basis.kets {
            let a = u.matvec(ket);
            let b = v.matvec(ket);
            let ip = a
                .iter()
                .zip(&b)
                .map(|(x, y)| x.conj() * y)
                .fold(ZERO, |acc, z| acc + z);
            sum += ip.norm_sqr();
        }
    } else {
        for rho in &basis.states {
            let a = lam.apply(rho)?;
            let b = gam.apply(rho)?;
            let v = frob_inner(&a, &b)?;
            if v.im.abs() > IMAG_TOL {
                return Err(FidelityError::ImaginaryResidual(v.im.abs()));
            }
            sum += v.re;
        }
    }
    Ok(sum / (dim * dim) as f64)
}

/// The 0-fidelity through the observable double sum
/// (1/d^2) sum_ij tr[Lambda(rho_i) W_j] tr[Gamma(rho_i) W_j].
/// Must agree with [`zero_fidelity`] within 1e-10; used as its cross-check.
pub fn zero_fidelity_via_observables(
    lam: &Channel,
    gam: &Channel,
    basis: &SicSet,
    paulis: &PauliBasis,
) -> Result<f64, FidelityError> {
    let dim = check_dims(lam, gam)?;
    if basis.dim() != dim || paulis.dim() != dim {
        return Err(FidelityError::BasisMismatch {
            basis: basis.dim(),
            channel: dim,
        });
    }
    let mut sum = 0.0;
    for rho in &basis.states {
        let a = lam.apply(rho)?;
        let b = gam.apply(rho)?;
        for w in &paulis.observables {
            let ta = frob_inner(w, &a)?;
            let tb = frob_inner(w, &b)?;
            debug_assert!(ta.im.abs() < 1e-9 && tb.im.abs() < 1e-9);
            sum += ta.re * tb.re;
        }
    }
    Ok(sum / (dim * dim) as f64)
}

/// Process fidelity through the local-observable contraction
/// F = (1/d^2) sum_ij C_ij tr[Gamma(rho_i) W_j] with
/// C_ij = sum_l [B^-1]_li tr[Lambda(rho_l) W_j].
///
/// This is the O(d^4)-settings verification mode; use the operator- or
/// state-basis forms for anything hot.
pub fn process_fidelity_local_observable(
    lam: &Channel,
    gam: &Channel,
    basis: &SicSet,
    overlaps: &OverlapStructure,
    paulis: &PauliBasis,
) -> Result<f64, FidelityError> {
    let dim = check_dims(lam, gam)?;
    if basis.dim() != dim || paulis.dim() != dim {
        return Err(FidelityError::BasisMismatch {
            basis: basis.dim(),
            channel: dim,
        });
    }
    let count = basis.len();
    // lam_w[l][j] = tr[Lambda(rho_l) W_j], gam_w[i][j] = tr[Gamma(rho_i) W_j].
    let mut lam_w = vec![0.0f64; count * count];
    let mut gam_w = vec![0.0f64; count * count];
    for l in 0..count {
        let a = lam.apply(&basis.states[l])?;
        let b = gam.apply(&basis.states[l])?;
        for (j, w) in paulis.observables.iter().enumerate() {
            lam_w[l * count + j] = frob_inner(w, &a)?.re;
            gam_w[l * count + j] = frob_inner(w, &b)?.re;
        }
    }
    let mut sum = 0.0;
    for i in 0..count {
        for j in 0..count {
            let mut c_ij = 0.0;
            for l in 0..count {
                c_ij += overlaps.b_inverse.get(l, i) * lam_w[l * count + j];
            }
            sum += c_ij * gam_w[i * count + j];
        }
    }
    Ok(sum / (dim * dim) as f64)
}

/// Convenience bundle of the bases a fidelity evaluation needs.
pub struct FidelityBases {
    pub sic: SicSet,
    pub paulis: PauliBasis,
}

impl FidelityBases {
    pub fn new(n_qubits: usize) -> Result<Self, FidelityError> {
        Ok(Self {
            sic: sic_product_states(n_qubits)?,
            paulis: pauli_basis(n_qubits)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::overlap_structure;
    use crate::channels::{
        perturbed_unitary, random_cptp, random_hermitian, Channel,
    };
    use crate::linalg::expm_minus_i;
    use crate::rng::derive_stream;

    fn random_unitary_channel(n: usize, seed: u64) -> Channel {
        let mut rng = derive_stream(seed, 100);
        let (_, h) = random_hermitian(n, &mut rng);
        Channel::unitary(expm_minus_i(&h, 1.0).unwrap()).unwrap()
    }

    #[test]
    fn identical_unitary_channels_have_unit_fidelity() {
        let ch = random_unitary_channel(2, 1);
        let f = process_fidelity_exact(&ch, &ch).unwrap();
        assert!((f - 1.0).abs() < 1e-10);
    }

    #[test]
    fn identity_vs_x_gate_single_qubit() {
        // Brute-force evaluation over the 4 normalized Paulis: the I and X
        // terms contribute +1 each, the Y and Z terms -1 each, so the
        // operator-basis sum vanishes. (Equivalently |tr(X)|^2 / 4 = 0.)
        let id = Channel::identity(2);
        let x = Channel::unitary(crate::basis::pauli_matrix(1)).unwrap();
        let mut oracle = 0.0;
        let paulis = pauli_basis(1).unwrap();
        for w in &paulis.observables {
            let a = id.apply(w).unwrap();
            let b = x.apply(w).unwrap();
            oracle += frob_inner(&a, &b).unwrap().re;
        }
        oracle /= 4.0;
        let f = process_fidelity_exact(&id, &x).unwrap();
        assert!((f - oracle).abs() < 1e-12);
        assert!(f.abs() < 1e-12);
    }

    #[test]
    fn unitary_fast_path_matches_generic_sum() {
        for seed in 0..5u64 {
            let lam = random_unitary_channel(2, seed);
            let gam = random_unitary_channel(2, seed + 50);
            let fast = process_fidelity_exact(&lam, &gam).unwrap();
            // Force the generic path by rebuilding one side with a doubled
            // Kraus list representing the same channel.
            let u = lam.kraus_ops()[0].clone();
            let s = crate::linalg::C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            let split =
                Channel::from_kraus(vec![u.scaled(s), u.scaled(s)]).unwrap();
            let generic = process_fidelity_exact(&split, &gam).unwrap();
            assert!(
                (fast - generic).abs() < 1e-10,
                "paths disagree: {fast} vs {generic}"
            );
        }
    }

    #[test]
    fn statebasis_matches_operator_basis() {
        let bases = FidelityBases::new(2).unwrap();
        let overlaps = overlap_structure(&bases.sic).unwrap();
        for seed in 0..5u64 {
            let lam = random_unitary_channel(2, seed + 10);
            let gam = random_unitary_channel(2, seed + 60);
            let f1 = process_fidelity_exact(&lam, &gam).unwrap();
            let f2 = process_fidelity_statebasis(&lam, &gam, &bases.sic, &overlaps).unwrap();
            assert!((f1 - f2).abs() < 1e-8, "seed {seed}: {f1} vs {f2}");
        }
    }

    #[test]
    fn depolarizing_against_identity() {
        // Gamma fully depolarizing, Lambda identity: F = 1/d^2 and F0 = 1/2
        // on one qubit.
        let bases = FidelityBases::new(1).unwrap();
        let overlaps = overlap_structure(&bases.sic).unwrap();
        let id = Channel::identity(2);
        let dep = Channel::depolarizing(1, 1.0);
        let f = process_fidelity_exact(&id, &dep).unwrap();
        assert!((f - 0.25).abs() < 1e-12);
        let f2 = process_fidelity_statebasis(&id, &dep, &bases.sic, &overlaps).unwrap();
        assert!((f2 - 0.25).abs() < 1e-10);
        let f0 = zero_fidelity(&id, &dep, &bases.sic).unwrap();
        assert!((f0 - 0.5).abs() < 1e-12);
    }

    #[test]
    fn top_order_truncation_equals_process_fidelity() {
        let bases = FidelityBases::new(2).unwrap();
        for seed in 0..5u64 {
            let lam = random_unitary_channel(2, seed + 20);
            let gam = random_unitary_channel(2, seed + 70);
            let f = process_fidelity_exact(&lam, &gam).unwrap();
            let fk = k_fidelity(&lam, &gam, 2, &bases.sic).unwrap();
            assert!((f - fk).abs() < 1e-8, "seed {seed}: {f} vs {fk}");
        }
    }

    #[test]
    fn zeroth_truncation_of_identical_channels() {
        // Diagonal-sum oracle: the k=0 truncation carries c_0 = (5/4)^n,
        // unlike the 0-fidelity which uses unit weight.
        let bases = FidelityBases::new(2).unwrap();
        let ch = random_unitary_channel(2, 33);
        let k0 = k_fidelity(&ch, &ch, 0, &bases.sic).unwrap();
        assert!((k0 - 1.5625).abs() < 1e-9, "k0 = {k0}");
        let f0 = zero_fidelity(&ch, &ch, &bases.sic).unwrap();
        assert!((f0 - 1.0).abs() < 1e-10);
    }

    #[test]
    fn one_fidelity_can_be_negative_at_low_fidelity() {
        let bases = FidelityBases::new(3).unwrap();
        let mut rng = derive_stream(4242, 0);
        let mut found_negative = false;
        for _ in 0..12 {
            let (_, ht) = random_hermitian(3, &mut rng);
            let (_, hr) = random_hermitian(3, &mut rng);
            let ut = expm_minus_i(&ht, 1.0).unwrap();
            let uc = perturbed_unitary(&ut, &hr, 1.0).unwrap();
            let lam = Channel::unitary(ut).unwrap();
            let gam = Channel::unitary(uc).unwrap();
            let profile = k_fidelity_profile(&lam, &gam, &bases.sic).unwrap();
            if profile[1] < 0.0 {
                found_negative = true;
                break;
            }
        }
        assert!(found_negative, "no negative 1-fidelity found at eps = 1");
    }

    #[test]
    fn zero_fidelity_diagonal_and_observable_forms_agree() {
        let bases = FidelityBases::new(2).unwrap();
        let mut rng = derive_stream(77, 0);
        for seed in 0..3u64 {
            let lam = random_unitary_channel(2, seed + 30);
            let gam = random_cptp(2, 3, &mut rng);
            let a = zero_fidelity(&lam, &gam, &bases.sic).unwrap();
            let b = zero_fidelity_via_observables(&lam, &gam, &bases.sic, &bases.paulis).unwrap();
            assert!((a - b).abs() < 1e-10, "forms disagree: {a} vs {b}");
        }
    }

    #[test]
    fn cross_formulation_equality_cptp() {
        let bases = FidelityBases::new(2).unwrap();
        let overlaps = overlap_structure(&bases.sic).unwrap();
        let mut rng = derive_stream(88, 0);
        for i in 0..5 {
            let lam = random_cptp(2, 1 + i % 3, &mut rng);
            let gam = random_cptp(2, 1 + (i + 1) % 4, &mut rng);
            let f1 = process_fidelity_exact(&lam, &gam).unwrap();
            let f2 = process_fidelity_statebasis(&lam, &gam, &bases.sic, &overlaps).unwrap();
            let f3 =
                process_fidelity_local_observable(&lam, &gam, &bases.sic, &overlaps, &bases.paulis)
                    .unwrap();
            assert!((f1 - f2).abs() < 1e-8);
            assert!((f1 - f3).abs() < 1e-8);
            assert!((-1e-9..=1.0 + 1e-9).contains(&f1));
        }
    }

    #[test]
    fn unitarity_invariance_under_post_rotation() {
        let bases = FidelityBases::new(2).unwrap();
        let lam = random_unitary_channel(2, 41);
        let gam = random_unitary_channel(2, 91);
        let post = random_unitary_channel(2, 141);
        let f = process_fidelity_exact(&lam, &gam).unwrap();
        let lam_rot = Channel::compose(&post, &lam).unwrap();
        let gam_rot = Channel::compose(&post, &gam).unwrap();
        let f_rot = process_fidelity_exact(&lam_rot, &gam_rot).unwrap();
        assert!((f - f_rot).abs() < 1e-9);
        let f0 = zero_fidelity(&lam, &gam, &bases.sic).unwrap();
        let f0_rot = zero_fidelity(&lam_rot, &gam_rot, &bases.sic).unwrap();
        assert!((f0 - f0_rot).abs() < 1e-9);
    }

    #[test]
    fn k_profile_error_beyond_top_order() {
        let bases = FidelityBases::new(2).unwrap();
        let ch = random_unitary_channel(2, 55);
        assert!(matches!(
            k_fidelity(&ch, &ch, 3, &bases.sic),
            Err(FidelityError::OutOfRange { .. })
        ));
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let a = Channel::identity(2);
        let b = Channel::identity(4);
        assert!(matches!(
            process_fidelity_exact(&a, &b),
            Err(FidelityError::DimensionMismatch { .. })
        ));
    }
}
