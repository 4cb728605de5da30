//! Importance-sampled estimation of the 0-fidelity and process fidelity in
//! full-trace and projective modes, shot-noise simulation, and the
//! two-sided variance-bound calculators.
//!
//! Settings are sampled with replacement from the distribution
//! Pr(i,j) = tr[Lambda(input_i) W_j]^2 / d^2 (renormalized to one), and each
//! estimator term is the measured numerator divided by the exactly-known
//! denominator. The target channel is classically known, so denominators and
//! the bound inputs (exact F0 / F) come straight from the simulator.

use crate::basis::PauliBasis;
use crate::channels::tables::ScheduleRow;
use crate::channels::{Channel, ChannelError};
use crate::fidelity::{process_fidelity_exact, zero_fidelity, FidelityBases, FidelityError};
use crate::linalg::{frob_inner, herm_eig, ComplexMatrix, HermEigen, LinalgError};
use crate::parallel;
use crate::rng::derive_stream;
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EstimationError {
    #[error("setting distribution has no mass (total {0:.3e})")]
    DegenerateDistribution(f64),
    #[error("outcome probabilities invalid: clamped mass {0:.3e} exceeds tolerance")]
    InvalidProbabilities(f64),
    #[error("projective process estimation needs shots divisible by d: m={m}, d={d}")]
    ShotsNotDivisible { m: usize, d: usize },
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error(transparent)]
    Fidelity(#[from] FidelityError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Which functional a setting distribution (or estimate) targets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SettingKind {
    ZeroFidelity,
    ProcessFidelity,
}

/// How expectation values are obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeasureMode {
    /// Each selected expectation value is exact (ensemble-readout style).
    FullTrace,
    /// Each expectation value is the empirical mean of m projective shots.
    Projective,
}

#[derive(Clone, Copy, Debug)]
pub struct SettingEntry {
    pub state_index: usize,
    pub observable_index: usize,
    pub probability: f64,
    /// tr[Lambda(input_i) W_j], the exactly-known denominator.
    pub denominator: f64,
}

/// Importance-sampling distribution over (input, observable) settings.
pub struct SettingDistribution {
    pub kind: SettingKind,
    pub dim: usize,
    pub entries: Vec<SettingEntry>,
    /// Probability mass before renormalization; exactly 1 for unitary targets.
    pub pre_normalization_mass: f64,
    cumulative: Vec<f64>,
}

const DROP_TOL: f64 = 1e-12;

impl SettingDistribution {
    fn from_weights(
        kind: SettingKind,
        dim: usize,
        weights: Vec<(usize, usize, f64)>,
    ) -> Result<Self, EstimationError> {
        let d2 = (dim * dim) as f64;
        let mut entries = Vec::new();
        let mut mass = 0.0;
        for (i, j, den) in weights {
            let w = den * den / d2;
            mass += w;
            if den.abs() >= DROP_TOL {
                entries.push(SettingEntry {
                    state_index: i,
                    observable_index: j,
                    probability: w,
                    denominator: den,
                });
            }
        }
        if mass < 1e-9 {
            return Err(EstimationError::DegenerateDistribution(mass));
        }
        let kept: f64 = entries.iter().map(|e| e.probability).sum();
        let mut cumulative = Vec::with_capacity(entries.len());
        let mut acc = 0.0;
        for e in entries.iter_mut() {
            e.probability /= kept;
            acc += e.probability;
            cumulative.push(acc);
        }
        if let Some(last) = cumulative.last_mut() {
            *last = 1.0;
        }
        Ok(Self {
            kind,
            dim,
            entries,
            pre_normalization_mass: mass,
            cumulative,
        })
    }

    pub fn sample(&self, rng: &mut impl Rng) -> &SettingEntry {
        let u: f64 = rng.gen_range(0.0..1.0);
        let idx = self.cumulative.partition_point(|&c| c < u);
        &self.entries[idx.min(self.entries.len() - 1)]
    }

    /// Total probability mass (post-normalization this is 1 by construction).
    pub fn total_mass(&self) -> f64 {
        self.entries.iter().map(|e| e.probability).sum()
    }

    /// True when the pre-normalization mass differs from 1 enough that the
    /// estimator is only a heuristic (non-unitary target).
    pub fn is_heuristic(&self) -> bool {
        (self.pre_normalization_mass - 1.0).abs() > 1e-6
    }
}

/// Pr(i,j) = tr[Lambda(rho_i) W_j]^2 / d^2 over SIC inputs.
pub fn setting_distribution_zero(
    lam: &Channel,
    bases: &FidelityBases,
) -> Result<SettingDistribution, EstimationError> {
    let dim = lam.dim();
    let count = bases.sic.len();
    let mut weights = Vec::with_capacity(count * count);
    for i in 0..count {
        let out = lam.apply(&bases.sic.states[i])?;
        for j in 0..count {
            let den = frob_inner(&bases.paulis.observables[j], &out)?.re;
            weights.push((i, j, den));
        }
    }
    SettingDistribution::from_weights(SettingKind::ZeroFidelity, dim, weights)
}

/// Pr'(i,j) = tr[Lambda(sigma_i) W_j]^2 / d^2 over normalized Pauli inputs.
pub fn setting_distribution_process(
    lam: &Channel,
    paulis: &PauliBasis,
) -> Result<SettingDistribution, EstimationError> {
    let dim = lam.dim();
    let count = paulis.len();
    let mut weights = Vec::with_capacity(count * count);
    for i in 0..count {
        let out = lam.apply(&paulis.observables[i])?;
        for j in 0..count {
            let den = frob_inner(&paulis.observables[j], &out)?.re;
            weights.push((i, j, den));
        }
    }
    SettingDistribution::from_weights(SettingKind::ProcessFidelity, dim, weights)
}

/// Observable with its cached eigensystem, for repeated projective
/// measurement of the same operator.
pub struct ObservableMeter {
    pub observable: ComplexMatrix,
    pub eigen: HermEigen,
}

impl ObservableMeter {
    pub fn new(observable: ComplexMatrix) -> Result<Self, EstimationError> {
        let eigen = herm_eig(&observable)?;
        Ok(Self { observable, eigen })
    }

    pub fn measure(
        &self,
        rho_out: &ComplexMatrix,
        mode: MeasureMode,
        m: usize,
        rng: &mut impl Rng,
    ) -> Result<f64, EstimationError> {
        match mode {
            MeasureMode::FullTrace => Ok(frob_inner(&self.observable, rho_out)?.re),
            MeasureMode::Projective => {
                if m == 0 {
                    return Err(EstimationError::OutOfRange("m must be >= 1".into()));
                }
                let d = rho_out.rows();
                let mut probs = Vec::with_capacity(d);
                let mut clamped = 0.0;
                for k in 0..d {
                    let v = self.eigen.eigenvector(k);
                    let mut p = 0.0;
                    for r in 0..d {
                        for c in 0..d {
                            p += (v[r].conj() * rho_out[(r, c)] * v[c]).re;
                        }
                    }
                    if p < 0.0 {
                        clamped += -p;
                        p = 0.0;
                    }
                    probs.push(p);
                }
                if clamped > 1e-8 {
                    return Err(EstimationError::InvalidProbabilities(clamped));
                }
                let total: f64 = probs.iter().sum();
                let mut cumulative = Vec::with_capacity(d);
                let mut acc = 0.0;
                for p in &probs {
                    acc += p / total;
                    cumulative.push(acc);
                }
                let mut sum = 0.0;
                for _ in 0..m {
                    let u: f64 = rng.gen_range(0.0..1.0);
                    let k = cumulative.partition_point(|&c| c < u).min(d - 1);
                    sum += self.eigen.eigenvalues[k];
                }
                Ok(sum / m as f64)
            }
        }
    }
}

/// Measure tr[rho_out w] exactly or as the empirical mean of m eigenbasis
/// shots.
pub fn measure_expectation(
    rho_out: &ComplexMatrix,
    w: &ComplexMatrix,
    mode: MeasureMode,
    m: usize,
    rng: &mut impl Rng,
) -> Result<f64, EstimationError> {
    ObservableMeter::new(w.clone())?.measure(rho_out, mode, m, rng)
}

/// One fidelity estimate with its sampled settings, shot accounting and
/// bound-predicted variance interval.
#[derive(Clone, Debug)]
pub struct EstimateRecord {
    pub kind: SettingKind,
    pub mode: MeasureMode,
    pub l: usize,
    pub m: usize,
    pub value: f64,
    pub settings: Vec<(usize, usize)>,
    pub predicted_variance_lo: f64,
    pub predicted_variance_hi: f64,
    pub rng_seed: u64,
    /// Set when the sampling distribution needed renormalization
    /// (non-unitary target); unbiasedness is then not guaranteed.
    pub heuristic: bool,
}

/// Two-sided bound on the variance of an l-setting 0-fidelity estimate with
/// m projective shots per setting:
/// (1 - F0^2)/l <= Var <= (1 + d/m - F0^2)/l.
pub fn variance_bounds_zero(
    f0: f64,
    d: usize,
    l: usize,
    m: usize,
) -> Result<(f64, f64), EstimationError> {
    if !(0.0..=1.0).contains(&f0) || l == 0 || m == 0 || d == 0 {
        return Err(EstimationError::OutOfRange(format!(
            "variance_bounds_zero(f0={f0}, d={d}, l={l}, m={m})"
        )));
    }
    let lo = (1.0 - f0 * f0) / l as f64;
    let hi = (1.0 + d as f64 / m as f64 - f0 * f0) / l as f64;
    Ok((lo, hi))
}

/// Shared-budget bound for the process-fidelity estimate (m shots per
/// setting split over the d eigenstates):
/// (1 - F^2)/l <= Var <= (1 + d^2/m - F^2)/l.
pub fn variance_bounds_process(
    f: f64,
    d: usize,
    l: usize,
    m: usize,
) -> Result<(f64, f64), EstimationError> {
    if !(0.0..=1.0).contains(&f) || l == 0 || m == 0 || d == 0 {
        return Err(EstimationError::OutOfRange(format!(
            "variance_bounds_process(f={f}, d={d}, l={l}, m={m})"
        )));
    }
    let lo = (1.0 - f * f) / l as f64;
    let hi = (1.0 + (d * d) as f64 / m as f64 - f * f) / l as f64;
    Ok((lo, hi))
}

/// Probability of the +1/sqrt(d) outcome when measuring a normalized Pauli
/// observable against a state whose expectation is `t`.
fn plus_probability(t: f64, sqrt_d: f64) -> Result<f64, EstimationError> {
    let p = (1.0 + sqrt_d * t) / 2.0;
    if !(-1e-8..=1.0 + 1e-8).contains(&p) {
        return Err(EstimationError::InvalidProbabilities((p - 0.5).abs() - 0.5));
    }
    Ok(p.clamp(0.0, 1.0))
}

/// Empirical mean of m two-valued shots (+-1/sqrt(d)) with P(+) = p_plus.
fn sample_pauli_mean(p_plus: f64, m: usize, sqrt_d: f64, rng: &mut impl Rng) -> f64 {
    let mut plus = 0usize;
    for _ in 0..m {
        if rng.gen_range(0.0..1.0) < p_plus {
            plus += 1;
        }
    }
    (2.0 * plus as f64 / m as f64 - 1.0) / sqrt_d
}

/// Precomputed 0-fidelity estimator for a fixed channel pair.
pub struct ZeroFidelityEstimator {
    dist: SettingDistribution,
    dim: usize,
    exact: f64,
    /// numerators[i * d^2 + j] = tr[Gamma(rho_i) W_j].
    numerators: Vec<f64>,
}

impl ZeroFidelityEstimator {
    pub fn new(lam: &Channel, gam: &Channel, bases: &FidelityBases) -> Result<Self, EstimationError> {
        let dist = setting_distribution_zero(lam, bases)?;
        let count = bases.sic.len();
        let mut numerators = vec![0.0f64; count * count];
        for i in 0..count {
            let out = gam.apply(&bases.sic.states[i])?;
            for j in 0..count {
                numerators[i * count + j] = frob_inner(&bases.paulis.observables[j], &out)?.re;
            }
        }
        let exact = zero_fidelity(lam, gam, &bases.sic)?;
        Ok(Self {
            dist,
            dim: lam.dim(),
            exact,
            numerators,
        })
    }

    pub fn distribution(&self) -> &SettingDistribution {
        &self.dist
    }

    pub fn exact_value(&self) -> f64 {
        self.exact
    }

    pub fn estimate(
        &self,
        l: usize,
        m: usize,
        mode: MeasureMode,
        seed: u64,
    ) -> Result<EstimateRecord, EstimationError> {
        if l == 0 {
            return Err(EstimationError::OutOfRange("l must be >= 1".into()));
        }
        if mode == MeasureMode::Projective && m == 0 {
            return Err(EstimationError::OutOfRange("m must be >= 1".into()));
        }
        let count = self.dim * self.dim;
        let sqrt_d = (self.dim as f64).sqrt();
        let mut rng = derive_stream(seed, 0x5a11);
        let mut settings = Vec::with_capacity(l);
        let mut sum = 0.0;
        for _ in 0..l {
            let e = self.dist.sample(&mut rng);
            settings.push((e.state_index, e.observable_index));
            let t = self.numerators[e.state_index * count + e.observable_index];
            let measured = match mode {
                MeasureMode::FullTrace => t,
                MeasureMode::Projective => {
                    sample_pauli_mean(plus_probability(t, sqrt_d)?, m, sqrt_d, &mut rng)
                }
            };
            sum += measured / e.denominator;
        }
        let f0 = self.exact.clamp(0.0, 1.0);
        let (lo, hi) = variance_bounds_zero(f0, self.dim, l, m.max(1))?;
        let hi = match mode {
            MeasureMode::FullTrace => lo,
            MeasureMode::Projective => hi,
        };
        Ok(EstimateRecord {
            kind: SettingKind::ZeroFidelity,
            mode,
            l,
            m: if mode == MeasureMode::FullTrace { 0 } else { m },
            value: sum / l as f64,
            settings,
            predicted_variance_lo: lo,
            predicted_variance_hi: hi,
            rng_seed: seed,
            heuristic: self.dist.is_heuristic(),
        })
    }
}

/// Precomputed process-fidelity estimator for a fixed channel pair.
pub struct ProcessFidelityEstimator {
    dist: SettingDistribution,
    dim: usize,
    exact: f64,
    /// direct_numerators[i * d^2 + j] = tr[Gamma(sigma_i) W_j].
    direct_numerators: Vec<f64>,
    /// eigenvalues[i][k] of sigma_i (ascending).
    eigenvalues: Vec<Vec<f64>>,
    /// eig_numerators[(i * d + k) * d^2 + j] = tr[Gamma(phi_ik) W_j].
    eig_numerators: Vec<f64>,
}

impl ProcessFidelityEstimator {
    pub fn new(lam: &Channel, gam: &Channel, bases: &FidelityBases) -> Result<Self, EstimationError> {
        let dist = setting_distribution_process(lam, &bases.paulis)?;
        let dim = lam.dim();
        let count = bases.paulis.len();
        let mut direct_numerators = vec![0.0f64; count * count];
        let mut eigenvalues = Vec::with_capacity(count);
        let mut eig_numerators = vec![0.0f64; count * dim * count];
        for i in 0..count {
            let out = gam.apply(&bases.paulis.observables[i])?;
            for j in 0..count {
                direct_numerators[i * count + j] =
                    frob_inner(&bases.paulis.observables[j], &out)?.re;
            }
            let eig = herm_eig(&bases.paulis.observables[i])?;
            for k in 0..dim {
                let ket = eig.eigenvector(k);
                let out_k = gam.apply_ket(&ket)?;
                for j in 0..count {
                    eig_numerators[(i * dim + k) * count + j] =
                        frob_inner(&bases.paulis.observables[j], &out_k)?.re;
                }
            }
            eigenvalues.push(eig.eigenvalues);
        }
        let exact = process_fidelity_exact(lam, gam)?;
        Ok(Self {
            dist,
            dim,
            exact,
            direct_numerators,
            eigenvalues,
            eig_numerators,
        })
    }

    pub fn distribution(&self) -> &SettingDistribution {
        &self.dist
    }

    pub fn exact_value(&self) -> f64 {
        self.exact
    }

    /// Eigenbasis decomposition check: sum_k lambda_k tr[Gamma(phi_k) W_j]
    /// reconstructs tr[Gamma(sigma_i) W_j].
    pub fn eigen_decomposition_residual(&self) -> f64 {
        let count = self.dim * self.dim;
        let mut worst = 0.0f64;
        for i in 0..count {
            for j in 0..count {
                let direct = self.direct_numerators[i * count + j];
                let summed: f64 = (0..self.dim)
                    .map(|k| {
                        self.eigenvalues[i][k] * self.eig_numerators[(i * self.dim + k) * count + j]
                    })
                    .sum();
                worst = worst.max((direct - summed).abs());
            }
        }
        worst
    }

    pub fn estimate(
        &self,
        l: usize,
        m: usize,
        mode: MeasureMode,
        seed: u64,
    ) -> Result<EstimateRecord, EstimationError> {
        if l == 0 {
            return Err(EstimationError::OutOfRange("l must be >= 1".into()));
        }
        let d = self.dim;
        if mode == MeasureMode::Projective && (m == 0 || !m.is_multiple_of(d)) {
            return Err(EstimationError::ShotsNotDivisible { m, d });
        }
        let count = d * d;
        let sqrt_d = (d as f64).sqrt();
        let shots_per_eigenstate = if mode == MeasureMode::Projective { m / d } else { 0 };
        let mut rng = derive_stream(seed, 0x9c0c);
        let mut settings = Vec::with_capacity(l);
        let mut sum = 0.0;
        for _ in 0..l {
            let e = self.dist.sample(&mut rng);
            settings.push((e.state_index, e.observable_index));
            let numerator = match mode {
                MeasureMode::FullTrace => {
                    self.direct_numerators[e.state_index * count + e.observable_index]
                }
                MeasureMode::Projective => {
                    let mut acc = 0.0;
                    for k in 0..d {
                        let t = self.eig_numerators
                            [(e.state_index * d + k) * count + e.observable_index];
                        let t_hat = sample_pauli_mean(
                            plus_probability(t, sqrt_d)?,
                            shots_per_eigenstate,
                            sqrt_d,
                            &mut rng,
                        );
                        acc += self.eigenvalues[e.state_index][k] * t_hat;
                    }
                    acc
                }
            };
            sum += numerator / e.denominator;
        }
        let f = self.exact.clamp(0.0, 1.0);
        let (lo, hi) = variance_bounds_process(f, d, l, m.max(1))?;
        let hi = match mode {
            MeasureMode::FullTrace => lo,
            MeasureMode::Projective => hi,
        };
        Ok(EstimateRecord {
            kind: SettingKind::ProcessFidelity,
            mode,
            l,
            m: if mode == MeasureMode::FullTrace { 0 } else { m },
            value: sum / l as f64,
            settings,
            predicted_variance_lo: lo,
            predicted_variance_hi: hi,
            rng_seed: seed,
            heuristic: self.dist.is_heuristic(),
        })
    }

    /// Reference estimator resampling the setting and eigenstate at every
    /// shot. Not NISQ-realizable (the experimental configuration changes
    /// shot by shot); kept so the protocol it idealizes can be demonstrated.
    pub fn estimate_shotwise_reference(&self, n_shots: usize, seed: u64) -> f64 {
        let d = self.dim;
        let count = d * d;
        let sqrt_d = (d as f64).sqrt();
        let mut rng = derive_stream(seed, 0x5807);
        let mut sum = 0.0;
        for _ in 0..n_shots {
            let e = self.dist.sample(&mut rng);
            let k = rng.gen_range(0..d);
            let t = self.eig_numerators[(e.state_index * d + k) * count + e.observable_index];
            let p = plus_probability(t, sqrt_d).unwrap_or(0.5);
            let outcome = if rng.gen_range(0.0..1.0) < p {
                1.0 / sqrt_d
            } else {
                -1.0 / sqrt_d
            };
            sum += d as f64 * self.eigenvalues[e.state_index][k] * outcome / e.denominator;
        }
        sum / n_shots as f64
    }
}

/// Convenience wrappers building the estimator once and drawing a single
/// record.
pub fn estimate_zero_fidelity(
    lam: &Channel,
    gam: &Channel,
    bases: &FidelityBases,
    l: usize,
    m: usize,
    mode: MeasureMode,
    seed: u64,
) -> Result<EstimateRecord, EstimationError> {
    ZeroFidelityEstimator::new(lam, gam, bases)?.estimate(l, m, mode, seed)
}

pub fn estimate_process_fidelity(
    lam: &Channel,
    gam: &Channel,
    bases: &FidelityBases,
    l: usize,
    m: usize,
    mode: MeasureMode,
    seed: u64,
) -> Result<EstimateRecord, EstimationError> {
    ProcessFidelityEstimator::new(lam, gam, bases)?.estimate(l, m, mode, seed)
}

/// One benchmark table row: empirical spread of repeated estimates against
/// the bound-predicted band.
#[derive(Clone, Debug)]
pub struct BenchmarkRow {
    pub total_lm: u64,
    pub kind: SettingKind,
    pub mode: MeasureMode,
    pub l: usize,
    pub m: usize,
    pub unique_settings: usize,
    pub empirical_std: f64,
    pub bound_lo_std: f64,
    pub bound_hi_std: f64,
    pub reps: usize,
    pub seed: u64,
}

impl BenchmarkRow {
    /// Sanity band: the empirical std must fall within
    /// [0.5 * bound_lo, 1.5 * bound_hi].
    pub fn within_sanity_band(&self) -> bool {
        self.empirical_std >= 0.5 * self.bound_lo_std
            && self.empirical_std <= 1.5 * self.bound_hi_std
    }
}

pub fn sample_std(values: &[f64]) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
    var.sqrt()
}

/// Run both estimator kinds over a budget schedule, `reps` projective
/// repetitions per row, reporting empirical stds next to the bound band.
/// Process-kind rows keep the published unique-settings cap (dl <= 900).
pub fn benchmark_estimators(
    zero_est: &ZeroFidelityEstimator,
    proc_est: &ProcessFidelityEstimator,
    schedule: &[ScheduleRow],
    reps: usize,
    seed: u64,
    threads: usize,
) -> Result<Vec<BenchmarkRow>, EstimationError> {
    if reps < 2 {
        return Err(EstimationError::OutOfRange("reps must be >= 2".into()));
    }
    let d = zero_est.dim;
    // The platform cap on unique experimental settings.
    const UNIQUE_CAP: usize = 900;
    for row in schedule {
        if row.zero_l > UNIQUE_CAP || d * row.proc_l > UNIQUE_CAP {
            return Err(EstimationError::OutOfRange(format!(
                "schedule row {} exceeds the {UNIQUE_CAP}-unique-settings cap",
                row.total_lm
            )));
        }
    }
    let mut rows = Vec::with_capacity(schedule.len() * 2);
    for (row_idx, row) in schedule.iter().enumerate() {
        let zero_values = parallel::map_indexed(reps, threads, |rep| {
            let s = derive_stream(seed, ((row_idx as u64) << 32) | rep as u64).gen::<u64>();
            zero_est
                .estimate(row.zero_l, row.zero_m, MeasureMode::Projective, s)
                .map(|r| r.value)
        });
        let zero_values: Vec<f64> = zero_values.into_iter().collect::<Result<_, _>>()?;
        let f0 = zero_est.exact_value().clamp(0.0, 1.0);
        let (lo, hi) = variance_bounds_zero(f0, d, row.zero_l, row.zero_m)?;
        rows.push(BenchmarkRow {
            total_lm: row.total_lm,
            kind: SettingKind::ZeroFidelity,
            mode: MeasureMode::Projective,
            l: row.zero_l,
            m: row.zero_m,
            unique_settings: row.zero_l,
            empirical_std: sample_std(&zero_values),
            bound_lo_std: lo.sqrt(),
            bound_hi_std: hi.sqrt(),
            reps,
            seed,
        });

        let proc_m = d * row.proc_shots;
        let proc_values = parallel::map_indexed(reps, threads, |rep| {
            let s = derive_stream(seed, (1 << 62) | ((row_idx as u64) << 32) | rep as u64)
                .gen::<u64>();
            proc_est
                .estimate(row.proc_l, proc_m, MeasureMode::Projective, s)
                .map(|r| r.value)
        });
        let proc_values: Vec<f64> = proc_values.into_iter().collect::<Result<_, _>>()?;
        let f = proc_est.exact_value().clamp(0.0, 1.0);
        let (lo, hi) = variance_bounds_process(f, d, row.proc_l, proc_m)?;
        rows.push(BenchmarkRow {
            total_lm: row.total_lm,
            kind: SettingKind::ProcessFidelity,
            mode: MeasureMode::Projective,
            l: row.proc_l,
            m: proc_m,
            unique_settings: row.proc_unique,
            empirical_std: sample_std(&proc_values),
            bound_lo_std: lo.sqrt(),
            bound_hi_std: hi.sqrt(),
            reps,
            seed,
        });
    }
    Ok(rows)
}

pub const BENCHMARK_CSV_HEADER: &str =
    "budget,kind,mode,l,m,unique_settings,empirical_std,bound_lo_std,bound_hi_std,reps,seed";

impl BenchmarkRow {
    pub fn csv_line(&self) -> String {
        let kind = match self.kind {
            SettingKind::ZeroFidelity => "zero",
            SettingKind::ProcessFidelity => "process",
        };
        let mode = match self.mode {
            MeasureMode::FullTrace => "full_trace",
            MeasureMode::Projective => "projective",
        };
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.total_lm,
            kind,
            mode,
            self.l,
            self.m,
            self.unique_settings,
            self.empirical_std,
            self.bound_lo_std,
            self.bound_hi_std,
            self.reps,
            self.seed
        )
    }
}
