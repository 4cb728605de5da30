//! Gaussian-process surrogate with a squared-exponential kernel and
//! expected-improvement acquisition. Hyperparameters come from a fixed
//! log-grid marginal-likelihood search, so fitting needs no gradient
//! optimizer and is fully deterministic.

use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GpError {
    #[error("kernel matrix is not positive definite even with jitter {jitter:.1e}")]
    IllConditionedKernel { jitter: f64 },
    #[error("need at least two observations to fit, got {0}")]
    TooFewObservations(usize),
}

/// Quasi-random low-discrepancy sequence (generalized golden ratio /
/// Kronecker). Point 0 is the box center.
pub struct QuasiRandom {
    alphas: Vec<f64>,
}

impl QuasiRandom {
    pub fn new(dims: usize) -> Self {
        // phi_d is the unique positive root of x^(d+1) = x + 1.
        let d = dims as f64;
        let mut phi = 1.5f64;
        for _ in 0..64 {
            phi = (1.0 + phi).powf(1.0 / (d + 1.0));
        }
        let alphas = (1..=dims).map(|j| (1.0 / phi).powi(j as i32)).collect();
        Self { alphas }
    }

    /// k-th point of the sequence in the unit cube.
    pub fn point(&self, k: u64) -> Vec<f64> {
        self.alphas
            .iter()
            .map(|a| {
                let v = 0.5 + a * k as f64;
                v - v.floor()
            })
            .collect()
    }

    pub fn point_in_bounds(&self, k: u64, bounds: &[(f64, f64)]) -> Vec<f64> {
        self.point(k)
            .iter()
            .zip(bounds)
            .map(|(u, (lo, hi))| lo + u * (hi - lo))
            .collect()
    }
}

/// Standard normal CDF via the Abramowitz-Stegun erf approximation.
fn normal_cdf(x: f64) -> f64 {
    0.5 * (1.0 + erf(x / std::f64::consts::SQRT_2))
}

fn erf(x: f64) -> f64 {
    let sign = if x < 0.0 { -1.0 } else { 1.0 };
    let x = x.abs();
    let t = 1.0 / (1.0 + 0.3275911 * x);
    let y = 1.0
        - (((((1.061405429 * t - 1.453152027) * t) + 1.421413741) * t - 0.284496736) * t
            + 0.254829592)
            * t
            * (-x * x).exp();
    sign * y
}

fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// Fitted GP surrogate over standardized observations.
pub struct Surrogate {
    pub lengthscales: Vec<f64>,
    pub signal_variance: f64,
    pub noise_variance: f64,
    xs: Vec<Vec<f64>>,
    /// Standardization of the raw objective values.
    y_mean: f64,
    y_std: f64,
    /// Cholesky factor of K + noise I (lower triangular, row-major).
    chol: Vec<f64>,
    /// alpha = (K + noise I)^{-1} y_standardized.
    alpha: Vec<f64>,
    pub log_marginal_likelihood: f64,
}

const LENGTHSCALE_GRID: [f64; 6] = [0.25, 0.5, 1.0, 2.0, 4.0, 8.0];
const NOISE_GRID: [f64; 4] = [1e-6, 1e-4, 1e-2, 1e-1];

fn sq_dist(a: &[f64], b: &[f64], ls: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .zip(ls)
        .map(|((x, y), l)| {
            let d = (x - y) / l;
            d * d
        })
        .sum()
}

/// In-place Cholesky of a dense symmetric matrix; Err on non-PD.
fn cholesky(n: usize, a: &mut [f64]) -> Result<(), ()> {
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= a[i * n + k] * a[j * n + k];
            }
            if i == j {
                if s <= 0.0 {
                    return Err(());
                }
                a[i * n + i] = s.sqrt();
            } else {
                a[i * n + j] = s / a[j * n + j];
            }
        }
        for j in (i + 1)..n {
            a[i * n + j] = 0.0;
        }
    }
    Ok(())
}

fn solve_lower(n: usize, l: &[f64], b: &mut [f64]) {
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l[i * n + k] * b[k];
        }
        b[i] = s / l[i * n + i];
    }
}

fn solve_upper_from_lower(n: usize, l: &[f64], b: &mut [f64]) {
    for i in (0..n).rev() {
        let mut s = b[i];
        for k in (i + 1)..n {
            s -= l[k * n + i] * b[k];
        }
        b[i] = s / l[i * n + i];
    }
}

impl Surrogate {
    /// Fit by maximizing the marginal likelihood over the fixed grid of
    /// isotropic lengthscales and noise variances.
    pub fn fit(xs: Vec<Vec<f64>>, ys: Vec<f64>) -> Result<Self, GpError> {
        let n = xs.len();
        if n < 2 {
            return Err(GpError::TooFewObservations(n));
        }
        let dims = xs[0].len();
        let y_mean = ys.iter().sum::<f64>() / n as f64;
        let y_var = ys.iter().map(|y| (y - y_mean) * (y - y_mean)).sum::<f64>() / n as f64;
        let y_std = y_var.sqrt().max(1e-12);
        let ys_std: Vec<f64> = ys.iter().map(|y| (y - y_mean) / y_std).collect();

        let mut best: Option<Surrogate> = None;
        for &ls in &LENGTHSCALE_GRID {
            let lengthscales = vec![ls; dims];
            // Base kernel without noise; reused across the noise grid.
            let mut base = vec![0.0f64; n * n];
            for i in 0..n {
                for j in 0..=i {
                    let k = (-0.5 * sq_dist(&xs[i], &xs[j], &lengthscales)).exp();
                    base[i * n + j] = k;
                    base[j * n + i] = k;
                }
            }
            for &noise in &NOISE_GRID {
                let mut k = base.clone();
                let mut jitter = 0.0;
                let chol = loop {
                    let mut attempt = k.clone();
                    for i in 0..n {
                        attempt[i * n + i] = base[i * n + i] + noise + jitter;
                    }
                    match cholesky(n, &mut attempt) {
                        Ok(()) => break Some(attempt),
                        Err(()) => {
                            jitter = if jitter == 0.0 { 1e-10 } else { jitter * 100.0 };
                            if jitter > 1e-4 {
                                break None;
                            }
                        }
                    }
                };
                let Some(chol) = chol else { continue };
                k.clear();
                let mut alpha = ys_std.clone();
                solve_lower(n, &chol, &mut alpha);
                let log_det: f64 = (0..n).map(|i| chol[i * n + i].ln()).sum();
                let fit_term = -0.5 * alpha.iter().map(|a| a * a).sum::<f64>();
                solve_upper_from_lower(n, &chol, &mut alpha);
                let lml = fit_term - log_det - 0.5 * n as f64 * (2.0 * std::f64::consts::PI).ln();
                let keep = match &best {
                    None => true,
                    Some(b) => lml > b.log_marginal_likelihood,
                };
                if keep {
                    best = Some(Surrogate {
                        lengthscales: lengthscales.clone(),
                        signal_variance: 1.0,
                        noise_variance: noise,
                        xs: xs.clone(),
                        y_mean,
                        y_std,
                        chol,
                        alpha,
                        log_marginal_likelihood: lml,
                    });
                }
            }
        }
        best.ok_or(GpError::IllConditionedKernel { jitter: 1e-4 })
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// Posterior mean and variance (in raw objective units).
    pub fn posterior(&self, x: &[f64]) -> (f64, f64) {
        let n = self.xs.len();
        let mut kstar: Vec<f64> = self
            .xs
            .iter()
            .map(|xi| (-0.5 * sq_dist(xi, x, &self.lengthscales)).exp())
            .collect();
        let mean_std: f64 = kstar.iter().zip(&self.alpha).map(|(k, a)| k * a).sum();
        solve_lower(n, &self.chol, &mut kstar);
        let explained: f64 = kstar.iter().map(|v| v * v).sum();
        let var_std = (self.signal_variance - explained).max(0.0);
        (
            self.y_mean + self.y_std * mean_std,
            var_std * self.y_std * self.y_std,
        )
    }

    /// Expected improvement over `incumbent` (raw units).
    pub fn expected_improvement(&self, x: &[f64], incumbent: f64) -> f64 {
        let (mean, var) = self.posterior(x);
        let sigma = var.sqrt();
        if sigma < 1e-12 {
            return (mean - incumbent).max(0.0);
        }
        let z = (mean - incumbent) / sigma;
        (mean - incumbent) * normal_cdf(z) + sigma * normal_pdf(z)
    }
}

/// Candidate scales for the dense local block of the acquisition pool.
const LOCAL_SCALES: [f64; 4] = [0.4, 0.15, 0.06, 0.025];
/// Scales for the sparse (few-coordinate) local block.
const SPARSE_SCALES: [f64; 3] = [0.3, 0.12, 0.05];

/// Pick the next query point: expected improvement argmax over a pool of
/// 2048 candidates, ties broken by lowest candidate index.
///
/// The pool mixes global quasi-random coverage (512 points continuing the
/// probe sequence), dense Gaussian moves around the incumbent best at
/// several scales (768), and sparse moves touching only one to three
/// coordinates (768). The sparse block is what lets the optimizer refine
/// per-gate angles without disturbing the rest once it is near a ridge.
pub fn acquire(
    surrogate: &Surrogate,
    bounds: &[(f64, f64)],
    best_x: &[f64],
    incumbent: f64,
    sequence: &QuasiRandom,
    sequence_offset: u64,
    rng: &mut impl Rng,
) -> Vec<f64> {
    let dims = bounds.len();
    let mut best_ei = f64::NEG_INFINITY;
    let mut best_point: Option<Vec<f64>> = None;
    let n_global = 512usize;
    let n_dense = 768usize;
    let n_sparse = 768usize;
    for idx in 0..(n_global + n_dense + n_sparse) {
        let cand: Vec<f64> = if idx < n_global {
            sequence.point_in_bounds(sequence_offset + idx as u64, bounds)
        } else if idx < n_global + n_dense {
            let scale = LOCAL_SCALES[((idx - n_global) / (n_dense / LOCAL_SCALES.len()))
                .min(LOCAL_SCALES.len() - 1)];
            best_x
                .iter()
                .zip(bounds)
                .map(|(c, (lo, hi))| {
                    (c + scale * crate::channels::gaussian_sample(rng)).clamp(*lo, *hi)
                })
                .collect()
        } else {
            let block = idx - n_global - n_dense;
            let scale = SPARSE_SCALES[(block / (n_sparse / SPARSE_SCALES.len()))
                .min(SPARSE_SCALES.len() - 1)];
            let touched = 1 + rng.gen_range(0..3usize);
            let mut cand = best_x.to_vec();
            for _ in 0..touched {
                let coord = rng.gen_range(0..dims);
                let (lo, hi) = bounds[coord];
                cand[coord] = (cand[coord] + scale * crate::channels::gaussian_sample(rng))
                    .clamp(lo, hi);
            }
            cand
        };
        let ei = surrogate.expected_improvement(&cand, incumbent);
        if ei > best_ei {
            best_ei = ei;
            best_point = Some(cand);
        }
    }
    best_point.expect("candidate pool is nonempty")
}
