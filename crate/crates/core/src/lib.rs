//! fidelity-forge-core: a hierarchy of efficiently-estimable fidelities for
//! quantum channels, with full-trace and projective importance-sampled
//! estimators, their variance bounds, and Bayesian optimization of
//! parameterised gates on a simulated noisy backend.
//!
//! Module map:
//! - [`linalg`] — dense complex matrices, Kronecker products, Hermitian
//!   eigendecomposition and matrix exponentials.
//! - [`basis`] — product-SIC input states, normalized Pauli observables,
//!   the overlap matrix with its inverse and Hamming-class coefficients.
//! - [`channels`] — Kraus channels, U3/CNOT circuits, noise models,
//!   random-instance generators and the bundled coefficient tables.
//! - [`fidelity`] — exact process-, k- and 0-fidelity functionals.
//! - [`estimation`] — importance-sampled estimators, shot simulation,
//!   variance bounds and the budget benchmark.
//! - [`optimize`] — Gaussian-process Bayesian optimization of the
//!   parameterised CNOT against 0-fidelity estimates.
//! - [`rng`] / [`parallel`] — deterministic seed streams and thread fan-out
//!   whose results do not depend on the thread count.

pub mod basis;
pub mod channels;
pub mod estimation;
pub mod fidelity;
pub mod linalg;
pub mod optimize;
pub mod parallel;
pub mod rng;
