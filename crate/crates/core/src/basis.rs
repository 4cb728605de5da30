//! Product-SIC input states, the normalized Pauli observable basis, the
//! overlap matrix B with its inverse, and the Hamming-class coefficients of
//! the fidelity hierarchy.
//!
//! Indexing is base-4 lexicographic everywhere: a state or observable index
//! `i` in `0..4^n` is read as the digit string (d_{n-1} ... d_1 d_0) with
//! digit k addressing qubit k (qubit 0 least significant).

use crate::linalg::{frob_inner, kron, kron_vec, ComplexMatrix, C64, ONE, ZERO};
use thiserror::Error;

pub const MAX_QUBITS: usize = 6;

#[derive(Debug, Error)]
pub enum BasisError {
    #[error("qubit count {0} exceeds the supported maximum {MAX_QUBITS}")]
    TooManyQubits(usize),
    #[error("overlap matrix is numerically singular (inversion residual {residual:.3e})")]
    SingularOverlap { residual: f64 },
    #[error("order coefficient index out of range: n={n}, m={m}")]
    OutOfRange { n: usize, m: usize },
    #[error("states have mismatched dimensions")]
    DimensionMismatch,
    #[error(transparent)]
    Linalg(#[from] crate::linalg::LinalgError),
}

/// Single-qubit Pauli matrix for digit 0..=3 (I, X, Y, Z).
pub fn pauli_matrix(digit: usize) -> ComplexMatrix {
    let i = C64::new(0.0, 1.0);
    match digit {
        0 => ComplexMatrix::identity(2),
        1 => ComplexMatrix::from_rows(&[&[ZERO, ONE], &[ONE, ZERO]]),
        2 => ComplexMatrix::from_rows(&[&[ZERO, -i], &[i, ZERO]]),
        3 => ComplexMatrix::from_rows(&[&[ONE, ZERO], &[ZERO, -ONE]]),
        _ => panic!("Pauli digit must be 0..=3"),
    }
}

/// Base-4 digit of `index` addressing qubit `qubit`.
#[inline]
pub fn base4_digit(index: usize, qubit: usize) -> usize {
    (index >> (2 * qubit)) & 3
}

/// Number of sites on which the base-4 digit vectors of `i` and `j` differ.
pub fn hamming_distance(n_qubits: usize, i: usize, j: usize) -> usize {
    (0..n_qubits)
        .filter(|&k| base4_digit(i, k) != base4_digit(j, k))
        .count()
}

/// An unnormalized Pauli string as a sparse row action:
/// `P[c ^ xor][c] = phase[c]`.
pub struct PauliStringAction {
    pub dim: usize,
    pub xor_mask: usize,
    pub phases: Vec<C64>,
}

impl PauliStringAction {
    pub fn new(n_qubits: usize, index: usize) -> Self {
        let dim = 1usize << n_qubits;
        let mut xor_mask = 0usize;
        for k in 0..n_qubits {
            let d = base4_digit(index, k);
            if d == 1 || d == 2 {
                xor_mask |= 1 << k;
            }
        }
        let i = C64::new(0.0, 1.0);
        let phases = (0..dim)
            .map(|c| {
                let mut phase = ONE;
                for k in 0..n_qubits {
                    let bit = (c >> k) & 1;
                    match base4_digit(index, k) {
                        2 => phase *= if bit == 0 { i } else { -i },
                        3
                            if bit == 1 => {
                                phase = -phase;
                            }
                        _ => {}
                    }
                }
                phase
            })
            .collect();
        Self {
            dim,
            xor_mask,
            phases,
        }
    }

    /// Dense matrix of the string.
    pub fn to_matrix(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(self.dim, self.dim);
        for c in 0..self.dim {
            m[(c ^ self.xor_mask, c)] = self.phases[c];
        }
        m
    }

    /// P * w, using the row-gather form.
    pub fn mul_left(&self, w: &ComplexMatrix) -> ComplexMatrix {
        let d = self.dim;
        let mut out = ComplexMatrix::zeros(d, d);
        for r in 0..d {
            let src = r ^ self.xor_mask;
            let ph = self.phases[src];
            for c in 0..d {
                out[(r, c)] = ph * w[(src, c)];
            }
        }
        out
    }

    /// w * P, using the column-gather form.
    pub fn mul_right(&self, w: &ComplexMatrix) -> ComplexMatrix {
        let d = self.dim;
        let mut out = ComplexMatrix::zeros(d, d);
        for r in 0..d {
            for c in 0..d {
                out[(r, c)] = w[(r, c ^ self.xor_mask)] * self.phases[c];
            }
        }
        out
    }
}

/// The four single-qubit SIC states (I + r_a . sigma)/2 on the canonical
/// tetrahedron orientation: r1 = (0,0,1), r2 = (2sqrt2/3, 0, -1/3),
/// r3 = (-sqrt2/3, sqrt(2/3), -1/3), r4 = (-sqrt2/3, -sqrt(2/3), -1/3).
pub fn sic_single_qubit() -> [ComplexMatrix; 4] {
    let vecs = sic_bloch_vectors();
    let mut out: Vec<ComplexMatrix> = Vec::with_capacity(4);
    for r in vecs {
        let mut m = ComplexMatrix::identity(2);
        for (c, p) in r.iter().zip([pauli_matrix(1), pauli_matrix(2), pauli_matrix(3)]) {
            m = m.add(&p.scaled(C64::new(*c, 0.0)));
        }
        out.push(m.scaled(C64::new(0.5, 0.0)));
    }
    out.try_into().unwrap()
}

fn sic_bloch_vectors() -> [[f64; 3]; 4] {
    let s2 = 2.0f64.sqrt();
    let s23 = (2.0f64 / 3.0).sqrt();
    [
        [0.0, 0.0, 1.0],
        [2.0 * s2 / 3.0, 0.0, -1.0 / 3.0],
        [-s2 / 3.0, s23, -1.0 / 3.0],
        [-s2 / 3.0, -s23, -1.0 / 3.0],
    ]
}

/// Kets of the four single-qubit SIC states, phase-fixed (first component
/// real non-negative).
pub fn sic_single_qubit_kets() -> [[C64; 2]; 4] {
    // r1 = +z is |0>. For the rest, the Bloch state (theta, phi) is
    // (cos(theta/2), e^{i phi} sin(theta/2)).
    let vecs = sic_bloch_vectors();
    let mut kets = [[ZERO; 2]; 4];
    for (a, r) in vecs.iter().enumerate() {
        let theta = r[2].clamp(-1.0, 1.0).acos();
        let phi = r[1].atan2(r[0]);
        kets[a][0] = C64::new((theta / 2.0).cos(), 0.0);
        kets[a][1] = C64::from_polar((theta / 2.0).sin(), phi);
    }
    kets
}

/// The 4^n product-SIC input states.
pub struct SicSet {
    pub n_qubits: usize,
    /// Density matrices in base-4 lexicographic index order.
    pub states: Vec<ComplexMatrix>,
    /// The same states as kets (they are pure products by construction).
    pub kets: Vec<Vec<C64>>,
}

impl SicSet {
    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Base-4 digit vector of a state index, digit k addressing qubit k.
    pub fn digits(&self, index: usize) -> Vec<usize> {
        (0..self.n_qubits).map(|k| base4_digit(index, k)).collect()
    }
}

pub fn sic_product_states(n_qubits: usize) -> Result<SicSet, BasisError> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return Err(BasisError::TooManyQubits(n_qubits));
    }
    let single = sic_single_qubit();
    let single_kets = sic_single_qubit_kets();
    let count = 1usize << (2 * n_qubits);
    let mut states = Vec::with_capacity(count);
    let mut kets = Vec::with_capacity(count);
    for idx in 0..count {
        // Qubit n-1 is the leftmost Kronecker factor.
        let mut k = n_qubits - 1;
        let mut rho = single[base4_digit(idx, k)].clone();
        let mut ket = single_kets[base4_digit(idx, k)].to_vec();
        while k > 0 {
            k -= 1;
            rho = kron(&rho, &single[base4_digit(idx, k)]);
            ket = kron_vec(&ket, &single_kets[base4_digit(idx, k)]);
        }
        states.push(rho);
        kets.push(ket);
    }
    Ok(SicSet {
        n_qubits,
        states,
        kets,
    })
}

/// The 4^n normalized Pauli observables W_j = (tensor of Paulis)/sqrt(d).
pub struct PauliBasis {
    pub n_qubits: usize,
    /// Normalized observables in base-4 lexicographic label order.
    pub observables: Vec<ComplexMatrix>,
}

impl PauliBasis {
    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.observables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observables.is_empty()
    }

    /// Label string of observable `index`, e.g. "IXZ" (leftmost = qubit n-1).
    pub fn label(&self, index: usize) -> String {
        (0..self.n_qubits)
            .rev()
            .map(|k| ['I', 'X', 'Y', 'Z'][base4_digit(index, k)])
            .collect()
    }
}

pub fn pauli_basis(n_qubits: usize) -> Result<PauliBasis, BasisError> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return Err(BasisError::TooManyQubits(n_qubits));
    }
    let count = 1usize << (2 * n_qubits);
    let dim = 1usize << n_qubits;
    let norm = C64::new(1.0 / (dim as f64).sqrt(), 0.0);
    let observables = (0..count)
        .map(|idx| PauliStringAction::new(n_qubits, idx).to_matrix().scaled(norm))
        .collect();
    Ok(PauliBasis {
        n_qubits,
        observables,
    })
}

/// Dense real matrix; storage for B and its inverse.
#[derive(Clone, Debug)]
pub struct RealMatrix {
    pub n: usize,
    pub data: Vec<f64>,
}

impl RealMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.n + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.n + c] = v;
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn kron(&self, other: &Self) -> Self {
        let (n, m) = (self.n, other.n);
        let mut out = Self::zeros(n * m);
        for i in 0..n {
            for j in 0..n {
                let a = self.get(i, j);
                for k in 0..m {
                    for l in 0..m {
                        out.set(i * m + k, j * m + l, a * other.get(k, l));
                    }
                }
            }
        }
        out
    }

    /// Gauss-Jordan inverse with partial pivoting; None when singular.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.n;
        let mut a = self.data.clone();
        let mut inv = Self::zeros(n);
        for i in 0..n {
            inv.set(i, i, 1.0);
        }
        for col in 0..n {
            let mut pivot = col;
            let mut best = a[col * n + col].abs();
            for r in (col + 1)..n {
                let v = a[r * n + col].abs();
                if v > best {
                    best = v;
                    pivot = r;
                }
            }
            if best < 1e-14 {
                return None;
            }
            if pivot != col {
                for c in 0..n {
                    a.swap(pivot * n + c, col * n + c);
                    inv.data.swap(pivot * n + c, col * n + c);
                }
            }
            let diag = a[col * n + col];
            for c in 0..n {
                a[col * n + c] /= diag;
                inv.data[col * n + c] /= diag;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[r * n + col];
                if f == 0.0 {
                    continue;
                }
                for c in 0..n {
                    a[r * n + c] -= f * a[col * n + c];
                    inv.data[r * n + c] -= f * inv.data[col * n + c];
                }
            }
        }
        Some(inv)
    }

    pub fn identity_residual(&self, other: &Self) -> f64 {
        let n = self.n;
        let p = self.matmul(other);
        let mut resid = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { 1.0 } else { 0.0 };
                resid = resid.max((p.get(i, j) - target).abs());
            }
        }
        resid
    }
}

/// Overlap matrix B, its inverse, and the single-qubit inverse block.
pub struct OverlapStructure {
    pub b: RealMatrix,
    pub b_inverse: RealMatrix,
    pub single_qubit_inverse: RealMatrix,
}

/// Build B from pairwise traces and its inverse two ways: direct numeric
/// inversion and the Kronecker power of the inverted single-qubit block.
/// Both must agree; the Kronecker-power form is returned.
pub fn overlap_structure(states: &SicSet) -> Result<OverlapStructure, BasisError> {
    let n = states.len();
    let mut b = RealMatrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            let v = frob_inner(&states.states[i], &states.states[j])?;
            debug_assert!(v.im.abs() < 1e-10);
            b.set(i, j, v.re);
            b.set(j, i, v.re);
        }
    }

    let single = {
        let sq = sic_single_qubit();
        let mut m = RealMatrix::zeros(4);
        for i in 0..4 {
            for j in 0..4 {
                m.set(i, j, frob_inner(&sq[i], &sq[j])?.re);
            }
        }
        m
    };
    let single_inv = single
        .inverse()
        .ok_or(BasisError::SingularOverlap { residual: f64::INFINITY })?;

    let direct_inv = b
        .inverse()
        .ok_or(BasisError::SingularOverlap { residual: f64::INFINITY })?;
    let residual = b.identity_residual(&direct_inv);
    if residual > 1e-6 {
        return Err(BasisError::SingularOverlap { residual });
    }

    let mut kron_inv = single_inv.clone();
    for _ in 1..states.n_qubits {
        kron_inv = kron_inv.kron(&single_inv);
    }
    let mut max_dev = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            max_dev = max_dev.max((kron_inv.get(i, j) - direct_inv.get(i, j)).abs());
        }
    }
    if max_dev > 1e-8 {
        return Err(BasisError::SingularOverlap { residual: max_dev });
    }

    Ok(OverlapStructure {
        b,
        b_inverse: kron_inv,
        single_qubit_inverse: single_inv,
    })
}

/// Hamming-class coefficient of the inverse overlap matrix:
/// c_m = (-1)^m 5^{n-m} / 4^n.
pub fn order_coefficient(n_qubits: usize, m: usize) -> Result<f64, BasisError> {
    if m > n_qubits || n_qubits == 0 || n_qubits > MAX_QUBITS {
        return Err(BasisError::OutOfRange { n: n_qubits, m });
    }
    let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    let num = 5f64.powi((n_qubits - m) as i32);
    let den = 4f64.powi(n_qubits as i32);
    Ok(sign * num / den)
}

/// Sum over ordered pairs i != j of tr[rho_i rho_j].
pub fn overlap_cost(states: &[ComplexMatrix]) -> Result<f64, BasisError> {
    let dim = states.first().map(|s| s.rows()).unwrap_or(0);
    if states.iter().any(|s| s.rows() != dim || s.cols() != dim) {
        return Err(BasisError::DimensionMismatch);
    }
    let mut total = 0.0;
    for (i, a) in states.iter().enumerate() {
        for (j, b) in states.iter().enumerate() {
            if i == j {
                continue;
            }
            let v = frob_inner(a, b)?;
            debug_assert!(v.im.abs() < 1e-10, "overlap imaginary part {v:?}");
            total += v.re;
        }
    }
    Ok(total)
}
