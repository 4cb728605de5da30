//! Dense complex-matrix kernel: Kronecker products, traces, Hermitian
//! eigendecomposition and Hermitian matrix exponentials.
//!
//! Everything is plain row-major storage over `Complex64`. Dimensions stay
//! small (at most 64, i.e. six qubits), so the cyclic Jacobi eigensolver is
//! both fast enough and far more robust than anything clever.

use num_complex::Complex64;
use thiserror::Error;

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I_UNIT: C64 = C64::new(0.0, 1.0);

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("matrix is not Hermitian: deviation {deviation:.3e} exceeds tolerance {tolerance:.3e}")]
    NotHermitian { deviation: f64, tolerance: f64 },
    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: String, right: String },
    #[error("operation requires a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
}

/// Row-major dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl std::fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows.min(8) {
            write!(f, "  ")?;
            for c in 0..self.cols.min(8) {
                let z = self[(r, c)];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.cols + c]
    }
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        assert_eq!(rows * cols, data.len(), "entry count must equal rows*cols");
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Build from rows of real numbers (convenience for tests and constants).
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = rows[0].len();
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c);
            data.extend(row.iter().map(|&x| C64::new(x, 0.0)));
        }
        Self::new(r, c, data)
    }

    pub fn from_rows(rows: &[&[C64]]) -> Self {
        let r = rows.len();
        let c = rows[0].len();
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c);
            data.extend_from_slice(row);
        }
        Self::new(r, c, data)
    }

    /// Rank-1 projector |v><v| from a ket.
    pub fn outer(v: &[C64]) -> Self {
        let n = v.len();
        let mut m = Self::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                m[(r, c)] = v[r] * v[c].conj();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[C64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<C64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m[(c, r)] = self[(r, c)];
            }
        }
        m
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m[(c, r)] = self[(r, c)].conj();
            }
        }
        m
    }

    pub fn scaled(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// Matrix product. Plain ikj loop; fine at these sizes.
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(
            self.cols, other.rows,
            "matmul dimension mismatch {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                let src = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += a * s;
                }
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn matvec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .map(|(a, x)| a * x)
                    .fold(ZERO, |acc, z| acc + z)
            })
            .collect()
    }

    pub fn trace(&self) -> C64 {
        assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).fold(ZERO, |a, z| a + z)
    }

    pub fn frob_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn hermitian_deviation(&self) -> f64 {
        assert!(self.is_square());
        let mut dev = 0.0f64;
        for r in 0..self.rows {
            for c in 0..self.cols {
                let d = self[(r, c)] - self[(c, r)].conj();
                dev += d.norm_sqr();
            }
        }
        dev.sqrt()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.hermitian_deviation() <= tol * self.frob_norm().max(1.0)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        let p = self.adjoint().matmul(self);
        p.sub(&Self::identity(self.rows)).frob_norm() <= tol * (self.rows as f64).sqrt().max(1.0)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Kronecker product; dimensions multiply.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ar, ac) = (a.rows(), a.cols());
    let (br, bc) = (b.rows(), b.cols());
    let mut out = ComplexMatrix::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let aij = a[(i, j)];
            if aij == ZERO {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Kronecker product of a ket list.
pub fn kron_vec(a: &[C64], b: &[C64]) -> Vec<C64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x * y);
        }
    }
    out
}

/// Frobenius inner product sum_ij conj(a_ij) b_ij = tr[a^dag b].
///
/// For Hermitian `a` this equals tr[a b].
pub fn frob_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<C64, LinalgError> {
    if (a.rows(), a.cols()) != (b.rows(), b.cols()) {
        return Err(LinalgError::DimensionMismatch {
            left: format!("{}x{}", a.rows(), a.cols()),
            right: format!("{}x{}", b.rows(), b.cols()),
        });
    }
    Ok(a.data
        .iter()
        .zip(&b.data)
        .map(|(x, y)| x.conj() * y)
        .fold(ZERO, |acc, z| acc + z))
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Eigenvalues are sorted ascending; the columns of `eigenvectors` are the
/// matching orthonormal eigenvectors. Each eigenvector is phase-fixed so its
/// first component of magnitude above 1e-12 is real and positive, which keeps
/// results deterministic.
#[derive(Clone, Debug)]
pub struct HermEigen {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermEigen {
    pub fn eigenvector(&self, k: usize) -> Vec<C64> {
        self.eigenvectors.column(k)
    }

    /// V diag(f(lambda)) V^dag.
    pub fn assemble(&self, f: impl Fn(f64) -> C64) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let mut out = ComplexMatrix::zeros(n, n);
        for k in 0..n {
            let fk = f(self.eigenvalues[k]);
            if fk == ZERO {
                continue;
            }
            for r in 0..n {
                let vr = v[(r, k)] * fk;
                if vr == ZERO {
                    continue;
                }
                for c in 0..n {
                    out[(r, c)] += vr * v[(c, k)].conj();
                }
            }
        }
        out
    }
}

const JACOBI_SWEEP_BUDGET: usize = 100;
const HERMITICITY_TOL: f64 = 1e-9;

/// Cyclic Jacobi eigensolver for Hermitian matrices.
pub fn herm_eig(h: &ComplexMatrix) -> Result<HermEigen, LinalgError> {
    if !h.is_square() {
        return Err(LinalgError::NotSquare {
            rows: h.rows(),
            cols: h.cols(),
        });
    }
    let n = h.rows();
    let scale = h.frob_norm().max(1.0);
    let dev = h.hermitian_deviation();
    if dev > HERMITICITY_TOL * scale {
        return Err(LinalgError::NotHermitian {
            deviation: dev,
            tolerance: HERMITICITY_TOL * scale,
        });
    }

    // Work on the symmetrized copy so tiny asymmetries cannot bias the sweep.
    let mut a = ComplexMatrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            a[(r, c)] = (h[(r, c)] + h[(c, r)].conj()) * 0.5;
        }
    }
    let mut v = ComplexMatrix::identity(n);

    let off = |m: &ComplexMatrix| -> f64 {
        let mut s = 0.0;
        for r in 0..n {
            for c in 0..n {
                if r != c {
                    s += m[(r, c)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let threshold = (f64::EPSILON * scale).max(f64::MIN_POSITIVE);
    let mut converged = n <= 1 || off(&a) <= threshold;
    if !converged {
        for _sweep in 0..JACOBI_SWEEP_BUDGET {
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a[(p, q)];
                    let mag = apq.norm();
                    if mag <= threshold / (n as f64) {
                        continue;
                    }
                    let app = a[(p, p)].re;
                    let aqq = a[(q, q)].re;
                    // Unit phase of the pivot and the classic Jacobi tangent.
                    let u = apq / mag;
                    let tau = (app - aqq) / (2.0 * mag);
                    let t = if tau >= 0.0 {
                        1.0 / (tau + (1.0 + tau * tau).sqrt())
                    } else {
                        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;

                    // Row update: A <- J^dag A with J = [[c, -s u],[s conj(u), c]].
                    for j in 0..n {
                        let apj = a[(p, j)];
                        let aqj = a[(q, j)];
                        a[(p, j)] = apj * c + aqj * (u * s);
                        a[(q, j)] = aqj * c - apj * (u.conj() * s);
                    }
                    // Column update: A <- A J, and accumulate V <- V J.
                    for i in 0..n {
                        let aip = a[(i, p)];
                        let aiq = a[(i, q)];
                        a[(i, p)] = aip * c + aiq * (u.conj() * s);
                        a[(i, q)] = aiq * c - aip * (u * s);
                        let vip = v[(i, p)];
                        let viq = v[(i, q)];
                        v[(i, p)] = vip * c + viq * (u.conj() * s);
                        v[(i, q)] = viq * c - vip * (u * s);
                    }
                    a[(p, q)] = ZERO;
                    a[(q, p)] = ZERO;
                }
            }
            if off(&a) <= threshold {
                converged = true;
                break;
            }
        }
    }
    if !converged {
        return Err(LinalgError::NoConvergence {
            sweeps: JACOBI_SWEEP_BUDGET,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap());

    let mut eigenvalues = Vec::with_capacity(n);
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvalues.push(a[(src, src)].re);
        // Phase convention: first component of magnitude > 1e-12 made real-positive.
        let mut phase = ONE;
        for r in 0..n {
            let z = v[(r, src)];
            if z.norm() > 1e-12 {
                phase = z.conj() / z.norm();
                break;
            }
        }
        for r in 0..n {
            vectors[(r, dst)] = v[(r, src)] * phase;
        }
    }

    Ok(HermEigen {
        eigenvalues,
        eigenvectors: vectors,
    })
}

/// exp(-i t H) for Hermitian H, built from the eigendecomposition.
pub fn expm_minus_i(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix, LinalgError> {
    let eig = herm_eig(h)?;
    Ok(eig.assemble(|lambda| C64::from_polar(1.0, -t * lambda)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    pub fn pauli_x() -> ComplexMatrix {
        ComplexMatrix::from_rows(&[&[ZERO, ONE], &[ONE, ZERO]])
    }

    pub fn pauli_y() -> ComplexMatrix {
        ComplexMatrix::from_rows(&[&[ZERO, -I_UNIT], &[I_UNIT, ZERO]])
    }

    pub fn pauli_z() -> ComplexMatrix {
        ComplexMatrix::from_rows(&[&[ONE, ZERO], &[ZERO, -ONE]])
    }

    fn random_matrix(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
        let data = (0..n * n)
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        ComplexMatrix::new(n, n, data)
    }

    fn random_hermitian(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
        let g = random_matrix(n, rng);
        g.add(&g.adjoint()).scaled(C64::new(0.5, 0.0))
    }

    #[test]
    fn kron_identity_case() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &i2), ComplexMatrix::identity(4));
    }

    #[test]
    fn kron_diagonal_case() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 2.0]]);
        let b = ComplexMatrix::from_real_rows(&[&[3.0, 0.0], &[0.0, 4.0]]);
        let expect = ComplexMatrix::from_real_rows(&[
            &[3.0, 0.0, 0.0, 0.0],
            &[0.0, 4.0, 0.0, 0.0],
            &[0.0, 0.0, 6.0, 0.0],
            &[0.0, 0.0, 0.0, 8.0],
        ]);
        assert_eq!(kron(&a, &b), expect);
    }

    /// Index-formula oracle: (kron(A,B))_{(i*p+k),(j*q+l)} = A_{ij} B_{kl}.
    fn kron_oracle(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
        let (p, q) = (b.rows(), b.cols());
        let mut out = ComplexMatrix::zeros(a.rows() * p, a.cols() * q);
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                for k in 0..p {
                    for l in 0..q {
                        out[(i * p + k, j * q + l)] = a[(i, j)] * b[(k, l)];
                    }
                }
            }
        }
        out
    }

    #[test]
    fn kron_x_z_matches_index_oracle() {
        let got = kron(&pauli_x(), &pauli_z());
        let expect = kron_oracle(&pauli_x(), &pauli_z());
        assert_eq!(got, expect);
        // Hand expansion: X (x) Z has +Z in the off-diagonal blocks.
        assert_eq!(got[(0, 2)], ONE);
        assert_eq!(got[(1, 3)], -ONE);
        assert_eq!(got[(2, 0)], ONE);
        assert_eq!(got[(3, 1)], -ONE);
        assert_eq!(got[(0, 0)], ZERO);
    }

    proptest! {
        #[test]
        fn kron_associative_and_bilinear(seed in 0u64..200) {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let a = random_matrix(2, &mut rng);
            let b = random_matrix(2, &mut rng);
            let c = random_matrix(2, &mut rng);
            let left = kron(&kron(&a, &b), &c);
            let right = kron(&a, &kron(&b, &c));
            prop_assert!(left.max_abs_diff(&right) < 1e-12);

            let s = C64::new(0.7, -0.3);
            let lin = kron(&a.scaled(s).add(&b), &c);
            let expanded = kron(&a, &c).scaled(s).add(&kron(&b, &c));
            prop_assert!(lin.max_abs_diff(&expanded) < 1e-12);
        }
    }

    #[test]
    fn herm_eig_pauli_z_spectrum() {
        let eig = herm_eig(&pauli_z()).unwrap();
        assert!((eig.eigenvalues[0] + 1.0).abs() < 1e-12);
        assert!((eig.eigenvalues[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn herm_eig_pauli_x_spectrum_and_vectors() {
        let eig = herm_eig(&pauli_x()).unwrap();
        assert!((eig.eigenvalues[0] + 1.0).abs() < 1e-12);
        assert!((eig.eigenvalues[1] - 1.0).abs() < 1e-12);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        // Phase convention makes the first component real-positive.
        let v0 = eig.eigenvector(0);
        assert!((v0[0] - C64::new(s, 0.0)).norm() < 1e-10);
        assert!((v0[1] + C64::new(s, 0.0)).norm() < 1e-10);
        let v1 = eig.eigenvector(1);
        assert!((v1[0] - C64::new(s, 0.0)).norm() < 1e-10);
        assert!((v1[1] - C64::new(s, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn herm_eig_residual_oracle_random() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for &n in &[2usize, 3, 5, 8, 13] {
            let h = random_hermitian(n, &mut rng);
            let eig = herm_eig(&h).unwrap();
            // Orthonormality.
            let v = &eig.eigenvectors;
            let gram = v.adjoint().matmul(v);
            assert!(gram.sub(&ComplexMatrix::identity(n)).frob_norm() < 1e-10);
            // Reconstruction.
            let recon = eig.assemble(|l| C64::new(l, 0.0));
            assert!(recon.sub(&h).frob_norm() < 1e-9 * h.frob_norm().max(1.0));
            // Residual oracle H v = lambda v, pair by pair.
            for k in 0..n {
                let vk = eig.eigenvector(k);
                let hv = h.matvec(&vk);
                let resid: f64 = hv
                    .iter()
                    .zip(&vk)
                    .map(|(a, b)| (a - b * eig.eigenvalues[k]).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                assert!(resid < 1e-8, "residual {resid} at n={n} k={k}");
            }
        }
    }

    #[test]
    fn herm_eig_eigenvalue_sum_equals_trace() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        for _ in 0..20 {
            let h = random_hermitian(6, &mut rng);
            let eig = herm_eig(&h).unwrap();
            let sum: f64 = eig.eigenvalues.iter().sum();
            assert!((sum - h.trace().re).abs() < 1e-9 * h.frob_norm().max(1.0));
        }
    }

    #[test]
    fn herm_eig_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(
            herm_eig(&m),
            Err(LinalgError::NotHermitian { .. })
        ));
    }

    #[test]
    fn expm_at_zero_is_identity() {
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let h = random_hermitian(4, &mut rng);
        let u = expm_minus_i(&h, 0.0).unwrap();
        assert!(u.sub(&ComplexMatrix::identity(4)).frob_norm() < 1e-12);
    }

    #[test]
    fn expm_diagonal_generator() {
        let theta = 0.7312;
        let u = expm_minus_i(&pauli_z(), theta).unwrap();
        assert!((u[(0, 0)] - C64::from_polar(1.0, -theta)).norm() < 1e-12);
        assert!((u[(1, 1)] - C64::from_polar(1.0, theta)).norm() < 1e-12);
        assert!(u[(0, 1)].norm() < 1e-12);
    }

    #[test]
    fn expm_inverse_product_oracle() {
        let mut rng = ChaCha12Rng::seed_from_u64(19);
        for _ in 0..10 {
            let h = random_hermitian(8, &mut rng);
            let u = expm_minus_i(&h, 1.0).unwrap();
            let uinv = expm_minus_i(&h, -1.0).unwrap();
            let p = u.matmul(&uinv);
            assert!(p.sub(&ComplexMatrix::identity(8)).frob_norm() < 1e-9);
        }
    }

    #[test]
    fn expm_unitary_many_seeds() {
        // 100 seeds spread across dimensions up to 32.
        for (i, &n) in [2usize, 4, 8, 16, 32].iter().enumerate() {
            for seed in 0..20u64 {
                let mut rng = ChaCha12Rng::seed_from_u64(seed + 1000 * i as u64);
                let h = random_hermitian(n, &mut rng);
                let u = expm_minus_i(&h, 0.37).unwrap();
                let p = u.adjoint().matmul(&u);
                assert!(
                    p.sub(&ComplexMatrix::identity(n)).frob_norm() < 1e-9,
                    "n={n} seed={seed}"
                );
            }
        }
    }

    #[test]
    fn frob_inner_normalized_identity() {
        let d = 4usize;
        let m = ComplexMatrix::identity(d).scaled(C64::new(1.0 / (d as f64).sqrt(), 0.0));
        let v = frob_inner(&m, &m).unwrap();
        assert!((v - ONE).norm() < 1e-12);
    }

    #[test]
    fn frob_inner_purity_of_pure_state() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let ket = [C64::new(s, 0.0), C64::new(0.0, s)];
        let rho = ComplexMatrix::outer(&ket);
        let v = frob_inner(&rho, &rho).unwrap();
        assert!((v - ONE).norm() < 1e-12);
    }

    #[test]
    fn frob_inner_dimension_mismatch() {
        let a = ComplexMatrix::identity(2);
        let b = ComplexMatrix::identity(3);
        assert!(matches!(
            frob_inner(&a, &b),
            Err(LinalgError::DimensionMismatch { .. })
        ));
    }
}
