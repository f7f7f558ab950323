//! Dense complex matrix kernel.
//!
//! Matrices are small (the largest density matrices here are 16x16), so
//! everything is a plain row-major `Vec<C64>` and the Hermitian eigensolver
//! is a cyclic complex Jacobi iteration.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use crate::{Error, Result, C64};

/// Hermiticity, trace and PSD tolerance for density matrices.
pub const DENSITY_TOL: f64 = 1e-10;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::Shape {
                rows,
                cols,
                len: data.len(),
            });
        }
        if let Some(pos) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / cols,
                col: pos % cols,
            });
        }
        Ok(Self { rows, cols, data })
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

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        m
    }

    /// Builds a matrix from nested rows. Panics on ragged input, so this is
    /// meant for literals; use [`CMatrix::new`] for untrusted data.
    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self::new(r, c, rows.concat()).expect("finite literal matrix")
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Self {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|row| row.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    /// Outer product `|u⟩⟨v|`.
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        let mut m = Self::zeros(u.len(), v.len());
        for (i, ui) in u.iter().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                m[(i, j)] = ui * vj.conj();
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

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn column(&self, k: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, k)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest `|A[i][j] - conj(A[j][i])|`; infinite for non-square input.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    /// Largest deviation of `self^dag self` from the identity.
    pub fn orthonormality_deviation(&self) -> f64 {
        let g = &self.adjoint() * self;
        g.max_abs_diff(&Self::identity(self.cols))
    }

    /// `U A U^dag`.
    pub fn conjugate_by(&self, u: &Self) -> Self {
        &(u * self) * &u.adjoint()
    }

    /// Real parts of the diagonal.
    pub fn real_diagonal(&self) -> Vec<f64> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].re).collect()
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs.data[k * rhs.cols + j];
                }
            }
        }
        out
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Pauli matrices `σ1 = X`, `σ2 = Y`, `σ3 = Z`, indexed 1..=3; index 0 is the identity.
pub fn pauli(i: usize) -> CMatrix {
    let i_ = C64::new(0.0, 1.0);
    match i {
        0 => CMatrix::identity(2),
        1 => CMatrix::from_rows(&[vec![ZERO, ONE], vec![ONE, ZERO]]),
        2 => CMatrix::from_rows(&[vec![ZERO, -i_], vec![i_, ZERO]]),
        3 => CMatrix::from_rows(&[vec![ONE, ZERO], vec![ZERO, -ONE]]),
        _ => panic!("Pauli index {i} out of range"),
    }
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    let mut out = CMatrix::zeros(rows, cols);
    for ai in 0..a.rows {
        for aj in 0..a.cols {
            let x = a[(ai, aj)];
            for bi in 0..b.rows {
                for bj in 0..b.cols {
                    out[(ai * b.rows + bi, aj * b.cols + bj)] = x * b[(bi, bj)];
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the eigenvector for `eigenvalues[k]`.
    pub eigenvectors: CMatrix,
}

impl EigenDecomposition {
    /// `V Λ V^dag`.
    pub fn reconstruct(&self) -> CMatrix {
        let lambda = CMatrix::from_diagonal(&self.eigenvalues);
        lambda.conjugate_by(&self.eigenvectors)
    }
}

const JACOBI_MAX_SWEEPS: usize = 100;

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
pub fn eigh(matrix: &CMatrix) -> Result<EigenDecomposition> {
    if !matrix.is_square() {
        return Err(Error::NotSquare {
            rows: matrix.rows,
            cols: matrix.cols,
        });
    }
    let deviation = matrix.hermitian_deviation();
    if deviation > DENSITY_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(jacobi(matrix))
}

fn off_diagonal_norm2(a: &CMatrix) -> f64 {
    let n = a.rows;
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s
}

fn jacobi(matrix: &CMatrix) -> EigenDecomposition {
    let n = matrix.rows;
    // Symmetrize so round-off in the input cannot leak a non-Hermitian part.
    let mut a = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            a[(i, j)] = (matrix[(i, j)] + matrix[(j, i)].conj()) * 0.5;
        }
    }
    let mut v = CMatrix::identity(n);
    let scale = matrix.max_abs().max(f64::MIN_POSITIVE);
    let threshold = (f64::EPSILON * scale).powi(2) * (n * n) as f64;

    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm2(&a) <= threshold {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r <= f64::EPSILON * scale * 1e-3 {
                    continue;
                }
                // a_pq = r e^{iφ}; J = diag(1, e^{-iφ}) · R(θ) zeroes the pair.
                let phase = apq / r;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (2.0 * r);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let jpp = C64::new(c, 0.0);
                let jpq = C64::new(s, 0.0);
                let jqp = -phase.conj() * s;
                let jqq = phase.conj() * c;

                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * jpp + akq * jqp;
                    a[(k, q)] = akp * jpq + akq * jqq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
                    a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * jpp + vkq * jqp;
                    v[(k, q)] = vkp * jpq + vkq * jqq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag = a.real_diagonal();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let eigenvalues = order.iter().map(|&i| diag[i]).collect();
    let mut eigenvectors = CMatrix::zeros(n, n);
    for (new, &old) in order.iter().enumerate() {
        for k in 0..n {
            eigenvectors[(k, new)] = v[(k, old)];
        }
    }
    EigenDecomposition {
        eigenvalues,
        eigenvectors,
    }
}

/// A validated quantum state: Hermitian, unit trace, positive semidefinite.
#[derive(Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
}

impl fmt::Debug for DensityMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DensityMatrix({:?})", self.matrix)
    }
}

impl DensityMatrix {
    pub fn dim(&self) -> usize {
        self.matrix.rows
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: CMatrix::identity(dim).scale_real(1.0 / dim as f64),
        }
    }

    /// Eigenvalues with values in `[-DENSITY_TOL, 0)` clamped to zero.
    pub fn spectrum(&self) -> Vec<f64> {
        jacobi(&self.matrix)
            .eigenvalues
            .into_iter()
            .map(|l| l.max(0.0))
            .collect()
    }

    pub fn eigh(&self) -> EigenDecomposition {
        jacobi(&self.matrix)
    }

    /// Wraps a matrix produced by a channel that is known to preserve
    /// density-matrix validity (unitary conjugation, dephasing, partial trace).
    pub(crate) fn from_trusted(matrix: CMatrix) -> Self {
        debug_assert!(matrix.is_square());
        Self { matrix }
    }
}

pub fn validate_density(matrix: CMatrix) -> Result<DensityMatrix> {
    if !matrix.is_square() {
        return Err(Error::NotSquare {
            rows: matrix.rows,
            cols: matrix.cols,
        });
    }
    let deviation = matrix.hermitian_deviation();
    if deviation > DENSITY_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let trace = matrix.trace().re;
    if (trace - 1.0).abs() > DENSITY_TOL {
        return Err(Error::TraceNotOne { trace });
    }
    let min_eigenvalue = jacobi(&matrix).eigenvalues[0];
    if min_eigenvalue < -DENSITY_TOL {
        return Err(Error::NotPositiveSemidefinite { min_eigenvalue });
    }
    Ok(DensityMatrix { matrix })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Reduced state of a bipartite `dims[0] x dims[1]` system.
pub fn partial_trace(rho: &DensityMatrix, dims: [usize; 2], keep: Subsystem) -> Result<DensityMatrix> {
    let [da, db] = dims;
    if da * db != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: da * db,
        });
    }
    let m = rho.matrix();
    let out = match keep {
        Subsystem::A => {
            let mut r = CMatrix::zeros(da, da);
            for i in 0..da {
                for j in 0..da {
                    r[(i, j)] = (0..db).map(|k| m[(i * db + k, j * db + k)]).sum();
                }
            }
            r
        }
        Subsystem::B => {
            let mut r = CMatrix::zeros(db, db);
            for i in 0..db {
                for j in 0..db {
                    r[(i, j)] = (0..da).map(|k| m[(k * db + i, k * db + j)]).sum();
                }
            }
            r
        }
    };
    Ok(DensityMatrix::from_trusted(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c(rng.random_range(-1.0..1.0));
            for j in (i + 1)..n {
                let z = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        m
    }

    #[test]
    fn eigh_identity_and_pauli_x() {
        let e = eigh(&CMatrix::identity(2)).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, 1.0]);
        let e = eigh(&pauli(1)).unwrap();
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((e.eigenvalues[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eigh_block_example() {
        let m = CMatrix::from_real_rows(&[
            vec![2.0, 0.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, 0.0],
            vec![0.0, 0.0, 1.0, 1.0],
            vec![0.0, 0.0, 1.0, 1.0],
        ])
        .scale_real(0.25);
        let e = eigh(&m).unwrap();
        let expected = [0.0, 0.0, 0.5, 0.5];
        for (got, want) in e.eigenvalues.iter().zip(expected) {
            assert!((got - want).abs() < 1e-14, "{:?}", e.eigenvalues);
        }
    }

    #[test]
    fn eigh_rejects_bad_input() {
        let rect = CMatrix::zeros(2, 3);
        assert!(matches!(eigh(&rect), Err(Error::NotSquare { .. })));
        let m = CMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]);
        assert!(matches!(eigh(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn eigh_random_hermitian_reconstruction() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for case in 0..100 {
            let n = 1 + case % 8;
            let m = random_hermitian(&mut rng, n);
            let e = eigh(&m).unwrap();
            assert!(e.reconstruct().max_abs_diff(&m) <= 1e-9);
            assert!(e.eigenvectors.orthonormality_deviation() <= 1e-9);
            assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn eigh_degenerate_and_complex() {
        // σ2 has purely imaginary off-diagonals.
        let e = eigh(&pauli(2)).unwrap();
        assert!(e.reconstruct().max_abs_diff(&pauli(2)) < 1e-14);
        let m = kron(&pauli(2), &pauli(2));
        let e = eigh(&m).unwrap();
        assert!(e.reconstruct().max_abs_diff(&m) < 1e-13);
    }

    #[test]
    fn kron_examples() {
        assert_eq!(kron(&CMatrix::identity(2), &CMatrix::identity(2)), CMatrix::identity(4));
        assert_eq!(
            kron(&pauli(3), &pauli(3)),
            CMatrix::from_diagonal(&[1.0, -1.0, -1.0, 1.0])
        );
        let p0 = CMatrix::from_diagonal(&[1.0, 0.0]);
        let p1 = CMatrix::from_diagonal(&[0.0, 1.0]);
        assert_eq!(kron(&p0, &p1), CMatrix::from_diagonal(&[0.0, 1.0, 0.0, 0.0]));
    }

    #[test]
    fn kron_is_associative() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let a = random_hermitian(&mut rng, 2);
            let b = random_hermitian(&mut rng, 3);
            let cm = random_hermitian(&mut rng, 2);
            let left = kron(&kron(&a, &b), &cm);
            let right = kron(&a, &kron(&b, &cm));
            assert!(left.max_abs_diff(&right) <= 1e-12);
        }
    }

    #[test]
    fn validation_outcomes() {
        assert!(validate_density(CMatrix::from_diagonal(&[0.75, 0.25])).is_ok());
        let s3 = 3f64.sqrt() / 2.0;
        let bad = CMatrix::from_real_rows(&[vec![0.75, s3], vec![s3, 0.25]]);
        match validate_density(bad) {
            Err(Error::NotPositiveSemidefinite { min_eigenvalue }) => {
                // 1/2 - sqrt(1/4 - (3/16 - 3/4))
                let expected = 0.5 - (0.25f64 - (3.0 / 16.0 - 0.75)).sqrt();
                assert!((min_eigenvalue - expected).abs() < 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            validate_density(CMatrix::identity(2)),
            Err(Error::TraceNotOne { trace }) if trace == 2.0
        ));
        let nh = CMatrix::from_real_rows(&[vec![0.5, 0.1], vec![0.0, 0.5]]);
        assert!(matches!(validate_density(nh), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn new_rejects_non_finite_and_bad_shape() {
        assert!(matches!(
            CMatrix::new(1, 2, vec![c(1.0), c(f64::NAN)]),
            Err(Error::NonFinite { row: 0, col: 1 })
        ));
        assert!(matches!(CMatrix::new(2, 2, vec![c(1.0)]), Err(Error::Shape { .. })));
    }

    #[test]
    fn partial_trace_examples() {
        let h = 0.5;
        let bell = validate_density(CMatrix::from_real_rows(&[
            vec![h, 0.0, 0.0, h],
            vec![0.0; 4],
            vec![0.0; 4],
            vec![h, 0.0, 0.0, h],
        ]))
        .unwrap();
        let ra = partial_trace(&bell, [2, 2], Subsystem::A).unwrap();
        assert!(ra.matrix().max_abs_diff(&CMatrix::from_diagonal(&[0.5, 0.5])) < 1e-15);

        let rho_a = CMatrix::from_real_rows(&[vec![0.7, 0.2], vec![0.2, 0.3]]);
        let rho_b = CMatrix::from_diagonal(&[0.1, 0.5, 0.4]);
        let prod = validate_density(kron(&rho_a, &rho_b)).unwrap();
        let ra = partial_trace(&prod, [2, 3], Subsystem::A).unwrap();
        assert!(ra.matrix().max_abs_diff(&rho_a) < 1e-15);
        let rb = partial_trace(&prod, [2, 3], Subsystem::B).unwrap();
        assert!(rb.matrix().max_abs_diff(&rho_b) < 1e-15);

        assert!(matches!(
            partial_trace(&prod, [2, 2], Subsystem::A),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
