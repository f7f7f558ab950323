//! Seeded random states, frames and parameters for property checks.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::qmat::{CMatrix, DensityMatrix};
use crate::states::{BellDiagonalParams, BlochVector};
use crate::C64;

fn gaussian_c64<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random pure state as a normalized amplitude vector.
pub fn pure_amplitudes<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..dim).map(|_| gaussian_c64(rng)).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

pub fn pure_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DensityMatrix {
    let psi = pure_amplitudes(rng, dim);
    DensityMatrix::from_trusted(CMatrix::outer(&psi, &psi))
}

/// `G G† / tr(G G†)` for a `dim x rank` complex Ginibre matrix `G`.
pub fn mixed_state<R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize) -> DensityMatrix {
    let data = (0..dim * rank).map(|_| gaussian_c64(rng)).collect();
    let g = CMatrix::new(dim, rank, data).expect("finite samples");
    let w = &g * &g.adjoint();
    let tr = w.trace().re;
    let mut m = w.scale_real(1.0 / tr);
    // Exact Hermitian symmetry.
    for i in 0..dim {
        m[(i, i)] = C64::new(m[(i, i)].re, 0.0);
        for j in (i + 1)..dim {
            m[(j, i)] = m[(i, j)].conj();
        }
    }
    DensityMatrix::from_trusted(m)
}

/// Haar-random unitary from Gram-Schmidt on a Ginibre matrix.
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CMatrix {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<C64> = (0..dim).map(|_| gaussian_c64(rng)).collect();
        for u in &cols {
            let overlap: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi -= overlap * ui;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            cols.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    let mut m = CMatrix::zeros(dim, dim);
    for (j, col) in cols.iter().enumerate() {
        for (i, z) in col.iter().enumerate() {
            m[(i, j)] = *z;
        }
    }
    m
}

/// Uniform direction scaled to a radius in `[0, ½]`; `radius = None` draws it uniformly.
pub fn bloch_vector<R: Rng + ?Sized>(rng: &mut R, radius: Option<f64>) -> BlochVector {
    let r = radius.unwrap_or_else(|| rng.random_range(0.0..0.5));
    loop {
        let v: [f64; 3] = [rng.sample(StandardNormal), rng.sample(StandardNormal), rng.sample(StandardNormal)];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-8 {
            return BlochVector::new(r * v[0] / n, r * v[1] / n, r * v[2] / n);
        }
    }
}

/// Uniform over the tetrahedron of valid Bell-diagonal parameters (rejection from the cube).
pub fn bell_diagonal_params<R: Rng + ?Sized>(rng: &mut R) -> BellDiagonalParams {
    loop {
        let c: [f64; 3] = [
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        ];
        if let Ok(p) = BellDiagonalParams::new(c[0], c[1], c[2]) {
            return p;
        }
    }
}
