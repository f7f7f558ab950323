//! Basis entropy of quantum states under projective measurement.
//!
//! The basis entropy of a state `ρ` with respect to a complete set of rank-1
//! orthogonal projectors `{P_k}` is the entropy gained by the measurement
//! channel, `S(Σ_k P_k ρ P_k) − S(ρ)`, in bits.
//!
//! The crate is organised bottom-up:
//!
//! - [`qmat`]: dense complex matrices, Hermitian eigensolver, Kronecker
//!   products, partial traces and density-matrix validation.
//! - [`states`]: constructors and the text file format for every state family.
//! - [`measure`]: projector bases, the measurement channel and the entropies.
//! - [`optimize`]: seeded multi-start Nelder-Mead used by the extremal searches.
//! - [`extremal`]: maximum/minimum basis entropy and the closed-form qubit
//!   and Bell-diagonal witnesses.
//! - [`discord`]: mutual information, variational and closed-form discord,
//!   and the minimum-basis-entropy discord detector.
//! - [`tracers`]: Grover, Shor and decoherence traces.
//! - [`cli`]: the command-line front end.
//!
//! With the default `parallel` feature, multi-start searches, grid scans and
//! parameter sweeps run on the rayon thread pool. Without it every loop runs
//! sequentially and produces bit-identical results.

pub mod cli;
pub mod discord;
mod error;
pub mod extremal;
pub mod measure;
pub mod optimize;
pub mod parallel;
pub mod qmat;
pub mod sample;
pub mod states;
pub mod tracers;

pub use error::{Error, Result};
pub use measure::{basis_entropy, von_neumann_entropy, ProjectorBasis};
pub use qmat::{CMatrix, DensityMatrix};

/// Complex scalar used throughout the crate.
pub type C64 = num_complex::Complex64;
