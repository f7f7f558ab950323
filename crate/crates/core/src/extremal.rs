//! Extremal basis entropy over classes of projector bases, plus the
//! closed-form qubit and Bell-diagonal results.

use std::f64::consts::PI;

use crate::measure::{
    basis_entropy, frame_probabilities, shannon_entropy, von_neumann_entropy, MeasurementAxis,
    ProjectorBasis, UnitaryAxisParam,
};
use crate::measure::{product_basis, same_local_basis};
use crate::optimize::{minimize, OptimizerConfig};
use crate::qmat::{kron, CMatrix, DensityMatrix};
use crate::states::{BellDiagonalParams, BlochVector};
use crate::{Error, Result, C64};

/// A family of rank-1 projector bases reachable by a real parameter vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisClass {
    /// Any orthonormal frame in dimension `D`.
    GeneralRank1(usize),
    /// `frame_A ⊗ frame_B` with independent local frames.
    ProductLocal(usize, usize),
    /// `frame ⊗ frame` with one local frame of dimension `d`.
    SameLocal(usize),
}

impl BasisClass {
    pub fn dim(&self) -> usize {
        match *self {
            BasisClass::GeneralRank1(d) => d,
            BasisClass::ProductLocal(a, b) => a * b,
            BasisClass::SameLocal(d) => d * d,
        }
    }

    pub fn param_count(&self) -> usize {
        match *self {
            BasisClass::GeneralRank1(d) | BasisClass::SameLocal(d) => d * (d - 1),
            BasisClass::ProductLocal(a, b) => a * (a - 1) + b * (b - 1),
        }
    }

    fn frame(&self, params: &[f64]) -> CMatrix {
        match *self {
            BasisClass::GeneralRank1(d) => givens_frame(d, params),
            BasisClass::SameLocal(d) => {
                let f = givens_frame(d, params);
                kron(&f, &f)
            }
            BasisClass::ProductLocal(a, b) => {
                let (pa, pb) = params.split_at(a * (a - 1));
                kron(&givens_frame(a, pa), &givens_frame(b, pb))
            }
        }
    }

    /// The basis for a parameter vector of length [`BasisClass::param_count`].
    pub fn basis(&self, params: &[f64]) -> ProjectorBasis {
        assert_eq!(params.len(), self.param_count(), "parameter count");
        match *self {
            BasisClass::GeneralRank1(d) => ProjectorBasis::from_trusted_frame(givens_frame(d, params)),
            BasisClass::SameLocal(d) => {
                same_local_basis(&ProjectorBasis::from_trusted_frame(givens_frame(d, params)))
            }
            BasisClass::ProductLocal(a, b) => {
                let (pa, pb) = params.split_at(a * (a - 1));
                product_basis(
                    &ProjectorBasis::from_trusted_frame(givens_frame(a, pa)),
                    &ProjectorBasis::from_trusted_frame(givens_frame(b, pb)),
                )
            }
        }
    }
}

/// Ordered product of phased Givens rotations, one per coordinate pair
/// `(i, j)`, `i < j`. Each pair consumes an angle and a phase.
pub fn givens_frame(dim: usize, params: &[f64]) -> CMatrix {
    assert_eq!(params.len(), dim * (dim - 1), "Givens parameter count");
    let mut u = CMatrix::identity(dim);
    let mut k = 0;
    for i in 0..dim {
        for j in (i + 1)..dim {
            let (s, c) = params[k].sin_cos();
            let e = C64::from_polar(1.0, params[k + 1]);
            k += 2;
            // Right-multiply by G acting on columns i, j:
            // G = [[c, -e s], [conj(e) s, c]].
            for r in 0..dim {
                let ui = u[(r, i)];
                let uj = u[(r, j)];
                u[(r, i)] = ui * c + uj * e.conj() * s;
                u[(r, j)] = -ui * e * s + uj * c;
            }
        }
    }
    u
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtremalResult {
    /// Basis entropy in bits, recomputed at `basis`.
    pub value: f64,
    pub basis: ProjectorBasis,
    pub starts_used: usize,
    pub converged: bool,
}

fn check_class(rho: &DensityMatrix, class: BasisClass) -> Result<()> {
    if class.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: class.dim(),
        });
    }
    if class.param_count() == 0 {
        return Err(Error::InvalidConfig(format!("{class:?} has no free parameters")));
    }
    Ok(())
}

fn search(rho: &DensityMatrix, class: BasisClass, cfg: &OptimizerConfig, sign: f64) -> Result<ExtremalResult> {
    check_class(rho, class)?;
    let m = rho.matrix();
    let objective = |x: &[f64]| sign * shannon_entropy(&frame_probabilities(m, &class.frame(x)));
    let best = minimize(&objective, class.param_count(), cfg);
    let basis = class.basis(&best.x);
    Ok(ExtremalResult {
        value: basis_entropy(rho, &basis)?,
        basis,
        starts_used: best.starts_used,
        converged: best.converged,
    })
}

/// Local maximum of basis entropy over `class` found by multi-start search.
pub fn max_basis_entropy(rho: &DensityMatrix, class: BasisClass, cfg: &OptimizerConfig) -> Result<ExtremalResult> {
    search(rho, class, cfg, -1.0)
}

/// Minimum basis entropy over `class`. For [`BasisClass::GeneralRank1`] the
/// minimum is attained at the eigenbasis and no search is run.
pub fn min_basis_entropy(rho: &DensityMatrix, class: BasisClass, cfg: &OptimizerConfig) -> Result<ExtremalResult> {
    if let BasisClass::GeneralRank1(d) = class {
        if d != rho.dim() {
            return Err(Error::DimensionMismatch {
                expected: rho.dim(),
                found: d,
            });
        }
        let basis = ProjectorBasis::eigenbasis(rho);
        return Ok(ExtremalResult {
            value: basis_entropy(rho, &basis)?,
            basis,
            starts_used: 0,
            converged: true,
        });
    }
    search(rho, class, cfg, 1.0)
}

/// Eigenbasis of `rho` rotated by the discrete Fourier transform. Every
/// basis vector has overlap `1/D` with every eigenvector, so the outcomes
/// are uniform and the basis entropy is `log2 D − S(ρ)`.
pub fn unbiased_to_eigenbasis(rho: &DensityMatrix) -> ProjectorBasis {
    let d = rho.dim();
    let mut dft = CMatrix::zeros(d, d);
    let norm = 1.0 / (d as f64).sqrt();
    for j in 0..d {
        for k in 0..d {
            dft[(j, k)] = C64::from_polar(norm, 2.0 * PI * (j * k) as f64 / d as f64);
        }
    }
    ProjectorBasis::from_trusted_frame(&rho.eigh().eigenvectors * &dft)
}

/// A unit axis orthogonal to the Bloch vector. Measuring along it gives
/// uniform outcomes, hence basis entropy `1 − S(ρ)`.
///
/// Returns the component of the 3-axis orthogonal to `v`, or the 1-axis
/// when `v` is parallel to the 3-axis. The zero vector yields the 3-axis.
pub fn orthogonal_axis_witness(v: BlochVector) -> MeasurementAxis {
    let n = v.norm();
    if n == 0.0 {
        return MeasurementAxis::Z;
    }
    let u = [v.a / n, v.b / n, v.c / n];
    let project = |e: [f64; 3]| {
        let d = e[0] * u[0] + e[1] * u[1] + e[2] * u[2];
        [e[0] - d * u[0], e[1] - d * u[1], e[2] - d * u[2]]
    };
    let w = project([0.0, 0.0, 1.0]);
    let len = (w[0] * w[0] + w[1] * w[1] + w[2] * w[2]).sqrt();
    let w = if len > 1e-8 { w } else { project([1.0, 0.0, 0.0]) };
    MeasurementAxis::normalized(w[0], w[1], w[2]).expect("nonzero orthogonal component")
}

/// The explicit solution `(t, 0, y, y)` of
/// `2a(−t y2 + y1 y3) + 2b(t y1 + y2 y3) + c(t² + y3² − y1² − y2²) = 0`
/// with `t² + |y|² = 1`, valid when all radicands are nonnegative and
/// `a c ≠ 0`, `P = 2(2a² + b² − 2bc + c²) ≠ 0`.
pub fn b9_parameter_solution(a: f64, b: f64, c: f64) -> Result<UnitaryAxisParam> {
    let p = 2.0 * (2.0 * a * a + b * b - 2.0 * b * c + c * c);
    if p == 0.0 {
        return Err(Error::OutsideSolutionDomain {
            subexpression: "P = 2(2a^2 + b^2 - 2bc + c^2)",
            value: p,
        });
    }
    if a * c == 0.0 {
        return Err(Error::OutsideSolutionDomain {
            subexpression: "ac",
            value: a * c,
        });
    }
    let inner = a.powi(4) - 2.0 * a * a * b * c;
    if inner < 0.0 {
        return Err(Error::OutsideSolutionDomain {
            subexpression: "a^4 - 2a^2bc",
            value: inner,
        });
    }
    let q = a * a / p + c * c / p - b * c / p - inner.sqrt() / p;
    if q < 0.0 {
        return Err(Error::OutsideSolutionDomain {
            subexpression: "(a^2 + c^2 - bc - sqrt(a^4 - 2a^2bc)) / P",
            value: q,
        });
    }
    let r = q.sqrt();
    let r3 = q.powf(1.5);
    let t = (2.0 * a * a * r - b * c * r + c * c * r - 4.0 * a * a * r3 - 2.0 * b * b * r3 + 4.0 * b * c * r3
        - 2.0 * c * c * r3)
        / (a * c);
    Ok(UnitaryAxisParam {
        t,
        y1: 0.0,
        y2: r,
        y3: r,
    })
}

/// `2a(−t y2 + y1 y3) + 2b(t y1 + y2 y3) + c(t² + y3² − y1² − y2²)`.
pub fn vanishing_condition(v: BlochVector, p: UnitaryAxisParam) -> f64 {
    let UnitaryAxisParam { t, y1, y2, y3 } = p;
    2.0 * v.a * (-t * y2 + y1 * y3) + 2.0 * v.b * (t * y1 + y2 * y3) + v.c * (t * t + y3 * y3 - y1 * y1 - y2 * y2)
}

fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// Minimum basis entropy of a Bell-diagonal state over same-local bases:
/// `¼ Σ λ' log2 λ' − (1−c)/2 log2(1−c) − (1+c)/2 log2(1+c)` with
/// `λ' = 1 ± c1 ± c2 ± c3` over the four eigenvalue sign patterns.
pub fn min_be_bell_diagonal(p: BellDiagonalParams) -> f64 {
    let c = p.c();
    let spectral: f64 = p.eigenvalues().iter().map(|&l| xlog2x(4.0 * l)).sum();
    spectral / 4.0 - xlog2x(1.0 - c) / 2.0 - xlog2x(1.0 + c) / 2.0
}

/// Spectrum of a Bell-diagonal state dephased by `V ⊗ V` with measurement
/// axis `z`: `(1 ∓ w)/4`, each twice, where `w = c1 z1² + c2 z2² + c3 z3²`.
pub fn same_local_dephased_spectrum(p: BellDiagonalParams, z: MeasurementAxis) -> [f64; 4] {
    let w = p.c1 * z.z1 * z.z1 + p.c2 * z.z2 * z.z2 + p.c3 * z.z3 * z.z3;
    let lo = (1.0 - w) / 4.0;
    let hi = (1.0 + w) / 4.0;
    [lo, lo, hi, hi]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Purity {
    Pure,
    Mixed,
    MaximallyMixed,
}

pub const PURITY_TOL: f64 = 1e-6;

/// Classifies a single-system state by its maximum basis entropy.
pub fn classify_purity(rho: &DensityMatrix, cfg: &OptimizerConfig) -> Result<(Purity, f64)> {
    let d = rho.dim();
    if d == 1 {
        return Ok((Purity::MaximallyMixed, 0.0));
    }
    let max = max_basis_entropy(rho, BasisClass::GeneralRank1(d), cfg)?.value;
    let class = if (max - (d as f64).log2()).abs() <= PURITY_TOL {
        Purity::Pure
    } else if max <= PURITY_TOL {
        Purity::MaximallyMixed
    } else {
        Purity::Mixed
    };
    Ok((class, max))
}

/// `log2 D − S(ρ)`: the basis entropy of [`unbiased_to_eigenbasis`].
pub fn max_basis_entropy_bound(rho: &DensityMatrix) -> f64 {
    (rho.dim() as f64).log2() - von_neumann_entropy(rho)
}
