//! Projector bases, the projective measurement channel and entropies.
//!
//! A basis is an orthonormal frame; column `k` defines the rank-1 projector
//! `P_k = |u_k⟩⟨u_k|`. All entropies are in bits.

use crate::qmat::{kron, pauli, CMatrix, DensityMatrix};
use crate::{Error, Result, C64};

/// Frame orthonormality tolerance.
pub const FRAME_TOL: f64 = 1e-9;

/// Eigenvalues (or probabilities) below this contribute nothing to entropy.
pub const ENTROPY_CLAMP: f64 = 1e-12;

/// Parameters of the qubit unitary `V = tI + i(y1σ1 + y2σ2 + y3σ3)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitaryAxisParam {
    pub t: f64,
    pub y1: f64,
    pub y2: f64,
    pub y3: f64,
}

impl UnitaryAxisParam {
    pub fn new(t: f64, y1: f64, y2: f64, y3: f64) -> Result<Self> {
        let norm = t * t + y1 * y1 + y2 * y2 + y3 * y3;
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidConfig(format!(
                "unitary parameter t^2 + |y|^2 = {norm}, expected 1"
            )));
        }
        Ok(Self { t, y1, y2, y3 })
    }

    /// `[[t + iy3, iy1 + y2], [iy1 − y2, t − iy3]]`.
    pub fn unitary(&self) -> CMatrix {
        let Self { t, y1, y2, y3 } = *self;
        CMatrix::from_rows(&[
            vec![C64::new(t, y3), C64::new(y2, y1)],
            vec![C64::new(-y2, y1), C64::new(t, -y3)],
        ])
    }
}

/// Unit vector `n` such that the measurement projectors are `½(I ± n·σ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementAxis {
    pub z1: f64,
    pub z2: f64,
    pub z3: f64,
}

impl MeasurementAxis {
    pub fn new(z1: f64, z2: f64, z3: f64) -> Result<Self> {
        let norm = z1 * z1 + z2 * z2 + z3 * z3;
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidConfig(format!(
                "measurement axis has squared length {norm}, expected 1"
            )));
        }
        Ok(Self { z1, z2, z3 })
    }

    /// Rescales a nonzero vector to unit length.
    pub fn normalized(z1: f64, z2: f64, z3: f64) -> Result<Self> {
        let n = (z1 * z1 + z2 * z2 + z3 * z3).sqrt();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::InvalidConfig("measurement axis must be a nonzero vector".into()));
        }
        Ok(Self {
            z1: z1 / n,
            z2: z2 / n,
            z3: z3 / n,
        })
    }

    /// Polar angle `theta` from the 3-axis, azimuth `phi` from the 1-axis.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Self {
            z1: st * cp,
            z2: st * sp,
            z3: ct,
        }
    }

    pub const Z: Self = Self {
        z1: 0.0,
        z2: 0.0,
        z3: 1.0,
    };

    pub fn as_array(&self) -> [f64; 3] {
        [self.z1, self.z2, self.z3]
    }

    pub fn dot(&self, v: [f64; 3]) -> f64 {
        self.z1 * v[0] + self.z2 * v[1] + self.z3 * v[2]
    }

    /// `n·σ`.
    pub fn pauli_operator(&self) -> CMatrix {
        &(&pauli(1).scale_real(self.z1) + &pauli(2).scale_real(self.z2)) + &pauli(3).scale_real(self.z3)
    }
}

/// Measurement direction `V σ3 V†` induced by `V = tI + i y·σ`.
pub fn axis_from_param(p: UnitaryAxisParam) -> MeasurementAxis {
    let UnitaryAxisParam { t, y1, y2, y3 } = p;
    MeasurementAxis {
        z1: 2.0 * (-t * y2 + y1 * y3),
        z2: 2.0 * (t * y1 + y2 * y3),
        z3: t * t + y3 * y3 - y1 * y1 - y2 * y2,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BasisStructure {
    General,
    LocalProduct {
        dims: (usize, usize),
        frame_a: CMatrix,
        frame_b: CMatrix,
    },
    /// The same local frame on both factors.
    SameLocal { frame_local: CMatrix },
}

/// A complete set of rank-1 orthogonal projectors.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectorBasis {
    frame: CMatrix,
    structure: BasisStructure,
}

impl ProjectorBasis {
    pub fn new(frame: CMatrix) -> Result<Self> {
        check_frame(&frame)?;
        Ok(Self {
            frame,
            structure: BasisStructure::General,
        })
    }

    pub(crate) fn from_trusted_frame(frame: CMatrix) -> Self {
        debug_assert!(frame.orthonormality_deviation() <= FRAME_TOL);
        Self {
            frame,
            structure: BasisStructure::General,
        }
    }

    pub fn computational(dim: usize) -> Self {
        Self::from_trusted_frame(CMatrix::identity(dim))
    }

    /// Frame whose columns are the eigenvectors of `rho`.
    pub fn eigenbasis(rho: &DensityMatrix) -> Self {
        Self::from_trusted_frame(rho.eigh().eigenvectors)
    }

    /// Basis `{V|0⟩, V|1⟩}` for `V = tI + i y·σ`.
    pub fn from_unitary_param(p: UnitaryAxisParam) -> Self {
        Self::from_trusted_frame(p.unitary())
    }

    pub fn dim(&self) -> usize {
        self.frame.rows()
    }

    pub fn frame(&self) -> &CMatrix {
        &self.frame
    }

    pub fn structure(&self) -> &BasisStructure {
        &self.structure
    }

    pub fn projectors(&self) -> Vec<CMatrix> {
        (0..self.dim())
            .map(|k| {
                let u = self.frame.column(k);
                CMatrix::outer(&u, &u)
            })
            .collect()
    }

    /// Basis with frame `U·F`.
    pub fn rotated(&self, u: &CMatrix) -> Result<Self> {
        Self::new(u * &self.frame)
    }
}

fn check_frame(frame: &CMatrix) -> Result<()> {
    if !frame.is_square() {
        return Err(Error::NotSquare {
            rows: frame.rows(),
            cols: frame.cols(),
        });
    }
    let deviation = frame.orthonormality_deviation();
    if deviation > FRAME_TOL {
        return Err(Error::NotOrthonormal { deviation });
    }
    Ok(())
}

/// The qubit basis `P± = ½(I ± n·σ)`; `P+` is column 0.
pub fn qubit_basis_from_axis(n: MeasurementAxis) -> ProjectorBasis {
    let theta = n.z3.clamp(-1.0, 1.0).acos();
    let phi = n.z2.atan2(n.z1);
    let (s, c) = (theta / 2.0).sin_cos();
    let e = C64::from_polar(1.0, phi);
    let frame = CMatrix::from_rows(&[vec![C64::new(c, 0.0), -e.conj() * s], vec![e * s, C64::new(c, 0.0)]]);
    ProjectorBasis::from_trusted_frame(frame)
}

pub fn product_basis(a: &ProjectorBasis, b: &ProjectorBasis) -> ProjectorBasis {
    ProjectorBasis {
        frame: kron(&a.frame, &b.frame),
        structure: BasisStructure::LocalProduct {
            dims: (a.dim(), b.dim()),
            frame_a: a.frame.clone(),
            frame_b: b.frame.clone(),
        },
    }
}

/// `(local) ⊗ (local)`.
pub fn same_local_basis(local: &ProjectorBasis) -> ProjectorBasis {
    ProjectorBasis {
        frame: kron(&local.frame, &local.frame),
        structure: BasisStructure::SameLocal {
            frame_local: local.frame.clone(),
        },
    }
}

fn check_dims(rho: &DensityMatrix, basis: &ProjectorBasis) -> Result<()> {
    if rho.dim() != basis.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: basis.dim(),
        });
    }
    Ok(())
}

/// Outcome probabilities `p_k = ⟨u_k|ρ|u_k⟩`.
pub fn outcome_probabilities(rho: &DensityMatrix, basis: &ProjectorBasis) -> Result<Vec<f64>> {
    check_dims(rho, basis)?;
    Ok(frame_probabilities(rho.matrix(), basis.frame()))
}

pub(crate) fn frame_probabilities(rho: &CMatrix, frame: &CMatrix) -> Vec<f64> {
    let n = frame.rows();
    (0..n)
        .map(|k| {
            let mut acc = C64::new(0.0, 0.0);
            for i in 0..n {
                let ui = frame[(i, k)].conj();
                if ui == C64::new(0.0, 0.0) {
                    continue;
                }
                let mut row = C64::new(0.0, 0.0);
                for j in 0..n {
                    row += rho[(i, j)] * frame[(j, k)];
                }
                acc += ui * row;
            }
            acc.re
        })
        .collect()
}

/// The measurement channel `ρ ↦ Σ_k P_k ρ P_k`.
pub fn apply_measurement(rho: &DensityMatrix, basis: &ProjectorBasis) -> Result<DensityMatrix> {
    let p = outcome_probabilities(rho, basis)?;
    let diag = CMatrix::from_diagonal(&p);
    Ok(DensityMatrix::from_trusted(diag.conjugate_by(basis.frame())))
}

/// `−Σ p log2 p`, skipping entries below [`ENTROPY_CLAMP`].
pub fn shannon_entropy(p: &[f64]) -> f64 {
    p.iter()
        .filter(|&&x| x >= ENTROPY_CLAMP)
        .map(|&x| -x * x.log2())
        .sum()
}

pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    shannon_entropy(&rho.spectrum())
}

/// `S(Σ P_k ρ P_k) − S(ρ)`.
///
/// The dephased state is diagonal in the basis frame, so its spectrum is
/// exactly the outcome distribution.
pub fn basis_entropy(rho: &DensityMatrix, basis: &ProjectorBasis) -> Result<f64> {
    let p = outcome_probabilities(rho, basis)?;
    Ok(shannon_entropy(&p) - von_neumann_entropy(rho))
}
