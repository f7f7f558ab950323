//! Quantum discord of two-qubit states and the minimum-basis-entropy detector.
//!
//! `δ(A:B)` measures subsystem B: `δ = S(B) − S(AB) + min_n S(A | Π^B_n)`.

use std::f64::consts::PI;

use crate::extremal::{min_basis_entropy, BasisClass};
use crate::measure::{qubit_basis_from_axis, von_neumann_entropy, MeasurementAxis, ENTROPY_CLAMP};
use crate::optimize::{minimize, OptimizerConfig};
use crate::parallel::{map_indexed, map_slice, Execution};
use crate::qmat::{partial_trace, DensityMatrix, Subsystem};
use crate::states::{werner, BellDiagonalParams, WernerParam};
use crate::{Error, Result, C64};

/// Which subsystem is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    MeasureA,
    MeasureB,
}

impl Side {
    fn measured(self) -> Subsystem {
        match self {
            Side::MeasureA => Subsystem::A,
            Side::MeasureB => Subsystem::B,
        }
    }

    fn unmeasured(self) -> Subsystem {
        match self {
            Side::MeasureA => Subsystem::B,
            Side::MeasureB => Subsystem::A,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscordResult {
    pub delta: f64,
    pub side: Side,
    pub optimal_axis: MeasurementAxis,
    pub mutual_information: f64,
    /// Classical correlation `S(unmeasured) − min S(unmeasured | Π)`.
    pub measured_mutual: f64,
    pub converged: bool,
}

/// Variational discord uses fewer starts than the basis searches: the
/// objective lives on the 2-sphere.
pub fn default_discord_config() -> OptimizerConfig {
    OptimizerConfig::default().with_starts(32)
}

pub fn mutual_information(rho: &DensityMatrix, dims: [usize; 2]) -> Result<f64> {
    let a = partial_trace(rho, dims, Subsystem::A)?;
    let b = partial_trace(rho, dims, Subsystem::B)?;
    Ok(von_neumann_entropy(&a) + von_neumann_entropy(&b) - von_neumann_entropy(rho))
}

fn check_two_qubit(rho: &DensityMatrix) -> Result<()> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: rho.dim(),
        });
    }
    Ok(())
}

/// Entropy of the 2x2 Hermitian PSD matrix `[[a, b], [conj b, d]] / p`.
fn qubit_entropy(a: f64, d: f64, b: C64, p: f64) -> f64 {
    let half_tr = (a + d) / (2.0 * p);
    let disc = (((a - d) / (2.0 * p)).powi(2) + b.norm_sqr() / (p * p)).sqrt();
    let mut s = 0.0;
    for l in [half_tr - disc, half_tr + disc] {
        if l >= ENTROPY_CLAMP {
            s -= l * l.log2();
        }
    }
    s
}

/// `Σ_k p_k S(ρ_{rest|k})` after measuring `side` along `axis`.
pub fn measured_conditional_entropy(rho: &DensityMatrix, axis: MeasurementAxis, side: Side) -> Result<f64> {
    check_two_qubit(rho)?;
    Ok(conditional_entropy_unchecked(rho, axis, side))
}

fn conditional_entropy_unchecked(rho: &DensityMatrix, axis: MeasurementAxis, side: Side) -> f64 {
    let m = rho.matrix();
    let frame = qubit_basis_from_axis(axis).frame().clone();
    // Joint index of (measured qubit index mu, unmeasured index r).
    let idx = |mu: usize, r: usize| match side {
        Side::MeasureB => r * 2 + mu,
        Side::MeasureA => mu * 2 + r,
    };
    let mut total = 0.0;
    for k in 0..2 {
        let u = [frame[(0, k)], frame[(1, k)]];
        // Conditional block ⟨u|ρ|u⟩ on the unmeasured qubit.
        let mut block = [[C64::new(0.0, 0.0); 2]; 2];
        for (r, row) in block.iter_mut().enumerate() {
            for (s, cell) in row.iter_mut().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for mu in 0..2 {
                    for nu in 0..2 {
                        acc += u[mu].conj() * m[(idx(mu, r), idx(nu, s))] * u[nu];
                    }
                }
                *cell = acc;
            }
        }
        let p = block[0][0].re + block[1][1].re;
        if p <= ENTROPY_CLAMP {
            continue;
        }
        total += p * qubit_entropy(block[0][0].re, block[1][1].re, block[0][1], p);
    }
    total
}

fn assemble(rho: &DensityMatrix, side: Side, axis: MeasurementAxis, min_cond: f64, converged: bool) -> Result<DiscordResult> {
    let measured = von_neumann_entropy(&partial_trace(rho, [2, 2], side.measured())?);
    let unmeasured = von_neumann_entropy(&partial_trace(rho, [2, 2], side.unmeasured())?);
    let joint = von_neumann_entropy(rho);
    let mutual_information = measured + unmeasured - joint;
    let measured_mutual = unmeasured - min_cond;
    Ok(DiscordResult {
        delta: mutual_information - measured_mutual,
        side,
        optimal_axis: axis,
        mutual_information,
        measured_mutual,
        converged,
    })
}

/// Discord with the measurement axis optimized by multi-start search over
/// polar and azimuthal angles.
pub fn discord_variational(rho: &DensityMatrix, side: Side, cfg: &OptimizerConfig) -> Result<DiscordResult> {
    check_two_qubit(rho)?;
    let objective = |x: &[f64]| conditional_entropy_unchecked(rho, MeasurementAxis::from_angles(x[0], x[1]), side);
    let best = minimize(&objective, 2, cfg);
    let axis = MeasurementAxis::from_angles(best.x[0], best.x[1]);
    assemble(rho, side, axis, best.value, best.converged)
}

/// Discord with the measurement axis chosen from a `n_theta x n_phi` grid
/// over `theta ∈ [0, π]`, `phi ∈ [0, 2π]`, endpoints included.
pub fn discord_grid(rho: &DensityMatrix, side: Side, n_theta: usize, n_phi: usize, exec: Execution) -> Result<DiscordResult> {
    check_two_qubit(rho)?;
    if n_theta < 2 || n_phi < 2 {
        return Err(Error::InvalidConfig("grid needs at least 2 points per angle".into()));
    }
    let rows = map_indexed(n_theta, exec, |i| {
        let theta = PI * i as f64 / (n_theta - 1) as f64;
        (0..n_phi)
            .map(|j| {
                let phi = 2.0 * PI * j as f64 / (n_phi - 1) as f64;
                let axis = MeasurementAxis::from_angles(theta, phi);
                (conditional_entropy_unchecked(rho, axis, side), axis)
            })
            .fold((f64::INFINITY, MeasurementAxis::Z), |best, cur| if cur.0 < best.0 { cur } else { best })
    });
    let (min_cond, axis) = rows
        .into_iter()
        .fold((f64::INFINITY, MeasurementAxis::Z), |best, cur| if cur.0 < best.0 { cur } else { best });
    assemble(rho, side, axis, min_cond, true)
}

/// Closed-form discord of a Bell-diagonal state.
pub fn luo_discord(p: BellDiagonalParams) -> f64 {
    let BellDiagonalParams { c1, c2, c3 } = p;
    let c = p.c();
    let f = |x: f64| if x <= 0.0 { 0.0 } else { x * x.log2() };
    0.25 * (f(1.0 - c1 - c2 - c3) + f(1.0 - c1 + c2 + c3) + f(1.0 + c1 - c2 + c3) + f(1.0 + c1 + c2 - c3))
        - f(1.0 - c) / 2.0
        - f(1.0 + c) / 2.0
}

pub const DETECTION_THRESHOLD: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DiscordDetection {
    /// Minimum product-basis entropy above the threshold.
    DiscordPresent(f64),
    NoEvidence(f64),
}

impl DiscordDetection {
    pub fn min_basis_entropy(self) -> f64 {
        match self {
            DiscordDetection::DiscordPresent(v) | DiscordDetection::NoEvidence(v) => v,
        }
    }

    pub fn is_present(self) -> bool {
        matches!(self, DiscordDetection::DiscordPresent(_))
    }
}

/// Nonzero minimum basis entropy over independent local bases implies discord.
pub fn detect_discord(rho: &DensityMatrix, cfg: &OptimizerConfig) -> Result<DiscordDetection> {
    check_two_qubit(rho)?;
    let min = min_basis_entropy(rho, BasisClass::ProductLocal(2, 2), cfg)?.value;
    Ok(if min > DETECTION_THRESHOLD {
        DiscordDetection::DiscordPresent(min)
    } else {
        DiscordDetection::NoEvidence(min)
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WernerRow {
    pub z: f64,
    pub discord: f64,
    pub min_basis_entropy: f64,
}

/// Closed-form discord next to the same-local minimum basis entropy.
pub fn werner_sweep(z_values: &[WernerParam], cfg: &OptimizerConfig) -> Result<Vec<WernerRow>> {
    let inner = cfg.with_execution(Execution::Sequential);
    map_slice(z_values, cfg.execution, |&z| {
        let rho = werner(z);
        let zz = z.z();
        let discord = luo_discord(BellDiagonalParams::new(zz, -zz, zz)?);
        let min = min_basis_entropy(&rho, BasisClass::SameLocal(2), &inner)?.value;
        Ok(WernerRow {
            z: zz,
            discord,
            min_basis_entropy: min,
        })
    })
    .into_iter()
    .collect()
}

/// `steps + 1` evenly spaced values `0, 1/steps, ..., 1`.
pub fn werner_grid(steps: usize) -> Vec<WernerParam> {
    let steps = steps.max(1);
    (0..=steps)
        .map(|i| WernerParam::new(i as f64 / steps as f64).expect("in [0, 1]"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::kron;
    use crate::states::{asymmetric_example, bell, bell_diagonal};

    fn product_state() -> DensityMatrix {
        let a = crate::states::from_bloch(crate::states::BlochVector::new(0.1, 0.2, 0.3)).unwrap();
        let b = crate::states::from_bloch(crate::states::BlochVector::new(-0.2, 0.0, 0.15)).unwrap();
        DensityMatrix::from_trusted(kron(a.matrix(), b.matrix()))
    }

    #[test]
    fn mutual_information_examples() {
        assert!((mutual_information(&bell(), [2, 2]).unwrap() - 2.0).abs() < 1e-12);
        assert!(mutual_information(&product_state(), [2, 2]).unwrap().abs() < 1e-12);
        // Marginals diag(1/2, 1/2) and [[3/4, 1/4], [1/4, 1/4]]; joint entropy 1.
        let s_b = {
            let l = (1.0 + 0.5f64.sqrt()) / 2.0;
            -l * l.log2() - (1.0 - l) * (1.0 - l).log2()
        };
        let i = mutual_information(&asymmetric_example(), [2, 2]).unwrap();
        assert!((i - s_b).abs() < 1e-12, "{i} vs {s_b}");
    }

    #[test]
    fn conditional_entropy_examples() {
        for axis in [MeasurementAxis::Z, MeasurementAxis::from_angles(1.0, 2.0)] {
            let s = measured_conditional_entropy(&bell(), axis, Side::MeasureB).unwrap();
            assert!(s.abs() < 1e-12);
        }
        let prod = product_state();
        let s_a = von_neumann_entropy(&partial_trace(&prod, [2, 2], Subsystem::A).unwrap());
        let s = measured_conditional_entropy(&prod, MeasurementAxis::from_angles(0.4, -1.0), Side::MeasureB).unwrap();
        assert!((s - s_a).abs() < 1e-12);

        // Measuring B along z: outcome 0 with prob 3/4 leaves A in diag(2/3, 1/3);
        // outcome 1 with prob 1/4 leaves A in |1⟩.
        let s = measured_conditional_entropy(&asymmetric_example(), MeasurementAxis::Z, Side::MeasureB).unwrap();
        let h = -(2.0f64 / 3.0) * (2.0f64 / 3.0).log2() - (1.0f64 / 3.0) * (1.0f64 / 3.0).log2();
        assert!((s - 0.75 * h).abs() < 1e-12);
        let s = measured_conditional_entropy(&asymmetric_example(), MeasurementAxis::Z, Side::MeasureA).unwrap();
        assert!(s.abs() < 1e-12);
    }

    #[test]
    fn variational_examples() {
        let cfg = default_discord_config();
        let r = discord_variational(&bell(), Side::MeasureB, &cfg).unwrap();
        assert!((r.delta - 1.0).abs() < 1e-9);
        assert!((r.delta - (r.mutual_information - r.measured_mutual)).abs() < 1e-12);
        let r = discord_variational(&asymmetric_example(), Side::MeasureA, &cfg).unwrap();
        assert!(r.delta.abs() < 1e-6, "{}", r.delta);
    }

    #[test]
    fn luo_examples() {
        let third = 1.0 / 3.0;
        assert!((luo_discord(BellDiagonalParams::new(third, -third, third).unwrap()) - 0.1258).abs() < 5e-5);
        assert!((luo_discord(BellDiagonalParams::new(1.0, -1.0, 1.0).unwrap()) - 1.0).abs() < 1e-15);
        assert!(luo_discord(BellDiagonalParams::new(0.0, 0.0, 0.0).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn detection_examples() {
        let cfg = OptimizerConfig::default();
        match detect_discord(&bell(), &cfg).unwrap() {
            DiscordDetection::DiscordPresent(v) => assert!((v - 1.0).abs() < 1e-9),
            other => panic!("{other:?}"),
        }
        let classical = DensityMatrix::maximally_mixed(4);
        assert!(!detect_discord(&classical, &cfg).unwrap().is_present());
        let x = bell_diagonal(BellDiagonalParams::new(1.0, 0.0, 0.0).unwrap());
        let d = detect_discord(&x, &cfg).unwrap();
        assert!(!d.is_present(), "{d:?}");
        assert!(!detect_discord(&product_state(), &cfg).unwrap().is_present());
        assert!(detect_discord(&DensityMatrix::maximally_mixed(2), &cfg).is_err());
    }

    #[test]
    fn sweep_endpoints() {
        let rows = werner_sweep(
            &[WernerParam::new(0.0).unwrap(), WernerParam::new(1.0).unwrap()],
            &OptimizerConfig::default(),
        )
        .unwrap();
        assert!(rows[0].discord.abs() < 1e-12 && rows[0].min_basis_entropy.abs() < 1e-9);
        assert!((rows[1].discord - 1.0).abs() < 1e-12 && (rows[1].min_basis_entropy - 1.0).abs() < 1e-9);
        assert_eq!(werner_grid(100).len(), 101);
    }
}
