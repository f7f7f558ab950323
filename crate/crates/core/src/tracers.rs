//! Basis-entropy traces of Grover search, the first register of Shor's
//! period finding, and sequences of dephasing measurements.

use std::f64::consts::PI;
use std::ops::RangeInclusive;

use rustfft::FftPlanner;

use crate::extremal::{classify_purity, Purity};
use crate::measure::{apply_measurement, basis_entropy, shannon_entropy, von_neumann_entropy, ProjectorBasis};
use crate::optimize::OptimizerConfig;
use crate::qmat::DensityMatrix;
use crate::{Error, Result, C64};

/// One row of an algorithm trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRecord {
    pub step_index: usize,
    /// Bits.
    pub basis_entropy: f64,
    /// Success probability (Grover), number of outcomes with nonzero
    /// probability (Shor), or the state's entropy after the step (decoherence).
    pub auxiliary: f64,
}

pub const MAX_STATEVECTOR_QUBITS: u32 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroverConfig {
    pub n: u32,
    pub marked: u64,
    pub k: usize,
}

impl GroverConfig {
    pub fn new(n: u32, marked: u64, k: usize) -> Result<Self> {
        if n == 0 || n > 62 {
            return Err(Error::InvalidConfig(format!("qubit count {n} outside 1..=62")));
        }
        if marked >= 1u64 << n {
            return Err(Error::InvalidConfig(format!("marked index {marked} >= 2^{n}")));
        }
        Ok(Self { n, marked, k })
    }

    /// `θ = 2 arcsin(2^{−n/2})`.
    pub fn theta(&self) -> f64 {
        2.0 * (2f64.powf(-(self.n as f64) / 2.0)).asin()
    }

    /// `⌈π/(2θ) − ½⌉`, the iteration count closest to the success peak.
    pub fn k_max(&self) -> usize {
        (PI / (2.0 * self.theta()) - 0.5).ceil() as usize
    }

    /// `⌈π √(2^n) / 4⌉`, the small-angle estimate of the iteration count.
    pub fn desired_iterations(&self) -> usize {
        (PI * 2f64.powf(self.n as f64 / 2.0) / 4.0).ceil() as usize
    }
}

fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// Closed-form success probability `sin²Θ` and basis entropy
/// `−[cos²Θ log2(cos²Θ/(2^n − 1)) + sin²Θ log2 sin²Θ]`, `Θ = (2k+1)θ/2`.
pub fn grover_closed_form(cfg: GroverConfig) -> TraceRecord {
    let big_theta = (2 * cfg.k + 1) as f64 * cfg.theta() / 2.0;
    let (s, c) = big_theta.sin_cos();
    let (p_success, p_rest) = (s * s, c * c);
    let others = 2f64.powi(cfg.n as i32) - 1.0;
    let rest_term = if p_rest <= 0.0 {
        0.0
    } else {
        p_rest * (p_rest / others).log2()
    };
    TraceRecord {
        step_index: cfg.k,
        basis_entropy: -(rest_term + xlog2x(p_success)),
        auxiliary: p_success,
    }
}

/// Closed-form rows for every `k` in `ks`.
pub fn grover_trace(n: u32, ks: RangeInclusive<usize>) -> Result<Vec<TraceRecord>> {
    let base = GroverConfig::new(n, 0, 0)?;
    Ok(ks.map(|k| grover_closed_form(GroverConfig { k, ..base })).collect())
}

/// Simulates `cfg.k` Grover iterations on the `2^n` amplitude vector.
pub fn grover_statevector(cfg: GroverConfig) -> Result<TraceRecord> {
    Ok(*grover_statevector_trace(cfg.n, cfg.marked, cfg.k)?
        .last()
        .expect("trace has k + 1 rows"))
}

/// Statevector rows for `k = 0..=k_end` in one pass.
pub fn grover_statevector_trace(n: u32, marked: u64, k_end: usize) -> Result<Vec<TraceRecord>> {
    GroverConfig::new(n, marked, k_end)?;
    if n > MAX_STATEVECTOR_QUBITS {
        return Err(Error::InvalidConfig(format!(
            "statevector simulation supports at most {MAX_STATEVECTOR_QUBITS} qubits, got {n}"
        )));
    }
    let size = 1usize << n;
    let marked = marked as usize;
    let mut amps = vec![1.0 / (size as f64).sqrt(); size];
    let record = |k: usize, amps: &[f64]| {
        let probs: Vec<f64> = amps.iter().map(|a| a * a).collect();
        TraceRecord {
            step_index: k,
            // Pure state: S(ρ) = 0.
            basis_entropy: shannon_entropy(&probs),
            auxiliary: probs[marked],
        }
    };
    let mut out = Vec::with_capacity(k_end + 1);
    out.push(record(0, &amps));
    for k in 1..=k_end {
        amps[marked] = -amps[marked];
        let mean = amps.iter().sum::<f64>() / size as f64;
        for a in amps.iter_mut() {
            *a = 2.0 * mean - *a;
        }
        out.push(record(k, &amps));
    }
    Ok(out)
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShorConfig {
    pub modulus: u64,
    pub base: u64,
    /// First-register qubits.
    pub t: u32,
    /// Second-register qubits.
    pub l: u32,
}

pub const MAX_SHOR_MODULUS: u64 = 64;

impl ShorConfig {
    pub fn new(modulus: u64, base: u64, t: u32, l: u32) -> Result<Self> {
        if !(2..=MAX_SHOR_MODULUS).contains(&modulus) {
            return Err(Error::InvalidConfig(format!(
                "modulus {modulus} outside 2..={MAX_SHOR_MODULUS}"
            )));
        }
        if t == 0 || t > MAX_STATEVECTOR_QUBITS {
            return Err(Error::InvalidConfig(format!(
                "first register size {t} outside 1..={MAX_STATEVECTOR_QUBITS}"
            )));
        }
        if l >= 32 || (1u64 << l) < modulus {
            return Err(Error::InvalidConfig(format!(
                "second register of {l} qubits cannot hold residues mod {modulus}"
            )));
        }
        if gcd(base % modulus, modulus) != 1 {
            return Err(Error::InvalidConfig(format!(
                "gcd({base}, {modulus}) != 1"
            )));
        }
        Ok(Self { modulus, base, t, l })
    }

    /// Smallest `L` with `2^L >= N`.
    pub fn with_minimal_register(modulus: u64, base: u64, t: u32) -> Result<Self> {
        let l = (64 - (modulus.max(2) - 1).leading_zeros()).max(1);
        Self::new(modulus, base, t, l)
    }

    /// Multiplicative order of the base modulo N.
    pub fn order(&self) -> u64 {
        let x = self.base % self.modulus;
        let mut acc = x;
        let mut r = 1;
        while acc != 1 % self.modulus {
            acc = acc * x % self.modulus;
            r += 1;
        }
        r
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShorTrace {
    /// Steps 2 (superposition), 3 (modular exponentiation), 4 (inverse Fourier transform).
    pub records: Vec<TraceRecord>,
    pub order: u64,
}

fn register_record(step: usize, first_register: &[f64]) -> TraceRecord {
    TraceRecord {
        step_index: step,
        basis_entropy: shannon_entropy(first_register),
        auxiliary: first_register.iter().filter(|&&p| p > 1e-12).count() as f64,
    }
}

/// First-register basis entropy, measuring with `{|j⟩⟨j| ⊗ I}`, after
/// each of the three quantum steps. The joint state stays pure, so the
/// basis entropy is the entropy of the first-register outcome distribution.
pub fn shor_first_register_trace(cfg: ShorConfig) -> ShorTrace {
    let m = 1usize << cfg.t;
    let amp = 1.0 / (m as f64).sqrt();

    let uniform = vec![1.0 / m as f64; m];
    let superposed = register_record(2, &uniform);

    // After U_{x,N}: amplitude 1/√M on |j⟩|x^j mod N⟩. Group columns by residue.
    let n = cfg.modulus as usize;
    let mut columns: Vec<Vec<C64>> = vec![Vec::new(); n];
    let mut residue = 1 % cfg.modulus;
    let x = cfg.base % cfg.modulus;
    for j in 0..m {
        let col = &mut columns[residue as usize];
        if col.is_empty() {
            col.resize(m, C64::new(0.0, 0.0));
        }
        col[j] = C64::new(amp, 0.0);
        residue = residue * x % cfg.modulus;
    }
    let mut probs = vec![0.0; m];
    for col in columns.iter().filter(|c| !c.is_empty()) {
        for (p, a) in probs.iter_mut().zip(col) {
            *p += a.norm_sqr();
        }
    }
    let exponentiated = register_record(3, &probs);

    // Inverse QFT on the first register: Σ_j e^{−2πi jk/M} / √M.
    let fft = FftPlanner::<f64>::new().plan_fft_forward(m);
    let mut probs = vec![0.0; m];
    for col in columns.iter_mut().filter(|c| !c.is_empty()) {
        fft.process(col);
        for (p, a) in probs.iter_mut().zip(col.iter()) {
            *p += a.norm_sqr() / m as f64;
        }
    }
    let transformed = register_record(4, &probs);

    ShorTrace {
        records: vec![superposed, exponentiated, transformed],
        order: cfg.order(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecoherenceTrace {
    /// State after each measurement, with the basis entropy that step consumed.
    pub steps: Vec<(DensityMatrix, TraceRecord)>,
    pub final_class: Purity,
    /// Maximum basis entropy still available in the final state.
    pub final_max_basis_entropy: f64,
}

/// Applies the measurement channels in order, recording the basis entropy
/// of each step, then classifies the final state.
pub fn decohere_sequence(rho: &DensityMatrix, bases: &[ProjectorBasis], cfg: &OptimizerConfig) -> Result<DecoherenceTrace> {
    let mut current = rho.clone();
    let mut steps = Vec::with_capacity(bases.len());
    for (i, basis) in bases.iter().enumerate() {
        let be = basis_entropy(&current, basis)?;
        current = apply_measurement(&current, basis)?;
        let record = TraceRecord {
            step_index: i + 1,
            basis_entropy: be,
            auxiliary: von_neumann_entropy(&current),
        };
        steps.push((current.clone(), record));
    }
    let (final_class, final_max_basis_entropy) = classify_purity(&current, cfg)?;
    Ok(DecoherenceTrace {
        steps,
        final_class,
        final_max_basis_entropy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{qubit_basis_from_axis, MeasurementAxis};
    use crate::qmat::CMatrix;
    use crate::states::decoherence_start;

    #[test]
    fn grover_config_validation() {
        assert!(GroverConfig::new(0, 0, 0).is_err());
        assert!(GroverConfig::new(3, 8, 0).is_err());
        assert!(GroverConfig::new(3, 7, 0).is_ok());
        assert!(grover_statevector(GroverConfig::new(13, 0, 1).unwrap()).is_err());
    }

    #[test]
    fn k_max_values() {
        assert_eq!(GroverConfig::new(2, 0, 0).unwrap().k_max(), 1);
        assert_eq!(GroverConfig::new(4, 0, 0).unwrap().k_max(), 3);
        assert_eq!(GroverConfig::new(20, 0, 0).unwrap().desired_iterations(), 805);
    }

    #[test]
    fn grover_database_state_has_n_bits() {
        for n in 1..=30 {
            let r = grover_closed_form(GroverConfig::new(n, 0, 0).unwrap());
            assert!((r.basis_entropy - n as f64).abs() < 1e-12, "n = {n}: {}", r.basis_entropy);
        }
    }

    #[test]
    fn grover_n4_values() {
        let sv = grover_statevector(GroverConfig::new(4, 5, 0).unwrap()).unwrap();
        assert!((sv.basis_entropy - 4.0).abs() < 1e-12);
        let theta = 2.0 * 0.25f64.asin();
        let sv = grover_statevector(GroverConfig::new(4, 5, 3).unwrap()).unwrap();
        assert!((sv.auxiliary - (3.5 * theta).sin().powi(2)).abs() < 1e-12);
    }

    #[test]
    fn grover_n2_trace() {
        let cfg = GroverConfig::new(2, 0, 0).unwrap();
        let rows = grover_trace(2, 0..=cfg.k_max()).unwrap();
        assert_eq!(rows.len(), 2);
        // θ = π/3, one iteration lands exactly on the marked item.
        assert!((rows[1].auxiliary - 1.0).abs() < 1e-12);
        assert!(rows[1].basis_entropy.abs() < 1e-9);
    }

    #[test]
    fn shor_config_validation() {
        assert!(ShorConfig::new(15, 5, 8, 4).is_err());
        assert!(ShorConfig::new(15, 7, 8, 3).is_err());
        assert!(ShorConfig::new(65, 2, 8, 7).is_err());
        assert!(ShorConfig::new(15, 7, 13, 4).is_err());
        assert_eq!(ShorConfig::with_minimal_register(15, 7, 8).unwrap().l, 4);
        assert_eq!(ShorConfig::new(15, 7, 8, 4).unwrap().order(), 4);
        assert_eq!(ShorConfig::new(21, 2, 8, 5).unwrap().order(), 6);
    }

    #[test]
    fn shor_n15_trace() {
        let trace = shor_first_register_trace(ShorConfig::new(15, 7, 8, 4).unwrap());
        let be: Vec<f64> = trace.records.iter().map(|r| r.basis_entropy).collect();
        assert!((be[0] - 8.0).abs() < 1e-9 && (be[1] - 8.0).abs() < 1e-9 && (be[2] - 2.0).abs() < 1e-9, "{be:?}");
        assert_eq!(trace.records[2].auxiliary, 4.0);
        assert_eq!(trace.order, 4);
    }

    #[test]
    fn decoherence_example() {
        let y = qubit_basis_from_axis(MeasurementAxis::new(0.0, 1.0, 0.0).unwrap());
        let z = qubit_basis_from_axis(MeasurementAxis::Z);
        let trace = decohere_sequence(&decoherence_start(), &[z, y], &OptimizerConfig::default()).unwrap();
        let (after_z, r1) = &trace.steps[0];
        assert!(after_z.matrix().max_abs_diff(&CMatrix::from_diagonal(&[0.75, 0.25])) < 1e-15);
        assert!((r1.basis_entropy - 0.8112781244591328).abs() < 1e-12);
        let (after_y, r2) = &trace.steps[1];
        assert!(after_y.matrix().max_abs_diff(&CMatrix::from_diagonal(&[0.5, 0.5])) < 1e-15);
        assert!((r2.basis_entropy - 0.188722).abs() < 1e-6);
        assert_eq!(trace.final_class, Purity::MaximallyMixed);
    }
}
