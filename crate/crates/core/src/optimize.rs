//! Seeded multi-start Nelder-Mead minimization.
//!
//! Start `i` draws its initial point from a ChaCha8 stream keyed by
//! `(seed, i)`, so every start is reproducible on its own and the outcome
//! does not depend on how starts are scheduled across threads.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::parallel::{map_indexed, Execution};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    pub starts: usize,
    pub seed: u64,
    /// Simplex diameter (infinity norm) at which a start is converged.
    pub tol: f64,
    pub max_evals: usize,
    /// Edge length of the initial simplex.
    pub initial_step: f64,
    pub execution: Execution,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            starts: 64,
            seed: 42,
            tol: 1e-10,
            max_evals: 2000,
            initial_step: 0.5,
            execution: Execution::Parallel,
        }
    }
}

impl OptimizerConfig {
    pub fn with_starts(mut self, starts: usize) -> Self {
        self.starts = starts;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_execution(mut self, execution: Execution) -> Self {
        self.execution = execution;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalMinimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiStartResult {
    pub x: Vec<f64>,
    pub value: f64,
    /// Index of the winning start.
    pub start: usize,
    pub starts_used: usize,
    pub converged: bool,
    pub evaluations: usize,
}

/// Deterministic initial point for start `index`: uniform in `[-π, π)^dim`.
pub fn start_point(seed: u64, index: usize, dim: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    (0..dim).map(|_| rng.random_range(-PI..PI)).collect()
}

pub fn nelder_mead<F>(f: &F, x0: &[f64], step: f64, tol: f64, max_evals: usize) -> LocalMinimum
where
    F: Fn(&[f64]) -> f64 + ?Sized,
{
    let n = x0.len();
    if n == 0 {
        return LocalMinimum {
            x: Vec::new(),
            value: f(x0),
            evaluations: 1,
            converged: true,
        };
    }
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += step;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| f(v)).collect();
    let mut evals = n + 1;
    let mut converged = false;

    let point = |c: &[f64], w: &[f64], t: f64| -> Vec<f64> {
        c.iter().zip(w).map(|(ci, wi)| ci + t * (wi - ci)).collect()
    };

    loop {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let diameter = simplex[1..]
            .iter()
            .flat_map(|v| v.iter().zip(&simplex[0]).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if diameter < tol {
            converged = true;
            break;
        }
        if evals >= max_evals {
            break;
        }

        let mut centroid = vec![0.0; n];
        for v in &simplex[..n] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / n as f64;
            }
        }
        let worst = simplex[n].clone();

        let reflected = point(&centroid, &worst, -1.0);
        let fr = f(&reflected);
        evals += 1;
        if fr < values[0] {
            let expanded = point(&centroid, &worst, -2.0);
            let fe = f(&expanded);
            evals += 1;
            if fe < fr {
                simplex[n] = expanded;
                values[n] = fe;
            } else {
                simplex[n] = reflected;
                values[n] = fr;
            }
            continue;
        }
        if fr < values[n - 1] {
            simplex[n] = reflected;
            values[n] = fr;
            continue;
        }
        let (contracted, fc) = if fr < values[n] {
            let c = point(&centroid, &reflected, 0.5);
            let fc = f(&c);
            (c, fc)
        } else {
            let c = point(&centroid, &worst, 0.5);
            let fc = f(&c);
            (c, fc)
        };
        evals += 1;
        if fc < values[n].min(fr) {
            simplex[n] = contracted;
            values[n] = fc;
            continue;
        }
        let best = simplex[0].clone();
        for i in 1..=n {
            simplex[i] = point(&best, &simplex[i], 0.5);
            values[i] = f(&simplex[i]);
        }
        evals += n;
    }

    LocalMinimum {
        x: simplex.swap_remove(0),
        value: values[0],
        evaluations: evals,
        converged,
    }
}

/// Runs `cfg.starts` independent Nelder-Mead searches and keeps the lowest
/// value; ties go to the lowest start index.
pub fn minimize<F>(f: &F, dim: usize, cfg: &OptimizerConfig) -> MultiStartResult
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let starts = cfg.starts.max(1);
    let runs = map_indexed(starts, cfg.execution, |i| {
        let x0 = start_point(cfg.seed, i, dim);
        nelder_mead(f, &x0, cfg.initial_step, cfg.tol, cfg.max_evals)
    });
    let evaluations = runs.iter().map(|r| r.evaluations).sum();
    let (start, best) = runs
        .into_iter()
        .enumerate()
        .reduce(|best, cur| if cur.1.value < best.1.value { cur } else { best })
        .expect("at least one start");
    MultiStartResult {
        x: best.x,
        value: best.value,
        start,
        starts_used: starts,
        converged: best.converged,
        evaluations,
    }
}
