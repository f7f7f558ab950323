use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use basis_entropy::discord::{discord_grid, werner_grid, werner_sweep, Side};
use basis_entropy::extremal::{max_basis_entropy, BasisClass};
use basis_entropy::optimize::OptimizerConfig;
use basis_entropy::parallel::Execution;
use basis_entropy::states::asymmetric_example;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn multistart(c: &mut Criterion) {
    let rho = asymmetric_example();
    let mut group = c.benchmark_group("max_basis_entropy_general_d4");
    group.sample_size(10);
    for (name, exec) in MODES {
        let cfg = OptimizerConfig::default().with_execution(exec);
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| max_basis_entropy(&rho, BasisClass::GeneralRank1(4), &cfg).unwrap())
        });
    }
    group.finish();
}

fn sweep(c: &mut Criterion) {
    let zs = werner_grid(20);
    let mut group = c.benchmark_group("werner_sweep_21");
    group.sample_size(10);
    for (name, exec) in MODES {
        let cfg = OptimizerConfig::default().with_execution(exec);
        group.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| werner_sweep(&zs, &cfg).unwrap()));
    }
    group.finish();
}

fn grid(c: &mut Criterion) {
    let rho = asymmetric_example();
    let mut group = c.benchmark_group("discord_grid_181x361");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| discord_grid(&rho, Side::MeasureB, 181, 361, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, multistart, sweep, grid);
criterion_main!(benches);
