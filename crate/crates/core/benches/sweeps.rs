use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pinching_noma::oracle::exhaustive_placement_with;
use pinching_noma::sim::{run_oracle_comparison_with, run_power_sweep_with, scenario_for};
use pinching_noma::{Execution, RunConfig};

const MODES: [Execution; 2] = [Execution::Sequential, Execution::Parallel];

fn label(exec: Execution) -> &'static str {
    match exec {
        Execution::Sequential => "sequential",
        Execution::Parallel => "parallel",
    }
}

fn power_sweep(c: &mut Criterion) {
    let mut cfg = RunConfig::default();
    cfg.sweep.trials = 20;
    cfg.sweep.pt_dbm_values = vec![10.0, 30.0];
    cfg.sweep.d_values = vec![10.0, 20.0];
    let mut group = c.benchmark_group("power_sweep");
    group.sample_size(10);
    for exec in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(label(exec)), &cfg, |b, cfg| {
            b.iter(|| run_power_sweep_with(exec, black_box(cfg)).unwrap())
        });
    }
    group.finish();
}

fn oracle(c: &mut Criterion) {
    let cfg = RunConfig::default();
    let users = scenario_for(cfg.sweep.seed, 0, cfg.system.side_d)
        .unwrap()
        .users();
    let mut group = c.benchmark_group("two_stage_oracle");
    group.sample_size(10);
    for exec in MODES {
        group.bench_function(label(exec), |b| {
            b.iter(|| {
                exhaustive_placement_with(
                    exec,
                    &cfg.system,
                    black_box(&users),
                    &cfg.qos,
                    &cfg.oracle,
                )
                .unwrap()
            })
        });
    }
    group.finish();

    let mut cmp = cfg.clone();
    cmp.sweep.trials = 8;
    let mut group = c.benchmark_group("oracle_comparison");
    group.sample_size(10);
    for exec in MODES {
        group.bench_function(label(exec), |b| {
            b.iter(|| run_oracle_comparison_with(exec, black_box(&cmp)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, power_sweep, oracle);
criterion_main!(benches);
