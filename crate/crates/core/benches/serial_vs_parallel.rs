use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qcoin_core::montecarlo::simulate;
use qcoin_core::oracle::{brute_force_count_with, DEFAULT_BUDGET};
use qcoin_core::{CoinModel, Execution, PatternSpec, Placement};

const MODES: [(&str, Execution); 2] = [("serial", Execution::Serial), ("parallel", Execution::Parallel)];

fn brute_force(c: &mut Criterion) {
    let mut group = c.benchmark_group("brute_force_count");
    group.sample_size(10);
    for n in [16u32, 20] {
        let spec = PatternSpec::binary(n, Placement::AnywhereOnce).unwrap();
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &spec, |b, spec| {
                b.iter(|| brute_force_count_with(spec, DEFAULT_BUDGET, exec).unwrap())
            });
        }
    }
    let qudit = PatternSpec::single(4, 10, Placement::AtEnd).unwrap();
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, "d4_m10"), &qudit, |b, spec| {
            b.iter(|| brute_force_count_with(spec, DEFAULT_BUDGET, exec).unwrap())
        });
    }
    group.finish();
}

fn monte_carlo(c: &mut Criterion) {
    let mut group = c.benchmark_group("simulate");
    group.sample_size(10);
    let fair = CoinModel::fair(2).unwrap();
    for runs in [100_000u64, 1_000_000] {
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, runs), &runs, |b, &runs| {
                b.iter(|| simulate(&fair, 8, Placement::AtEnd, runs, 1, exec).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, brute_force, monte_carlo);
criterion_main!(benches);
