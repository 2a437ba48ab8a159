use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lgp_core::evalkit::{planted_trap_matrices, robust_portfolio, RobustParams, TrapSimParams};
use lgp_core::features::FeatureConfig;
use lgp_core::par::Exec;
use lgp_core::selectors::FactIndex;
use lgp_core::synth::{synthetic_library, LibraryParams};

fn featurize(c: &mut Criterion) {
    let lib = synthetic_library(&LibraryParams { facts: 2000, predicates: 200, constants: 60, depth: 3 }, 1);
    let corpus = Arc::new(lib.corpus);
    let cfg = FeatureConfig::default();
    let mut g = c.benchmark_group("featurize_corpus");
    for exec in [Exec::Sequential, Exec::Parallel] {
        g.bench_with_input(BenchmarkId::from_parameter(format!("{exec:?}")), &exec, |b, &exec| {
            b.iter(|| FactIndex::build(&corpus, &cfg, exec))
        });
    }
    g.finish();
}

fn portfolio(c: &mut Criterion) {
    let sim = planted_trap_matrices(&TrapSimParams::default(), 3);
    let p = RobustParams { n_splits: 200, extra_splits: 20, ..Default::default() };
    let mut g = c.benchmark_group("robust_portfolio");
    g.sample_size(10);
    for exec in [Exec::Sequential, Exec::Parallel] {
        g.bench_with_input(BenchmarkId::from_parameter(format!("{exec:?}")), &exec, |b, &exec| {
            b.iter(|| robust_portfolio(&sim.devel, 6.0, 1.0, &p, exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, featurize, portfolio);
criterion_main!(benches);
