use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use modtheory::{spec_min, Caps, Config, Execution, ModuleAnalysis};
use modtheory_cli::fixture_module;
use modtheory_cli::fuzz::{fuzz, FuzzConfig};
use modtheory_cli::report::run_suite;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn engine(execution: Execution) -> Config {
    Config { execution, ..Config::default() }
}

fn spectrum(c: &mut Criterion) {
    let mut group = c.benchmark_group("spec_min");
    for name in ["e28", "z6-truncated-2.3"] {
        let m = fixture_module(name, &Caps::default()).unwrap();
        for (label, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(label, name), &m, |b, m| {
                b.iter(|| {
                    let a = ModuleAnalysis::new(m.clone(), engine(exec)).unwrap();
                    black_box(spec_min(&a).unwrap().primes.len())
                })
            });
        }
    }
    group.finish();
}

fn products(c: &mut Criterion) {
    let mut group = c.benchmark_group("all_products");
    let m = fixture_module("e28", &Caps::default()).unwrap();
    for (label, exec) in MODES {
        group.bench_function(label, |b| {
            b.iter(|| {
                let a = ModuleAnalysis::new(m.clone(), engine(exec)).unwrap();
                let n = a.lattice().len();
                let mut acc = 0;
                for k in 0..n {
                    for l in 0..n {
                        acc += a.product(k, l).unwrap();
                    }
                }
                black_box(acc)
            })
        });
    }
    group.finish();
}

fn suite(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify_all");
    group.sample_size(10);
    let m = fixture_module("e28", &Caps::default()).unwrap();
    for (label, exec) in MODES {
        group.bench_function(label, |b| b.iter(|| black_box(run_suite(&m, "all", &engine(exec)).unwrap().violations())));
    }
    group.finish();
}

fn fuzz_batch(c: &mut Criterion) {
    let mut group = c.benchmark_group("fuzz_batch");
    group.sample_size(10);
    for (label, exec) in MODES {
        let cfg = FuzzConfig {
            trials: 24,
            max_ring_order: 8,
            max_module_order: 16,
            seed: 7,
            suites: vec!["all".into()],
            engine: engine(exec),
            corpus: None,
        };
        group.bench_function(label, |b| b.iter(|| black_box(fuzz(&cfg).unwrap().1.checked)));
    }
    group.finish();
}

criterion_group!(benches, spectrum, products, suite, fuzz_batch);
criterion_main!(benches);
