use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ltsd_bench::{balanced, suite};
use ltsd_core::{branching_bisim, compose_async, compose_sync, decomp_a, decomp_s, dpbb};

fn sync_pipeline(c: &mut Criterion) {
    let mut group = c.benchmark_group("sync");
    for states in [10, 40, 160] {
        let (l, p) = balanced(7, states, 4);
        group.bench_with_input(BenchmarkId::new("decompose_compose", states), &(l.clone(), p.clone()), |b, (l, p)| {
            b.iter(|| compose_sync(&decomp_s(l, p).unwrap()).unwrap())
        });
        let (x, _) = compose_sync(&decomp_s(&l, &p).unwrap()).unwrap();
        group.bench_with_input(BenchmarkId::new("branching_bisim", states), &(l, x), |b, (l, x)| {
            b.iter(|| branching_bisim(l, x))
        });
    }
    group.finish();
}

fn async_pipeline(c: &mut Criterion) {
    let mut group = c.benchmark_group("async");
    for states in [10, 40, 160] {
        let (l, p) = balanced(7, states, 4);
        let (x, _) = compose_async(&decomp_a(&l, &p).unwrap()).unwrap_or_else(|_| {
            let d = decomp_a(&l, &p).unwrap();
            let c = ltsd_core::decomp::compose_async_unchecked(&d);
            (c.product, c.map)
        });
        group.bench_with_input(BenchmarkId::new("dpbb", states), &(l, x), |b, (l, x)| {
            b.iter(|| dpbb(l, x))
        });
    }
    group.finish();
}

fn property_suite(c: &mut Criterion) {
    let instances = suite(100);
    c.bench_function("suite_100_sync", |b| {
        b.iter(|| {
            instances
                .iter()
                .filter(|(l, p)| {
                    let (x, _) = compose_sync(&decomp_s(l, p).unwrap()).unwrap();
                    branching_bisim(l, &x).verdict
                })
                .count()
        })
    });
}

criterion_group!(benches, sync_pipeline, async_pipeline, property_suite);
criterion_main!(benches);
