//! Criterion benches for the data-parallel hot paths, each measured on the
//! default rayon pool and on a single-thread pool. Build with
//! `--no-default-features` to measure the rayon-free sequential fallback
//! instead (the `parallel` feature is required for this two-pool comparison).

use criterion::{criterion_group, criterion_main, Criterion};

use nilform::special::transversality;
use nilform::structure::validate;
use nilform::{catalog, frolicher, special};

fn pool(threads: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool builds")
}

fn bench_dolbeault_br2(c: &mut Criterion) {
    let model = validate(&catalog::catalog_br(2).unwrap()).unwrap();
    let mut group = c.benchmark_group("dolbeault-br2");
    group.sample_size(10);
    group.bench_function("parallel", |b| {
        let workers = pool(0);
        b.iter(|| workers.install(|| frolicher::dolbeault_dims(&model)));
    });
    group.bench_function("single-thread", |b| {
        let workers = pool(1);
        b.iter(|| workers.install(|| frolicher::dolbeault_dims(&model)));
    });
    group.finish();
}

fn bench_pages_br2(c: &mut Criterion) {
    let model = validate(&catalog::catalog_br(2).unwrap()).unwrap();
    let mut group = c.benchmark_group("pages-br2");
    group.sample_size(10);
    group.bench_function("parallel", |b| {
        let workers = pool(0);
        b.iter(|| workers.install(|| frolicher::pages_between(&model, 1, 3)));
    });
    group.bench_function("single-thread", |b| {
        let workers = pool(1);
        b.iter(|| workers.install(|| frolicher::pages_between(&model, 1, 3)));
    });
    group.finish();
}

fn bench_transversality_sampling(c: &mut Criterion) {
    let model = validate(&catalog::ex_2_6()).unwrap();
    let omega = catalog::omega_2_6();
    let mut group = c.benchmark_group("transversality-ex26-512-samples");
    group.sample_size(10);
    group.bench_function("parallel", |b| {
        let workers = pool(0);
        b.iter(|| workers.install(|| transversality(&omega, 2, &model, 512, 7).unwrap()));
    });
    group.bench_function("single-thread", |b| {
        let workers = pool(1);
        b.iter(|| workers.install(|| transversality(&omega, 2, &model, 512, 7).unwrap()));
    });
    group.finish();
}

fn bench_balanced_br3(c: &mut Criterion) {
    let model = validate(&catalog::catalog_br(3).unwrap()).unwrap();
    let metric = special::HermitianMetric::identity(10);
    let mut group = c.benchmark_group("balanced-br3");
    group.sample_size(10);
    group.bench_function("check", |b| {
        b.iter(|| special::is_balanced(&metric, &model));
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_dolbeault_br2,
    bench_pages_br2,
    bench_transversality_sampling,
    bench_balanced_br3
);
criterion_main!(benches);
