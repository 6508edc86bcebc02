use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_complex::Complex64;
use quatspin_core::bounds::check_k_monotonicity;
use quatspin_core::{
    build_clifford_model, constants_table, decompose, verify_lemma_identities, ExactScalar,
    ResourceCap, Scalar, SpinorGeometry,
};

fn geometry<S: Scalar>(m: usize) -> SpinorGeometry<S> {
    SpinorGeometry::build(m, ResourceCap::default()).unwrap()
}

fn matmul(c: &mut Criterion) {
    let mut group = c.benchmark_group("kraines_square");
    for m in [1, 2, 3] {
        let exact = geometry::<ExactScalar>(m);
        group.bench_with_input(BenchmarkId::new("exact", m), &exact, |b, g| {
            b.iter(|| black_box(g.ops().kraines() * g.ops().kraines()))
        });
        let float = geometry::<Complex64>(m);
        group.bench_with_input(BenchmarkId::new("float", m), &float, |b, g| {
            b.iter(|| black_box(g.ops().kraines() * g.ops().kraines()))
        });
    }
    group.finish();
}

fn model_build(c: &mut Criterion) {
    let mut group = c.benchmark_group("build");
    for m in [1, 2, 3] {
        group.bench_with_input(BenchmarkId::new("clifford", m), &m, |b, &m| {
            b.iter(|| {
                black_box(build_clifford_model::<ExactScalar>(m, ResourceCap::default()).unwrap())
            })
        });
        group.bench_with_input(BenchmarkId::new("geometry", m), &m, |b, &m| {
            b.iter(|| black_box(geometry::<ExactScalar>(m)))
        });
    }
    group.finish();
}

fn decomposition(c: &mut Criterion) {
    let mut group = c.benchmark_group("decompose");
    group.sample_size(10);
    for m in [1, 2, 3] {
        let g = geometry::<ExactScalar>(m);
        group.bench_with_input(BenchmarkId::new("exact", m), &g, |b, g| {
            b.iter(|| black_box(decompose(g.model(), g.ops(), 0.0).unwrap()))
        });
    }
    group.finish();
}

fn identities(c: &mut Criterion) {
    let mut group = c.benchmark_group("identities");
    group.sample_size(10);
    for m in [1, 2] {
        let g = geometry::<ExactScalar>(m);
        let dec = decompose(g.model(), g.ops(), 0.0).unwrap();
        group.bench_with_input(
            BenchmarkId::new("identity_suite", m),
            &(&g, &dec),
            |b, (g, dec)| b.iter(|| black_box(verify_lemma_identities(g, dec, 0.0))),
        );
        group.bench_with_input(
            BenchmarkId::new("constants", m),
            &(&g, &dec),
            |b, (g, dec)| b.iter(|| black_box(constants_table(g, dec, 0.0).unwrap())),
        );
    }
    group.finish();
}

fn bounds(c: &mut Criterion) {
    c.bench_function("k_monotonicity_m50", |b| {
        b.iter(|| black_box(check_k_monotonicity(50)))
    });
}

criterion_group!(
    benches,
    matmul,
    model_build,
    decomposition,
    identities,
    bounds
);
criterion_main!(benches);
