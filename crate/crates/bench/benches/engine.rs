use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use frobdesc_bench::{pencil_spec, quasi_elliptic_spec};
use frobdesc_core::constructions::decompose_target;
use frobdesc_core::padic::{tau_bruteforce, tau_closed};
use frobdesc_core::pencil::{diophantine_search, model_classification_checks};
use frobdesc_core::{analyze, fixtures, sharpness_sweep, DualGraph, F2, F4};

fn tau(c: &mut Criterion) {
    let mut g = c.benchmark_group("tau");
    for d in [60u64, 300] {
        g.bench_with_input(BenchmarkId::new("closed", d), &d, |b, &d| {
            b.iter(|| tau_closed(black_box(d), 2))
        });
        g.bench_with_input(BenchmarkId::new("bruteforce", d), &d, |b, &d| {
            b.iter(|| tau_bruteforce(black_box(d), 2))
        });
    }
    g.finish();
}

fn towers(c: &mut Criterion) {
    let pencil = pencil_spec();
    let quasi = quasi_elliptic_spec();
    c.bench_function("analyze/pencil", |b| b.iter(|| analyze(black_box(&pencil))));
    c.bench_function("analyze/quasi_elliptic", |b| {
        b.iter(|| analyze(black_box(&quasi)))
    });
    let deep = decompose_target(40).unwrap().build().unwrap();
    c.bench_function("analyze/delta_40", |b| b.iter(|| analyze(black_box(&deep))));
    let mut g = c.benchmark_group("sharpness");
    g.sample_size(10);
    g.bench_function("d_40", |b| b.iter(|| sharpness_sweep(40, 4)));
    g.finish();
}

fn pencil(c: &mut Criterion) {
    let graph = DualGraph::from_json(fixtures::A15_FIBER).unwrap();
    c.bench_function("pencil/dual_graph", |b| {
        b.iter(|| model_classification_checks(black_box(&graph)))
    });
    let mut g = c.benchmark_group("diophantine");
    g.sample_size(10);
    g.bench_function("F2_D4", |b| b.iter(|| diophantine_search::<F2>(4)));
    g.bench_function("F4_D4", |b| b.iter(|| diophantine_search::<F4>(4)));
    g.finish();
}

criterion_group!(benches, tau, towers, pencil);
criterion_main!(benches);
