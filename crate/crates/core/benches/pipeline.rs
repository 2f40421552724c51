//! Benchmarks comparing the data-parallel drivers against their sequential
//! twins on the dominant workloads: exact associativity sweeps, the
//! second-order equivalence check, and the numeric cocycle sweep.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use monopole_star::families;
use monopole_star::fourier::DegreeCap;
use monopole_star::kontsevich::check_equivalence;
use monopole_star::representation::{verify_cocycle, SampleConfig};
use monopole_star::star::StarProduct;

fn associativity(c: &mut Criterion) {
    let star = StarProduct::new(2, DegreeCap::default()).unwrap();
    let family: Vec<_> = families::quadratic_family().into_iter().take(10).collect();
    let mut group = c.benchmark_group("associativity");
    group.sample_size(10);
    for &parallel in &[false, true] {
        let label = if parallel { "parallel" } else { "sequential" };
        group.bench_with_input(BenchmarkId::from_parameter(label), &parallel, |b, &p| {
            b.iter(|| {
                let report = star.check_associativity(&family, p);
                assert!(report.passed);
            })
        });
    }
    group.finish();
}

fn equivalence(c: &mut Criterion) {
    let star = StarProduct::new(2, DegreeCap::default()).unwrap();
    let family: Vec<_> = families::quadratic_family().into_iter().take(16).collect();
    let mut group = c.benchmark_group("equivalence");
    group.sample_size(10);
    for &parallel in &[false, true] {
        let label = if parallel { "parallel" } else { "sequential" };
        group.bench_with_input(BenchmarkId::from_parameter(label), &parallel, |b, &p| {
            b.iter(|| {
                let report = check_equivalence(&family, &star, p);
                assert!(report.passed);
            })
        });
    }
    group.finish();
}

fn cocycle(c: &mut Criterion) {
    let cfg = SampleConfig {
        samples: 400,
        seed: 0,
        tolerance: 1e-10,
    };
    let mut group = c.benchmark_group("cocycle");
    group.sample_size(10);
    for &parallel in &[false, true] {
        let label = if parallel { "parallel" } else { "sequential" };
        group.bench_with_input(BenchmarkId::from_parameter(label), &parallel, |b, &p| {
            b.iter(|| {
                let report = verify_cocycle(&cfg, p);
                assert!(report.passed);
            })
        });
    }
    group.finish();
}

criterion_group!(benches, associativity, equivalence, cocycle);
criterion_main!(benches);
