use banach_reduce::algebra::default_tol;
use banach_reduce::reduce::{extend_row, reduce_tuple, ReduceOptions};
use banach_reduce::topology::{complement_components, phase_unwrap_log};
use banach_reduce::{Element, Scalar, Tuple};
use banach_reduce_bench::{annulus_case, finite_matrix, finite_row};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn holes(c: &mut Criterion) {
    let mut group = c.benchmark_group("complement_components");
    for h in [1.0 / 64.0, 1.0 / 128.0, 1.0 / 256.0] {
        let (_, _, z) = annulus_case(h);
        group.bench_with_input(BenchmarkId::from_parameter(1.0 / h), &z, |b, z| {
            b.iter(|| complement_components(z))
        });
    }
    group.finish();
}

fn unwrap(c: &mut Criterion) {
    let mut group = c.benchmark_group("phase_unwrap_log");
    for h in [1.0 / 64.0, 1.0 / 128.0] {
        let (inst, _, z) = annulus_case(h);
        let f = Element::coordinate(&inst).map(|w| (w * Scalar::new(0.3, 0.2)).exp());
        group.bench_with_input(
            BenchmarkId::from_parameter(1.0 / h),
            &(f, z),
            |b, (f, z)| b.iter(|| phase_unwrap_log(f, z, &[], 1e-12).expect("log")),
        );
    }
    group.finish();
}

fn rows(c: &mut Criterion) {
    let mut group = c.benchmark_group("extend_row");
    for n in [2, 4, 8] {
        let (f, g) = finite_row(512, n);
        let x: Tuple = reduce_tuple(&f, &g, &ReduceOptions::default())
            .expect("reduce")
            .witness()
            .expect("reducible")
            .a
            .clone();
        let tol = default_tol(f.sup_norm().max(g.sup_norm()));
        group.bench_with_input(
            BenchmarkId::from_parameter(n),
            &(f, g, x),
            |b, (f, g, x)| b.iter(|| extend_row(f, g, x, tol).expect("extension")),
        );
    }
    group.finish();
}

fn mat_exp(c: &mut Criterion) {
    let mut group = c.benchmark_group("mat_exp");
    for n in [2, 4, 8] {
        let m = finite_matrix(1024, n, 2.0);
        group.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| {
            b.iter(|| m.exp())
        });
    }
    group.finish();
}

criterion_group!(benches, holes, unwrap, rows, mat_exp);
criterion_main!(benches);
