use std::sync::Arc;

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use laurent_groth::checks::truncated_polynomial_algebra;
use laurent_groth::grmod::simple_module;
use laurent_groth::homalg::minimal_resolution;
use laurent_groth::scalar;
use laurent_groth::{Degree, LaurentSeries, OrderSpec};

fn poly(order: &Arc<OrderSpec>, terms: &[(Vec<i64>, i64)]) -> LaurentSeries {
    let t = terms.iter().map(|(g, c)| (Degree::from(g.clone()), scalar::int(*c))).collect();
    LaurentSeries::polynomial(order.clone(), t).unwrap()
}

fn series(c: &mut Criterion) {
    let one_var = Arc::new(OrderSpec::lex(1));
    let two_var = Arc::new(OrderSpec::lex(2));
    let mut group = c.benchmark_group("series");
    for height in [20u64, 40] {
        group.bench_with_input(BenchmarkId::new("invert_1d", height), &height, |b, &h| {
            b.iter(|| {
                let f = poly(&one_var, &[(vec![0], 1), (vec![1], -1), (vec![3], 2)]);
                black_box(f.invert(64).unwrap().truncate(h).unwrap())
            })
        });
        group.bench_with_input(BenchmarkId::new("mul_1d", height), &height, |b, &h| {
            b.iter(|| {
                let f = poly(&one_var, &[(vec![0], 1), (vec![1], -1)]).invert(64).unwrap();
                let g = poly(&one_var, &[(vec![0], 2), (vec![2], 1)]).invert(64).unwrap();
                black_box(f.mul(&g).unwrap().truncate(h).unwrap())
            })
        });
    }
    group.bench_function("invert_2d_lex_height_8", |b| {
        b.iter(|| {
            let f = poly(&two_var, &[(vec![0, 0], 1), (vec![1, 0], -1), (vec![0, 1], -1)]);
            black_box(f.invert(64).unwrap().truncate(8).unwrap())
        })
    });
    group.finish();
}

fn algebras(c: &mut Criterion) {
    let mut group = c.benchmark_group("algebra");
    group.sample_size(20);
    for height in [20i64, 40] {
        group.bench_with_input(BenchmarkId::new("expand_cubic", height), &height, |b, &h| {
            b.iter(|| black_box(truncated_polynomial_algebra(3, h).unwrap()))
        });
    }
    let alg = truncated_polynomial_algebra(3, 40).unwrap();
    group.bench_function("cartan_inverse_cubic_40", |b| {
        b.iter(|| black_box(alg.cartan_matrix().unwrap().invert(40).unwrap()))
    });
    group.finish();
}

fn resolutions(c: &mut Criterion) {
    let mut group = c.benchmark_group("resolution");
    group.sample_size(10);
    for n in [2usize, 5] {
        let alg = truncated_polynomial_algebra(n, 40).unwrap();
        let s = simple_module(&alg, 0).unwrap();
        group.bench_with_input(BenchmarkId::new("simple_of_truncated_polynomial", n), &s, |b, s| {
            b.iter(|| black_box(minimal_resolution(s, 20).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(kernels, series, algebras, resolutions);
criterion_main!(kernels);
