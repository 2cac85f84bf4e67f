use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use monres::constructions::{gen_taylor, minimal_resolution, taylor};
use monres::{koszul_homology, minimize, taylor_product, verify_dg, Field, MonomialIdeal, Multidegree};
use monres_bench::{cycle_ideal, path_ideal};
use std::hint::black_box;

fn minimal_resolutions(c: &mut Criterion) {
    let mut g = c.benchmark_group("minimize_taylor");
    for n in [5, 7, 9] {
        let i = path_ideal(n);
        g.bench_with_input(BenchmarkId::new("path", n), &i, |b, i| {
            b.iter(|| minimize(&taylor(black_box(i)).unwrap()))
        });
    }
    let i = cycle_ideal(7);
    g.bench_function("cycle/7", |b| b.iter(|| minimize(&taylor(black_box(&i)).unwrap())));
    g.finish();
}

fn koszul(c: &mut Criterion) {
    let mut g = c.benchmark_group("koszul_homology");
    for n in [5, 7] {
        let i = path_ideal(n);
        g.bench_with_input(BenchmarkId::new("path", n), &i, |b, i| b.iter(|| koszul_homology(black_box(i)).unwrap()));
    }
    g.finish();
}

fn split_path(n: usize, k: usize) -> (MonomialIdeal, MonomialIdeal) {
    let edge = |i: usize| Multidegree::squarefree(n, &[i, i + 1]);
    let a = MonomialIdeal::new(n, (0..k).map(edge)).unwrap();
    let b = MonomialIdeal::new(n, (k..n - 1).map(edge)).unwrap();
    (a, b)
}

fn generalized_taylor(c: &mut Criterion) {
    let mut g = c.benchmark_group("gen_taylor");
    for n in [6, 8] {
        let (a, b) = split_path(n, n / 2);
        let f = minimal_resolution(&a, Field::Rational).unwrap();
        let h = minimal_resolution(&b, Field::Rational).unwrap();
        g.bench_function(BenchmarkId::new("path_split", n), |bch| {
            bch.iter(|| gen_taylor(black_box(&f), black_box(&h)).unwrap())
        });
    }
    g.finish();
}

fn dg_check(c: &mut Criterion) {
    let t = taylor_product(&path_ideal(5)).unwrap();
    c.bench_function("verify_dg/taylor_path5", |b| b.iter(|| verify_dg(black_box(&t))));
}

criterion_group!(benches, minimal_resolutions, koszul, generalized_taylor, dg_check);
criterion_main!(benches);
