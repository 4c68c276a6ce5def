use biquasile::algebra::{enumerate_biquasiles, enumerate_biquasiles_par, latin_squares};
use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

fn enumerate(c: &mut Criterion) {
    c.bench_function("latin_squares/4", |b| {
        b.iter(|| latin_squares(black_box(4)).len())
    });
    c.bench_function("biquasiles/3", |b| {
        b.iter(|| enumerate_biquasiles(black_box(3)).count())
    });
    let mut g = c.benchmark_group("biquasiles/4");
    g.sample_size(10);
    g.bench_function("serial", |b| {
        b.iter(|| enumerate_biquasiles(black_box(4)).count())
    });
    g.bench_function("parallel", |b| {
        b.iter(|| enumerate_biquasiles_par(black_box(4)).len())
    });
    g.finish();
}

criterion_group!(benches, enumerate);
criterion_main!(benches);
