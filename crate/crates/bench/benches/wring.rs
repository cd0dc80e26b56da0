use std::hint::black_box;

use charclass_core::sample;
use charclass_core::verify::{self, Suite, VerifyConfig};
use charclass_core::RingContext;
use criterion::{criterion_group, criterion_main, Criterion};

fn dense_product(c: &mut Criterion) {
    let a = sample::dense(20, 10);
    let b = a.clone();
    let ctx = RingContext::unbounded();
    c.bench_function("dense degree-20 product in w1..w10", |bench| {
        bench.iter(|| black_box(&a).mul(black_box(&b), &ctx).unwrap())
    });
}

fn relations_suite(c: &mut Criterion) {
    let cfg = VerifyConfig {
        degree: 16,
        rank: 5,
        seed: 0,
    };
    let mut group = c.benchmark_group("verify");
    group.sample_size(10);
    group.bench_function("relations degree 16 rank 5", |bench| {
        bench.iter(|| verify::run(Suite::Relations, black_box(&cfg)))
    });
    group.finish();
}

criterion_group!(benches, dense_product, relations_suite);
criterion_main!(benches);
