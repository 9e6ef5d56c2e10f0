use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use filicheck_core::catalog::{builtin, model_filiform};
use filicheck_core::nilpotent::characteristic_sequence;
use filicheck_core::structures::{commutant, numeric_invariant_search, solve_bi_invariant, NumericOptions};

fn exact(c: &mut Criterion) {
    let g8_4 = builtin("g8_4").unwrap().algebra;
    let l10 = model_filiform(10).unwrap();
    c.bench_function("commutant g8_4", |b| b.iter(|| commutant(black_box(&g8_4))));
    c.bench_function("characteristic_sequence L10", |b| b.iter(|| characteristic_sequence(black_box(&l10)).unwrap()));
    c.bench_function("characteristic_sequence g8_4", |b| b.iter(|| characteristic_sequence(black_box(&g8_4)).unwrap()));
    c.bench_function("solve_bi_invariant g8_4", |b| b.iter(|| solve_bi_invariant(black_box(&g8_4)).unwrap()));
}

fn numeric(c: &mut Criterion) {
    let mut group = c.benchmark_group("numeric");
    group.sample_size(10);
    let options = NumericOptions { restarts: 10, ..NumericOptions::default() };
    for key in ["L6", "h3+h3"] {
        let g = builtin(key).unwrap().algebra;
        group.bench_function(format!("search {key} x10"), |b| {
            b.iter(|| numeric_invariant_search(black_box(&g), &options).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, exact, numeric);
criterion_main!(benches);
