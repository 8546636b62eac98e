use std::hint::black_box;

use cnat_core::enumerate::{count_with_leaf_matrix, survey};
use cnat_core::{Permutation, SurveyOptions};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn counts(c: &mut Criterion) {
    let mut group = c.benchmark_group("survey");
    group.sample_size(10);
    for n in [5, 6, 7] {
        group.bench_with_input(BenchmarkId::new("counts", n), &n, |b, &n| {
            b.iter(|| survey(black_box(n), SurveyOptions::counts_only()))
        });
    }
    for n in [5, 6] {
        group.bench_with_input(BenchmarkId::new("determinants", n), &n, |b, &n| {
            b.iter(|| survey(black_box(n), SurveyOptions::default()))
        });
    }
    group.finish();
}

fn single_leaf_matrix(c: &mut Criterion) {
    let mut group = c.benchmark_group("leaf-matrix");
    for n in [6, 8, 10] {
        let p = Permutation::reversal(n);
        group.bench_with_input(BenchmarkId::new("ud-count", n), &p, |b, p| {
            b.iter(|| count_with_leaf_matrix(black_box(p)))
        });
    }
    group.finish();
}

criterion_group!(benches, counts, single_leaf_matrix);
criterion_main!(benches);
