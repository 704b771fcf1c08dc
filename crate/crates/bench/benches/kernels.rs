use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use wordprobe_bench::{random_diffs, random_representation, random_values};
use wordprobe_core::{representational_similarity_matrix, spearman, wilcoxon_signed_rank};

fn bench_rsm(c: &mut Criterion) {
    let mut group = c.benchmark_group("rsm");
    for &n in &[100usize, 300, 1000] {
        let rep = random_representation("r", n, 50, 1);
        group.bench_with_input(BenchmarkId::from_parameter(n), &rep, |b, rep| {
            b.iter(|| representational_similarity_matrix(black_box(rep)).unwrap())
        });
    }
    group.finish();
}

fn bench_spearman(c: &mut Criterion) {
    let mut group = c.benchmark_group("spearman");
    // triangle sizes matching 100/300/1000-word similarity matrices
    for &n in &[4_950usize, 44_850, 499_500] {
        let x = random_values(n, 2);
        let y = random_values(n, 3);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| spearman(black_box(&x), black_box(&y)).unwrap())
        });
    }
    group.finish();
}

fn bench_wilcoxon(c: &mut Criterion) {
    let mut group = c.benchmark_group("wilcoxon");
    // 25 is the largest exact-enumeration size, 200 uses the normal tail
    for &n in &[12usize, 25, 200] {
        let d = random_diffs(n, 4);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| wilcoxon_signed_rank(black_box(&d)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_rsm, bench_spearman, bench_wilcoxon);
criterion_main!(benches);
