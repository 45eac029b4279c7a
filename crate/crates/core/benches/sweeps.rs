use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use sl3_kloosterman::oracle::OracleTable;
use sl3_kloosterman::par::Mode;
use sl3_kloosterman::sums::{character_grid, coarse_kloosterman, coarse_sweep, Characters, Word};

fn parallel_vs_sequential(c: &mut Criterion) {
    let chars = character_grid(1);
    let mut g = c.benchmark_group("coarse_sweep");
    g.sample_size(10);
    for (name, mode) in [("sequential", Mode::Sequential), ("parallel", Mode::Parallel)] {
        g.bench_with_input(BenchmarkId::new(name, 8), &mode, |b, &mode| {
            b.iter(|| coarse_sweep(8, black_box(&chars), Word::Aba, mode).unwrap())
        });
    }
    g.finish();
}

fn closed_form_vs_oracle(c: &mut Criterion) {
    let ch = Characters::new([1, 2], [-1, 1]);
    let mut g = c.benchmark_group("coarse_single");
    for (c1, c2) in [(6, 4), (9, 12), (16, 8)] {
        let id = format!("{c1}x{c2}");
        g.bench_with_input(BenchmarkId::new("closed_form", &id), &(c1, c2), |b, &(c1, c2)| {
            b.iter(|| coarse_kloosterman(black_box(&ch), c1, c2, Word::Aba).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("oracle", &id), &(c1, c2), |b, &(c1, c2)| {
            b.iter(|| OracleTable::build(c1, c2).unwrap().eval(black_box(&ch)).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, parallel_vs_sequential, closed_form_vs_oracle);
criterion_main!(benches);
