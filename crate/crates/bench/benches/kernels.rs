use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use wlab_core::arith::{gauss_sum_direct, gauss_sum_s2_closed};
use wlab_core::circle::{weyl_sum, DissectionParams, classify_arc};
use wlab_core::repcount::{sieve_representations, SieveStrategy};
use wlab_core::scan::{scan, PsiSpec, ScanParams};
use wlab_core::singular::{a_term, singular_series_euler, singular_series_qsum, DepthPolicy, GaussCache, QSumTables};

fn gauss(c: &mut Criterion) {
    let mut g = c.benchmark_group("gauss");
    for q in [997u64, 65_536] {
        g.bench_with_input(BenchmarkId::new("direct_k4", q), &q, |b, &q| b.iter(|| gauss_sum_direct(4, q, 3)));
        g.bench_with_input(BenchmarkId::new("closed_k2", q), &q, |b, &q| b.iter(|| gauss_sum_s2_closed(q, 3)));
    }
    g.finish();
}

fn sieve(c: &mut Criterion) {
    let mut g = c.benchmark_group("sieve");
    g.sample_size(10);
    for (name, strategy) in [("direct", SieveStrategy::Direct), ("ntt", SieveStrategy::Ntt)] {
        g.bench_function(BenchmarkId::new(name, 1 << 20), |b| {
            b.iter(|| sieve_representations(4, black_box(1 << 20), strategy).unwrap())
        });
    }
    g.finish();
}

fn singular(c: &mut Criterion) {
    let mut g = c.benchmark_group("singular");
    g.sample_size(10);
    g.bench_function("a_term_q360", |b| b.iter(|| a_term(3, black_box(12_345), 360).unwrap()));
    g.bench_function("qsum_1e4", |b| b.iter(|| singular_series_qsum(3, black_box(99_991), 10_000).unwrap()));
    g.bench_function("euler_1e3", |b| {
        b.iter(|| singular_series_euler(4, black_box(99_991), 1000, DepthPolicy::default()).unwrap())
    });
    let tables = QSumTables::build(&GaussCache::new(), 4, 2048).unwrap();
    g.bench_function("table_eval_2048", |b| b.iter(|| tables.evaluate(black_box(123_457))));
    g.finish();
}

fn circle(c: &mut Criterion) {
    let mut g = c.benchmark_group("circle");
    g.bench_function("weyl_k4_1e8", |b| b.iter(|| weyl_sum(4, 1e8, black_box(0.377_123_45))));
    g.bench_function("weyl_k2_1e8", |b| b.iter(|| weyl_sum(2, 1e8, black_box(0.377_123_45))));
    let params = DissectionParams::new(1e8, 0.05, 0.05, 1.0).unwrap();
    g.bench_function("classify_arc", |b| b.iter(|| classify_arc(black_box(0.618_033_988_7), &params)));
    g.finish();
}

fn scan_block(c: &mut Criterion) {
    let dir = std::env::temp_dir().join("wlab-bench-cache");
    std::fs::create_dir_all(&dir).unwrap();
    std::env::set_var("WLAB_CACHE_DIR", &dir);
    let mut g = c.benchmark_group("scan");
    g.sample_size(10);
    let psi = PsiSpec::power(0.1).unwrap();
    g.bench_function("s4_2e16", |b| b.iter(|| scan(4, 0, 1 << 16, psi, ScanParams::default()).unwrap()));
    g.finish();
}

criterion_group!(benches, gauss, sieve, singular, circle, scan_block);
criterion_main!(benches);
