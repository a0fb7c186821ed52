use std::hint::black_box;

use casefind_core::eval::run_two_stage;
use casefind_core::{
    build_index_with, rank_batch, BuildOptions, Case, ExecMode, PreprocessConfig, Query, RankParams,
    Scorer,
};
use casefind_testkit::synthetic_titles;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};

const MODES: [(&str, ExecMode); 2] = [
    ("sequential", ExecMode::Sequential),
    ("parallel", ExecMode::Parallel),
];

fn cases(n: usize) -> Vec<Case> {
    synthetic_titles(n, 17)
        .into_iter()
        .enumerate()
        .map(|(i, t)| Case::new(format!("{:06}", i + 1), t))
        .collect()
}

fn bench_build(c: &mut Criterion) {
    let mut group = c.benchmark_group("build_index");
    let config = PreprocessConfig::default();
    for n in [705, 10_000] {
        let corpus = cases(n);
        group.throughput(Throughput::Elements(n as u64));
        for (name, exec) in MODES {
            let options = BuildOptions { exec, ..Default::default() };
            group.bench_with_input(BenchmarkId::new(name, n), &corpus, |b, corpus| {
                b.iter(|| build_index_with(black_box(corpus), &config, &options).unwrap())
            });
        }
    }
    group.finish();
}

fn bench_rank_batch(c: &mut Criterion) {
    let mut group = c.benchmark_group("rank_batch");
    let corpus = cases(10_000);
    let (index, _) = build_index_with(&corpus, &PreprocessConfig::default(), &BuildOptions::default()).unwrap();
    let queries: Vec<Query> = corpus
        .iter()
        .take(1_000)
        .map(|c| index.prepare_query(&c.title, Scorer::Cosine))
        .collect();
    group.throughput(Throughput::Elements(queries.len() as u64));
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| rank_batch(&index, black_box(&queries), &RankParams::default(), exec))
        });
    }
    group.finish();
}

fn bench_two_stage(c: &mut Criterion) {
    let mut group = c.benchmark_group("two_stage_eval");
    let corpus = cases(705);
    let (index, _) = build_index_with(&corpus, &PreprocessConfig::default(), &BuildOptions::default()).unwrap();
    let titles: Vec<String> = corpus.iter().map(|c| c.title.clone()).collect();
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| run_two_stage(&index, black_box(&titles), 7, Scorer::Cosine, exec))
        });
    }
    group.finish();
}

criterion_group!(benches, bench_build, bench_rank_batch, bench_two_stage);
criterion_main!(benches);
