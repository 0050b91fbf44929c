//! Throughput benchmarks for the hot paths: lexing, structure parsing,
//! full-catalog generation, and normalization.

use std::collections::BTreeSet;
use std::path::Path;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use solmut::engine::{dedup, generate};
use solmut::lexer::{lex, normalize};
use solmut::{OperatorId, SourceModel};

fn corpus(rel: &str) -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(rel)
}

fn all_ops() -> BTreeSet<OperatorId> {
    OperatorId::ALL.iter().copied().collect()
}

fn bench_lex(c: &mut Criterion) {
    let mut group = c.benchmark_group("lex");
    for file in ["contracts/wallet.sol", "contracts/victim.sol"] {
        let bytes = std::fs::read(corpus(file)).unwrap();
        group.throughput(Throughput::Bytes(bytes.len() as u64));
        group.bench_with_input(BenchmarkId::from_parameter(file), &bytes, |b, bytes| {
            b.iter(|| lex(bytes).unwrap());
        });
    }
    group.finish();
}

fn bench_parse(c: &mut Criterion) {
    let bytes = std::fs::read(corpus("contracts/wallet.sol")).unwrap();
    c.bench_function("parse_structure/wallet", |b| {
        b.iter(|| SourceModel::parse("wallet.sol", bytes.clone()).unwrap());
    });
}

fn bench_generate(c: &mut Criterion) {
    let model = SourceModel::load(corpus("contracts/wallet.sol")).unwrap();
    let ops = all_ops();
    c.bench_function("generate_full_catalog/wallet", |b| {
        b.iter(|| generate(&model, &ops));
    });
    c.bench_function("generate_dedup/wallet", |b| {
        b.iter(|| dedup(generate(&model, &ops)));
    });
}

fn bench_normalize(c: &mut Criterion) {
    let bytes = std::fs::read(corpus("contracts/wallet.sol")).unwrap();
    c.bench_function("normalize/wallet", |b| {
        b.iter(|| normalize(&bytes).unwrap());
    });
}

criterion_group!(benches, bench_lex, bench_parse, bench_generate, bench_normalize);
criterion_main!(benches);
