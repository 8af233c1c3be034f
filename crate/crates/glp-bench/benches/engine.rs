use criterion::{criterion_group, criterion_main, Criterion};
use glp_bench::nested_boxes;
use glp_core::engine::{decide_glp, m_plus};
use glp_core::unify::search_ground_unifier;
use glp_core::{parse, EngineConfig};

fn bench_parse_print(c: &mut Criterion) {
    let text = nested_boxes(40).to_string();
    c.bench_function("parse nested boxes", |b| {
        b.iter(|| parse(std::hint::black_box(&text), 1).unwrap())
    });
    let f = nested_boxes(40);
    c.bench_function("print nested boxes", |b| {
        b.iter(|| std::hint::black_box(&f).to_string())
    });
}

fn bench_translation(c: &mut Criterion) {
    let f = parse("[1]([0]p1 -> p1) & [2](<1>p0 | [0]p2)", 3).unwrap();
    c.bench_function("soundness prefix translation", |b| {
        b.iter(|| m_plus(std::hint::black_box(&f)))
    });
}

fn bench_decide(c: &mut Criterion) {
    let cfg = EngineConfig::default();
    let reflection = parse("[1]([0]p1 -> p1)", 2).unwrap();
    c.bench_function("decide boxed reflection", |b| {
        b.iter(|| decide_glp(std::hint::black_box(&reflection), &cfg).unwrap())
    });
    let refutable = parse("[1][0]F", 2).unwrap();
    c.bench_function("decide refutable box", |b| {
        b.iter(|| decide_glp(std::hint::black_box(&refutable), &cfg).unwrap())
    });
}

fn bench_ground_search(c: &mut Criterion) {
    let cfg = EngineConfig::default();
    let f = parse("[1]p0", 2).unwrap();
    c.bench_function("ground unifier search", |b| {
        b.iter(|| search_ground_unifier(std::hint::black_box(&f), 7, &cfg).unwrap())
    });
}

criterion_group!(
    benches,
    bench_parse_print,
    bench_translation,
    bench_decide,
    bench_ground_search
);
criterion_main!(benches);
