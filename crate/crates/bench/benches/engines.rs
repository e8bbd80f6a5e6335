//! Criterion benchmarks: both engines over random DAG streams at a few
//! densities, plus the two adversarial workloads. Streams are generated
//! once per benchmark and replayed into a fresh engine per iteration.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};

use incycle::{
    gen_dense_adversary, gen_random_dag_stream, gen_sparse_adversary, ArcStream, DenseEngine,
    SparseEngine,
};

fn replay_sparse(stream: &ArcStream) -> u64 {
    let n = stream.vertex_count();
    let mut e = SparseEngine::new(n, Some(stream.events.len() as u64));
    for a in &stream.events {
        e.insert_arc(a.tail, a.head).unwrap();
    }
    e.counters().arc_traversals
}

fn replay_dense(stream: &ArcStream) -> u64 {
    let mut e = DenseEngine::new(stream.vertex_count());
    for a in &stream.events {
        e.insert_arc(a.tail, a.head).unwrap();
    }
    e.counters().arc_traversals
}

fn random_dag(c: &mut Criterion) {
    let mut group = c.benchmark_group("random-dag");
    for &(n, m) in &[(1_000u32, 5_000u64), (1_000, 50_000), (4_000, 40_000)] {
        let stream = gen_random_dag_stream(n, m, 1).unwrap();
        group.throughput(Throughput::Elements(m));
        group.bench_with_input(
            BenchmarkId::new("sparse", format!("n{n}-m{m}")),
            &stream,
            |b, s| b.iter(|| replay_sparse(s)),
        );
        group.bench_with_input(
            BenchmarkId::new("dense", format!("n{n}-m{m}")),
            &stream,
            |b, s| b.iter(|| replay_dense(s)),
        );
    }
    group.finish();
}

fn adversaries(c: &mut Criterion) {
    let mut group = c.benchmark_group("adversary");
    let sparse_stream = gen_sparse_adversary(1024, 8192).unwrap();
    group.throughput(Throughput::Elements(sparse_stream.events.len() as u64));
    group.bench_with_input(
        BenchmarkId::new("sparse", "budget-aborts"),
        &sparse_stream,
        |b, s| b.iter(|| replay_sparse(s)),
    );
    let dense_stream = gen_dense_adversary(64).unwrap();
    group.throughput(Throughput::Elements(dense_stream.events.len() as u64));
    group.bench_with_input(
        BenchmarkId::new("dense", "counter-wraps"),
        &dense_stream,
        |b, s| b.iter(|| replay_dense(s)),
    );
    group.finish();
}

criterion_group!(benches, random_dag, adversaries);
criterion_main!(benches);
