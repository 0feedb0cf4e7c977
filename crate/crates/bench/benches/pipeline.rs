use criterion::{criterion_group, criterion_main, BatchSize, BenchmarkId, Criterion, Throughput};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use strgraph::index::{build_index, ReadSet};
use strgraph::oracle::substring_free_reads;
use strgraph::reduce::reduce_overlap_graph;
use strgraph::{build_overlap_graph, OverlapOptions, Storage};

const SIZES: [(usize, usize); 3] = [(100, 40), (400, 60), (1600, 80)];

fn instance(m: usize, l: usize) -> ReadSet {
    substring_free_reads(&mut ChaCha8Rng::seed_from_u64((m * 1000 + l) as u64), m, l)
}

fn index(c: &mut Criterion) {
    let mut group = c.benchmark_group("index");
    for (m, l) in SIZES {
        let reads = instance(m, l);
        group.throughput(Throughput::Elements(reads.n()));
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("{m}x{l}")),
            &reads,
            |b, reads| b.iter(|| build_index(reads, &Storage::memory()).unwrap()),
        );
    }
    group.finish();
}

fn overlap(c: &mut Criterion) {
    let mut group = c.benchmark_group("overlap");
    group.sample_size(20);
    for (m, l) in SIZES {
        let reads = instance(m, l);
        group.throughput(Throughput::Elements(reads.n()));
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("{m}x{l}")),
            &reads,
            |b, reads| {
                b.iter(|| {
                    build_overlap_graph(reads, &Storage::memory(), &OverlapOptions::default())
                        .unwrap()
                })
            },
        );
    }
    group.finish();
}

fn reduce(c: &mut Criterion) {
    let mut group = c.benchmark_group("reduce");
    group.sample_size(20);
    let (m, l) = SIZES[1];
    let reads = instance(m, l);
    for memory in [4u32, 64, 1 << 20] {
        group.bench_with_input(
            BenchmarkId::new(format!("{m}x{l}"), memory),
            &memory,
            |b, &memory| {
                b.iter_batched(
                    || {
                        let storage = Storage::memory();
                        build_overlap_graph(&reads, &storage, &OverlapOptions::default())
                            .unwrap()
                            .0
                    },
                    |graph| reduce_overlap_graph(&graph, memory).unwrap(),
                    BatchSize::SmallInput,
                )
            },
        );
    }
    group.finish();
}

criterion_group!(benches, index, overlap, reduce);
criterion_main!(benches);
