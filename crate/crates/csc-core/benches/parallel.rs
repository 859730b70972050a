//! Compares the rayon-backed stage implementations against their sequential
//! twins. With the default `parallel` feature the first side uses the rayon
//! pool; build with `--no-default-features` to watch both collapse to the
//! same code path.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use csc_core::datagen;
use csc_core::{
    build_dataset, build_dataset_seq, evaluate, evaluate_seq, predict_dataset,
    predict_dataset_seq, train_lm, CleanSentence, ConfusionSet, CorruptionConfig, EvalInstance,
    NoisyChannelCorrector, ParallelSentence,
};

struct Fixture {
    pool: Vec<CleanSentence>,
    confusion: ConfusionSet,
    dataset: Vec<ParallelSentence>,
    instances: Vec<EvalInstance>,
    corrector: NoisyChannelCorrector,
}

fn fixture() -> Fixture {
    let spec = datagen::CorpusSpec::new(17);
    let pool = datagen::corpus(&spec, 1500);
    let keys = datagen::charset(0, spec.num_chars);
    let confusion = datagen::confusion(&keys, 3, 60, 17);
    let cfg = CorruptionConfig::new(0.05, 17).unwrap();
    let dataset = build_dataset(&pool, &confusion, &cfg);
    let instances: Vec<EvalInstance> = dataset
        .iter()
        .map(|s| EvalInstance::from_parallel(s, s.source.clone()))
        .collect();

    let texts: Vec<Vec<char>> = pool.iter().map(|s| s.text.clone()).collect();
    let lm = train_lm(texts.iter().map(Vec::as_slice), 3, 0.1).unwrap();
    let corrector = NoisyChannelCorrector::new(lm, confusion.clone(), 0.05, 1.0).unwrap();
    Fixture {
        pool,
        confusion,
        dataset,
        instances,
        corrector,
    }
}

fn bench_corruption(c: &mut Criterion) {
    let f = fixture();
    let cfg = CorruptionConfig::new(0.05, 17).unwrap();
    let mut group = c.benchmark_group("corrupt_1500");
    group.bench_function("parallel", |b| {
        b.iter(|| black_box(build_dataset(&f.pool, &f.confusion, &cfg)))
    });
    group.bench_function("sequential", |b| {
        b.iter(|| black_box(build_dataset_seq(&f.pool, &f.confusion, &cfg)))
    });
    group.finish();
}

fn bench_evaluate(c: &mut Criterion) {
    let f = fixture();
    let mut group = c.benchmark_group("evaluate_1500");
    group.bench_function("parallel", |b| {
        b.iter(|| black_box(evaluate(&f.instances).unwrap()))
    });
    group.bench_function("sequential", |b| {
        b.iter(|| black_box(evaluate_seq(&f.instances).unwrap()))
    });
    group.finish();
}

fn bench_decode(c: &mut Criterion) {
    let f = fixture();
    let subset = &f.dataset[..200];
    let mut group = c.benchmark_group("decode_200");
    group.sample_size(10);
    group.bench_function("parallel", |b| {
        b.iter(|| black_box(predict_dataset(&f.corrector, subset)))
    });
    group.bench_function("sequential", |b| {
        b.iter(|| black_box(predict_dataset_seq(&f.corrector, subset)))
    });
    group.finish();
}

criterion_group!(benches, bench_corruption, bench_evaluate, bench_decode);
criterion_main!(benches);
