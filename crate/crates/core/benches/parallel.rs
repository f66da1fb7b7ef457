use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use morselab_core::cayley::{build_ball, BallOptions, CayleyBall, SmallCancellationGroup};
use morselab_core::metrics::relator_isometry_check;
use morselab_core::mltg::{enumerate_local_words, LocalSpec};
use morselab_core::rational::Q;
use morselab_core::smallcancel::{pieces_pairwise, FunctionSample, SymmetrizedClosure};
use morselab_core::walks::{sample_walks, Step, StepMeasure};
use morselab_core::{corpus, Exec};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn ball(name: &str, r: usize) -> CayleyBall {
    let g = SmallCancellationGroup::new(corpus::by_name(name).unwrap().presentation()).unwrap();
    build_ball(&g, r, &BallOptions::default()).unwrap()
}

fn pieces(c: &mut Criterion) {
    let p = corpus::by_name("pair7x8").unwrap().presentation();
    let closure = SymmetrizedClosure::new(&p);
    let mut group = c.benchmark_group("pieces_pairwise");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| pieces_pairwise(&p, &closure, black_box(exec))));
    }
    group.finish();
}

fn isometry(c: &mut Criterion) {
    let b = ball("three12a", 8);
    let mut group = c.benchmark_group("relator_isometry_check");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |bench| bench.iter(|| relator_isometry_check(&b, black_box(exec))));
    }
    group.finish();
}

fn local_words(c: &mut Criterion) {
    let b = ball("three10a", 7);
    let spec = LocalSpec::new(3, 1, FunctionSample::constant(Q::from_integer(3), 10)).unwrap();
    let mut group = c.benchmark_group("enumerate_local_words");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |bench| {
            bench.iter(|| enumerate_local_words(&b, &spec, 6, 1 << 20, black_box(exec)).unwrap())
        });
    }
    group.finish();
}

fn walks(c: &mut Criterion) {
    let b = ball("free2", 5);
    let p = b.presentation().clone();
    let support = ["a", "A", "b", "B"].iter().map(|w| Step { word: p.parse_word(w).unwrap(), probability: Q::new(1, 4) }).collect();
    let mu = StepMeasure::new(support, 0, true).unwrap();
    let mut group = c.benchmark_group("sample_walks");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |bench| {
            bench.iter(|| sample_walks(&b, &mu, 4, 1000, 20_000, black_box(exec)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, pieces, isometry, local_words, walks);
criterion_main!(benches);
