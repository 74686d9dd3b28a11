use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fracwhittle::elw::{estimate, EstimatorConfig};
use fracwhittle::{fracdiff, gen_fractional, run_mc, EstimatorKind, McConfig, SimSpec};

fn bench_filter(c: &mut Criterion) {
    let mut group = c.benchmark_group("fracdiff");
    for n in [64usize, 500, 2048] {
        let x = gen_fractional(&SimSpec::gaussian(n, 0.4, 1))
            .unwrap()
            .into_values();
        group.bench_with_input(BenchmarkId::from_parameter(n), &x, |b, x| {
            b.iter(|| fracdiff(x, 0.73).unwrap())
        });
    }
    group.finish();
}

fn bench_estimate(c: &mut Criterion) {
    let x = gen_fractional(&SimSpec::gaussian(500, 1.3, 2))
        .unwrap()
        .into_values();
    let cfg = EstimatorConfig::for_length(500);
    c.bench_function("elw estimate n=500", |b| {
        b.iter(|| estimate(&x, &cfg).unwrap())
    });
}

// Sequential (one worker) against the rayon pool at full width.
fn bench_mc(c: &mut Criterion) {
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    let mut group = c.benchmark_group("run_mc");
    group.sample_size(10);
    for workers in [1, threads.max(2)] {
        let cfg = McConfig {
            reps: 32,
            workers,
            ..McConfig::new(vec![0.3, 1.3], vec![EstimatorKind::Elw, EstimatorKind::Lw])
        };
        group.bench_with_input(BenchmarkId::new("workers", workers), &cfg, |b, cfg| {
            b.iter(|| run_mc(cfg).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_filter, bench_estimate, bench_mc);
criterion_main!(benches);
