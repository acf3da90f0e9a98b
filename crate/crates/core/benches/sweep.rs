use colorcode::experiments::{run_sweep, run_sweep_sequential, SweepConfig};
use colorcode::lattice::Color;
use colorcode::region::ComplexSpec;
use criterion::{criterion_group, criterion_main, Criterion};

fn config() -> SweepConfig {
    SweepConfig {
        lx: 12,
        ly: 12,
        p_grid: vec![0.1, 0.2, 0.3],
        samples: 16,
        seed: 3,
        complexes: vec![ComplexSpec {
            size: 7,
            center: Color::Red,
        }],
        regions: Vec::new(),
    }
}

fn bench_sweep(c: &mut Criterion) {
    let cfg = config();
    let mut group = c.benchmark_group("sweep-L12");
    group.sample_size(10);
    group.bench_function("parallel", |b| b.iter(|| run_sweep(&cfg).unwrap()));
    group.bench_function("sequential", |b| {
        b.iter(|| run_sweep_sequential(&cfg).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_sweep);
criterion_main!(benches);
