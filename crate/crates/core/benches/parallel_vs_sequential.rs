use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use fracwave_core::frac::{caputo_direct_with, FracParams, SampledSignal};
use fracwave_core::simulator::{run_many, InitialData, SimConfig};
use fracwave_core::spectrum::{abscissa_scan, RefineOptions, SystemParams, DEFAULT_N0};
use fracwave_core::Execution;

const MODES: [(&str, Execution); 2] = [("parallel", Execution::Parallel), ("sequential", Execution::Sequential)];

fn params() -> SystemParams {
    SystemParams::new(1.0, 1.0, FracParams::new(0.5, 1.0, 1.0).unwrap()).unwrap()
}

fn scan(c: &mut Criterion) {
    let p = params();
    let opts = RefineOptions::default();
    let mut g = c.benchmark_group("abscissa_scan_20_200");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| abscissa_scan(black_box(&p), 1, (20, 200), DEFAULT_N0, &opts, exec).unwrap())
        });
    }
    g.finish();
}

fn batch(c: &mut Criterion) {
    let jobs: Vec<_> = (0..8u64)
        .map(|seed| {
            let cfg = SimConfig {
                n_cells: 64,
                t_final: 2.0,
                initial: InitialData::Random { seed, modes: 6 },
                ..Default::default()
            };
            (params(), cfg)
        })
        .collect();
    let mut g = c.benchmark_group("run_many_8");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| run_many(black_box(&jobs), exec)));
    }
    g.finish();
}

fn caputo(c: &mut Criterion) {
    let f = FracParams::new(0.5, 1.0, 1.0).unwrap();
    let s = SampledSignal::from_fn(1e-3, 4001, |t| t * t).unwrap();
    let mut g = c.benchmark_group("caputo_4001");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| caputo_direct_with(black_box(&s), &f, exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, scan, batch, caputo);
criterion_main!(benches);
