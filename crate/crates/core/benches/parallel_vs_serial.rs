//! Compares the data-parallel trial loop against a forced single-thread run
//! on the two hot workloads: a Monte Carlo sweep and the grid-search oracle.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use fdsr_core::{
    figure_preset, grid_search, run_sweep, sample_channel_set, trial_rng, ChannelParams,
    FigurePreset, GridSpec, Strategy, SystemParams,
};

fn bench_sweep(c: &mut Criterion) {
    let mut spec = figure_preset(FigurePreset::Fig3).remove(0);
    spec.trials = 64;
    spec.values.truncate(5);

    let mut group = c.benchmark_group("sweep_fig3_64_trials");
    group.sample_size(10);
    group.bench_function("parallel", |b| {
        b.iter(|| black_box(run_sweep(black_box(&spec)).unwrap()))
    });
    #[cfg(feature = "parallel")]
    {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        group.bench_function("serial", |b| {
            b.iter(|| pool.install(|| black_box(run_sweep(black_box(&spec)).unwrap())))
        });
    }
    group.finish();
}

fn bench_oracle(c: &mut Criterion) {
    let ch = sample_channel_set(&ChannelParams::default(), &mut trial_rng(7, 0)).unwrap();
    let p = SystemParams::default();
    let grid = GridSpec {
        m_points: 2000,
        phase_points: 360,
        clamp_to_feasible: true,
    };

    let mut group = c.benchmark_group("grid_search_2000x360");
    group.sample_size(20);
    group.bench_function("scan", |b| {
        b.iter(|| black_box(grid_search(&ch, &p, &Strategy::PS_CONTINUOUS, &grid).unwrap()))
    });
    group.finish();
}

criterion_group!(benches, bench_sweep, bench_oracle);
criterion_main!(benches);
