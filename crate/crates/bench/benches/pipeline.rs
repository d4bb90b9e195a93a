//! End-to-end timings of the pipeline stages on the bundled scenario.

use criterion::{criterion_group, criterion_main, Criterion};
use msei_bench::derived_between_host;
use msei_core::{analysis, baseline, between_host, coupling, sweeps, EvalMode, IntegratorConfig};
use std::hint::black_box;

fn fast_scale(c: &mut Criterion) {
    let params = baseline::within_host_params();
    let cfg = baseline::coupling_config();
    c.bench_function("within_host_simulation_and_nh", |b| {
        b.iter(|| coupling::derive_nh(black_box(&params), &cfg).unwrap().n_h)
    });
}

fn slow_scale(c: &mut Criterion) {
    let bh = derived_between_host();
    let initial = baseline::between_host_initial();
    let cfg = IntegratorConfig::default();
    c.bench_function("between_host_simulation_500", |b| {
        b.iter(|| {
            between_host::simulate_between_host(black_box(&bh), &initial, 500.0, &cfg)
                .unwrap()
                .stats
                .accepted
        })
    });
}

fn stability_analysis(c: &mut Criterion) {
    let bh = derived_between_host();
    c.bench_function("routh_hurwitz_report", |b| {
        b.iter(|| analysis::routh_hurwitz(black_box(&bh)).unwrap().r0)
    });
}

fn grids(c: &mut Criterion) {
    let bh = derived_between_host();
    let x = sweeps::AxisSpec::new("beta", 0.0005, 0.005, 50);
    let y = sweeps::AxisSpec::new("d", 0.05, 0.5, 50);
    c.bench_function("heat_grid_50x50_serial", |b| {
        b.iter(|| {
            sweeps::heat_grid(black_box(&bh), &x, &y, EvalMode::Serial)
                .unwrap()
                .cells
                .len()
        })
    });
    c.bench_function("heat_grid_50x50_parallel", |b| {
        b.iter(|| {
            sweeps::heat_grid(black_box(&bh), &x, &y, EvalMode::Parallel)
                .unwrap()
                .cells
                .len()
        })
    });
    let beta_star = analysis::bifurcation_quantities(&bh).unwrap().beta_star;
    c.bench_function("bifurcation_sweep_101", |b| {
        b.iter(|| {
            sweeps::bifurcation_sweep(black_box(&bh), (0.5 * beta_star, 2.0 * beta_star), 101)
                .unwrap()
                .cells
                .len()
        })
    });
}

criterion_group!(benches, fast_scale, slow_scale, stability_analysis, grids);
criterion_main!(benches);
