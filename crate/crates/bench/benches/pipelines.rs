use std::hint::black_box;

use casimir_core::mems::{linearized_period, SimulationOptions};
use casimir_core::{
    drag_force, equilibria, interaction_energy_disjoint, pair_distance_density, pure_term_report,
    simulate, Body, DensityMethod, Material, OscillatorConfig, PureTermConfig, SpectralDensity,
    TwoLevelAtom,
};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn conductor() -> Material {
    Material::perfect_conductor(1.0).unwrap()
}

fn pair_measures(c: &mut Criterion) {
    let mut g = c.benchmark_group("pair_measure");
    g.sample_size(10);
    let cube = Body::cube(1.0).unwrap();
    for res in [32, 64, 128] {
        g.bench_with_input(BenchmarkId::new("cube_grid", res), &res, |b, &r| {
            b.iter(|| pair_distance_density(&cube, DensityMethod::Grid { resolution: r }).unwrap())
        });
    }
    let cyl = Body::cylinder(1.0).unwrap();
    for res in [512, 2048] {
        g.bench_with_input(BenchmarkId::new("cylinder_grid", res), &res, |b, &r| {
            b.iter(|| pair_distance_density(&cyl, DensityMethod::Grid { resolution: r }).unwrap())
        });
    }
    let ball = Body::ball(1.0).unwrap();
    g.bench_function("ball_mc_1e5", |b| {
        b.iter(|| {
            pair_distance_density(
                &ball,
                DensityMethod::MonteCarlo {
                    samples: 100_000,
                    seed: 1,
                },
            )
            .unwrap()
        })
    });
    g.finish();
}

fn pure_terms(c: &mut Criterion) {
    let mut g = c.benchmark_group("pure_term");
    g.sample_size(10);
    let ball = Body::ball(1.0).unwrap();
    g.bench_function("ball_analytic", |b| {
        b.iter(|| {
            pure_term_report(&ball, &conductor(), &PureTermConfig::default_for(&ball)).unwrap()
        })
    });
    let cube = Body::cube(1.0).unwrap();
    let config = PureTermConfig {
        method: DensityMethod::Grid { resolution: 48 },
        ..PureTermConfig::default_for(&cube)
    };
    g.bench_function("cube_grid_48", |b| {
        b.iter(|| pure_term_report(&cube, &conductor(), &config).unwrap())
    });
    g.finish();
}

fn interaction(c: &mut Criterion) {
    let m = conductor();
    let atom = Body::PointAtom {
        position: [0.0, 0.0, 1.5],
        alpha: 1.0,
    };
    let ball = Body::ball(1.0).unwrap();
    c.bench_function("atom_ball_energy", |b| {
        b.iter(|| interaction_energy_disjoint(black_box(&atom), &ball, &m).unwrap())
    });
}

fn drag(c: &mut Criterion) {
    let sd = SpectralDensity::planck(300.0).unwrap();
    let atom = TwoLevelAtom::thermal(1e14, 1.0, 300.0).unwrap();
    c.bench_function("planck_drag", |b| {
        b.iter(|| drag_force(&atom, &sd, black_box(10.0)).unwrap())
    });
}

fn oscillator(c: &mut Criterion) {
    let config = OscillatorConfig::new(0.5, 1e-7, 1e-10, 1e-9, 0.0).unwrap();
    let period = linearized_period(&config);
    let start = equilibria(&config)[0].gap * 0.999 * config.rest_gap;
    let mut opts = SimulationOptions::new(start, 0.0, 100.0 * period, period / 200.0);
    opts.record_every = 1000;
    c.bench_function("oscillator_100_periods", |b| {
        b.iter(|| simulate(&config, &opts).unwrap())
    });
}

criterion_group!(
    benches,
    pair_measures,
    pure_terms,
    interaction,
    drag,
    oscillator
);
criterion_main!(benches);
