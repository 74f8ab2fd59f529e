use std::hint::black_box;

use beamwave_core::evolution::{evolve, travelling_state, EvolveConfig};
use beamwave_core::params::{check_membership_s, sample_dense, SampleBudget, SetId};
use beamwave_core::resonance::{enumerate_resonances, ScanMethod};
use beamwave_core::solver::{Solver, SolverConfig};
use beamwave_core::spectral::{nonlinearity, FourierField};
use beamwave_core::Problem;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_complex::Complex64;

fn params(c: &mut Criterion) {
    let p = Problem::running_example();
    c.bench_function("membership_s", |b| b.iter(|| check_membership_s(black_box(&p)).unwrap()));
    c.bench_function("sample_dense", |b| {
        b.iter(|| sample_dense(&p, black_box((1.3, 0.7)), 1e-3, SetId::S, SampleBudget::default()).unwrap())
    });
}

fn resonance(c: &mut Criterion) {
    let p = Problem::running_example();
    let mut g = c.benchmark_group("resonance_scan");
    g.sample_size(10);
    for r in [50i64, 200] {
        g.bench_with_input(BenchmarkId::new("exact", r), &r, |b, &r| {
            b.iter(|| enumerate_resonances(&p, r, ScanMethod::Exact).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("floating", r), &r, |b, &r| {
            b.iter(|| enumerate_resonances(&p, r, ScanMethod::Floating).unwrap())
        });
    }
    g.finish();
}

fn spectral(c: &mut Criterion) {
    let coeffs = Problem::running_example().coeffs();
    let mut g = c.benchmark_group("nonlinearity");
    for n in [8usize, 16, 32] {
        let mut f = FourierField::zeros(n);
        for j in [[1, 1], [1, -1], [2, 3], [3, -2]] {
            f.set(j, Complex64::new(1e-2, -5e-3));
        }
        g.bench_with_input(BenchmarkId::from_parameter(n), &f, |b, f| {
            b.iter(|| nonlinearity(black_box(f), [1.2, 2.0], &coeffs))
        });
    }
    g.finish();
}

fn solve(c: &mut Criterion) {
    let p = Problem::running_example();
    let mut g = c.benchmark_group("solve_wave");
    g.sample_size(10);
    for n in [8usize, 16] {
        let s = Solver::new(&p, SolverConfig { n, ..SolverConfig::default() }).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &s, |b, s| {
            b.iter(|| s.solve_wave(black_box([1e-2, 1e-2]), None).unwrap())
        });
    }
    g.finish();
}

fn time_step(c: &mut Criterion) {
    let p = Problem::running_example();
    let s = Solver::new(&p, SolverConfig { n: 4, ..SolverConfig::default() }).unwrap();
    let sol = s.solve_wave([1e-2, 1e-2], None).unwrap();
    let s0 = travelling_state(&sol, p.params.jstar).unwrap();
    let cfg = EvolveConfig {
        t_end: 0.1,
        dt: 1e-3,
        sample_every: 100,
    };
    let coeffs = p.coeffs();
    let mut g = c.benchmark_group("evolve");
    g.sample_size(10);
    g.bench_function("n4_100_steps", |b| {
        b.iter(|| evolve(black_box(&s0), &cfg, &coeffs, sol.alpha, sol.gamma).unwrap())
    });
    g.finish();
}

criterion_group!(benches, params, resonance, spectral, solve, time_step);
criterion_main!(benches);
