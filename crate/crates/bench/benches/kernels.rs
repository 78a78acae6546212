use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use wigsim_bench::{bench_params, bench_state};
use wigsim_core::density::{wigner_from_density_matrix, DensityMatrixGrid};
use wigsim_core::evolution::full_rhs;
use wigsim_core::integrate::step;
use wigsim_core::potential::Potential;

fn rhs_assembly(c: &mut Criterion) {
    let params = bench_params();
    let mut group = c.benchmark_group("full_rhs");
    for n in [64usize, 128, 256] {
        let w = bench_state(n);
        group.bench_with_input(BenchmarkId::new("harmonic", n), &n, |b, _| {
            b.iter(|| full_rhs(&w, &Potential::Harmonic { omega: 1.0 }, &params, 0).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("quartic_n1", n), &n, |b, _| {
            b.iter(|| full_rhs(&w, &Potential::Quartic { omega: 1.0, c: 0.1 }, &params, 1).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("cosine", n), &n, |b, _| {
            b.iter(|| full_rhs(&w, &Potential::Cosine { u0: 0.5, k: 2.0 }, &params, 0).unwrap())
        });
    }
    group.finish();
}

fn rk4_step(c: &mut Criterion) {
    let params = bench_params();
    let mut group = c.benchmark_group("rk4_step");
    for n in [64usize, 128, 256] {
        let w = bench_state(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| step(&w, &Potential::Harmonic { omega: 1.0 }, &params, 1e-4, 0).unwrap())
        });
    }
    group.finish();
}

fn wigner_transform(c: &mut Criterion) {
    let mut group = c.benchmark_group("wigner_transform");
    group.sample_size(20);
    for n in [64usize, 128] {
        // momentum extent must stay under the pi*hbar/(2 dq) resolution bound
        let grid = wigsim_core::grid::PhaseSpaceGrid::centered(
            6.0,
            6.0,
            n,
            n,
            wigsim_core::grid::DerivativeScheme::SpectralPeriodic,
        )
        .unwrap();
        let psi: Vec<num_complex::Complex64> = (0..n)
            .map(|i| {
                let q = grid.q_at(i);
                num_complex::Complex64::new(
                    std::f64::consts::PI.powf(-0.25) * (-0.5 * q * q).exp(),
                    0.0,
                )
            })
            .collect();
        let rho = DensityMatrixGrid::from_wavefunction(grid.q_axis(), &psi).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| wigner_from_density_matrix(&rho, &grid, 1.0).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, rhs_assembly, rk4_step, wigner_transform);
criterion_main!(benches);
