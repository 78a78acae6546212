//! Shared setup for the kernel benchmarks.

use wigsim_core::grid::{DerivativeScheme, PhaseSpaceGrid};
use wigsim_core::moments::GaussianMoments;
use wigsim_core::params::LindbladParams;
use wigsim_core::state::{gaussian_wigner, WignerState};

pub fn bench_grid(n: usize) -> PhaseSpaceGrid {
    PhaseSpaceGrid::centered(8.0, 8.0, n, n, DerivativeScheme::SpectralPeriodic)
        .expect("benchmark grid")
}

pub fn bench_state(n: usize) -> WignerState {
    gaussian_wigner(
        &GaussianMoments::new(1.0, 0.5, 0.6, 0.7, 0.1),
        &bench_grid(n),
        1.0,
    )
    .expect("benchmark state")
}

pub fn bench_params() -> LindbladParams {
    LindbladParams {
        mass: 1.0,
        hbar: 1.0,
        lambda: 0.25,
        mu: 0.1,
        d_pp: 0.5,
        d_qq: 0.3,
        d_pq: 0.05,
    }
}
