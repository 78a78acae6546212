//! End-to-end verification scenarios.
//!
//! Each scenario exercises one oracle comparison or structural property at
//! its pinned tolerance and returns a pass/fail report; the `verify` CLI
//! subcommand and the acceptance test suite both run these. Mass
//! conservation is aggregated across every evolving scenario.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::density::{wigner_from_density_matrix, DensityMatrixGrid};
use crate::evolution::quantum_rhs;
use crate::grid::{DerivativeScheme, PhaseSpaceGrid};
use crate::integrate::{evolve, RunConfig};
use crate::moments::GaussianMoments;
use crate::oracle::fock::{propagate_density, wigner_of_fock, FockDensityMatrix};
use crate::oracle::{kramers_stationary, moments_at, stationarity_residual};
use crate::params::{coefficients_from_ops, LindbladOpCoeffs, LindbladParams};
use crate::potential::Potential;
use crate::state::gaussian_wigner;

/// Outcome of one verification criterion.
#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    /// Worst |mass - 1| seen over this scenario's runs, when it evolves.
    pub mass_dev: Option<f64>,
}

impl CriterionReport {
    pub fn line(&self) -> String {
        let mass = match self.mass_dev {
            Some(dev) => format!("; |mass-1| <= {dev:.2e}"),
            None => String::new(),
        };
        format!(
            "criterion {:2} {:long$} {}  ({}{})",
            self.id,
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.detail,
            mass,
            long = 18
        )
    }
}

pub const SCENARIO_NAMES: [&str; 10] = [
    "constraints",
    "wigner-transform",
    "harmonic-period",
    "moment-oracle",
    "fock-cross-check",
    "hbar-scaling",
    "kramers",
    "mass-conservation",
    "translation",
    "cosine-free-limit",
];

fn spectral_grid(n: usize, l: f64) -> PhaseSpaceGrid {
    PhaseSpaceGrid::centered(l, l, n, n, DerivativeScheme::SpectralPeriodic)
        .expect("valid verification grid")
}

/// Criterion 1: coefficients built from 10^4 random operator pairs always
/// satisfy the third fundamental constraint with margin >= -1e-12.
pub fn constraints() -> CriterionReport {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut worst = f64::INFINITY;
    let hbar = 1.0;
    for _ in 0..10_000 {
        let mut draw = || Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let ops = LindbladOpCoeffs::new(draw(), draw(), draw(), draw());
        let d = coefficients_from_ops(&ops, hbar).expect("finite draws");
        let margin = d.d_pp * d.d_qq - d.d_pq * d.d_pq - 0.25 * d.lambda * d.lambda * hbar * hbar;
        worst = worst.min(margin);
    }
    CriterionReport {
        id: 1,
        name: "constraints",
        passed: worst >= -1e-12,
        detail: format!("worst margin {worst:.3e} over 10^4 draws"),
        mass_dev: None,
    }
}

fn oscillator_psi(n: usize, q: f64) -> f64 {
    // m = omega = hbar = 1
    let norm = std::f64::consts::PI.powf(-0.25);
    match n {
        0 => norm * (-0.5 * q * q).exp(),
        1 => norm * std::f64::consts::SQRT_2 * q * (-0.5 * q * q).exp(),
        _ => unreachable!(),
    }
}

fn sampled_pure_state(level: usize, grid: &PhaseSpaceGrid) -> DensityMatrixGrid {
    let psi: Vec<Complex64> = (0..grid.n_q)
        .map(|i| Complex64::new(oscillator_psi(level, grid.q_at(i)), 0.0))
        .collect();
    DensityMatrixGrid::from_wavefunction(grid.q_axis(), &psi).expect("pure state")
}

/// Criterion 2: the transform reproduces the harmonic ground-state Gaussian
/// to 1e-6 sup-norm at n = 256, and the first excited state shows the
/// negative value -1/(pi hbar) at the origin to 1e-4.
pub fn wigner_transform() -> CriterionReport {
    let grid = spectral_grid(256, 8.0);
    let rho0 = sampled_pure_state(0, &grid);
    let (w0, _) = wigner_from_density_matrix(&rho0, &grid, 1.0).expect("transform");
    let mut sup = 0.0f64;
    for i in 0..grid.n_q {
        let q = grid.q_at(i);
        for j in 0..grid.n_p {
            let p = grid.p_at(j);
            let exact = (-q * q - p * p).exp() / std::f64::consts::PI;
            sup = sup.max((w0.values()[[i, j]] - exact).abs());
        }
    }
    let rho1 = sampled_pure_state(1, &grid);
    let (w1, _) = wigner_from_density_matrix(&rho1, &grid, 1.0).expect("transform");
    let origin = w1.values()[[128, 128]];
    let origin_err = (origin + 1.0 / std::f64::consts::PI).abs();
    CriterionReport {
        id: 2,
        name: "wigner-transform",
        passed: sup <= 1e-6 && origin_err <= 1e-4,
        detail: format!("ground sup err {sup:.2e}; W1(0,0) err {origin_err:.2e}"),
        mass_dev: None,
    }
}

/// Criterion 3: closed harmonic rotation returns after one period with L2
/// error <= 1e-4 at 256^2 and dt = T/2000.
pub fn harmonic_period() -> CriterionReport {
    let grid = spectral_grid(256, 8.0);
    let w0 = gaussian_wigner(&GaussianMoments::new(1.5, 0.0, 0.5, 0.5, 0.0), &grid, 1.0)
        .expect("admissible");
    let params = LindbladParams::closed(1.0, 1.0);
    let period = 2.0 * std::f64::consts::PI;
    let cfg = RunConfig::new(Some(period / 2000.0), period, 100, 0).expect("config");
    match evolve(&w0, &Potential::Harmonic { omega: 1.0 }, &params, &cfg) {
        Ok((w1, record)) => {
            let err = w1.l2_distance(&w0).expect("same grid");
            CriterionReport {
                id: 3,
                name: "harmonic-period",
                passed: err <= 1e-4,
                detail: format!("L2 return error {err:.3e}"),
                mass_dev: Some(record.max_mass_deviation(1.0)),
            }
        }
        Err(e) => failure(3, "harmonic-period", e),
    }
}

fn failure(id: u8, name: &'static str, e: crate::error::Error) -> CriterionReport {
    CriterionReport {
        id,
        name,
        passed: false,
        detail: format!("run failed: {e}"),
        mass_dev: None,
    }
}

/// Criterion 4: grid moments track the derived moment ODEs to relative 1e-3
/// over t in [0, 25] for the harmonic oscillator with full Lindblad terms.
pub fn moment_oracle() -> CriterionReport {
    let params = LindbladParams {
        mass: 1.0,
        hbar: 1.0,
        lambda: 0.2,
        mu: 0.2,
        d_pp: 0.5,
        d_qq: 0.5,
        d_pq: 0.0,
    };
    let pot = Potential::Harmonic { omega: 1.0 };
    // box holds the displaced start plus ~5.5 sigma of the stationary spread
    let grid = spectral_grid(96, 11.0);
    let start = GaussianMoments::new(2.0, 0.0, 0.5, 0.5, 0.0);
    let w0 = gaussian_wigner(&start, &grid, params.hbar).expect("admissible");
    let cfg = RunConfig::new(None, 25.0, 40, 0).expect("config");
    let (_, record) = match evolve(&w0, &pot, &params, &cfg) {
        Ok(x) => x,
        Err(e) => return failure(4, "moment-oracle", e),
    };
    let times: Vec<f64> = record.rows.iter().map(|r| r.t).collect();
    let oracle = moments_at(&start, &params, &pot, &times, 1e-3).expect("quadratic family");

    let mut worst_rel = 0.0f64;
    let mut worst_name = "";
    for (field, name) in [
        (0usize, "mean_q"),
        (1, "mean_p"),
        (2, "sigma_qq"),
        (3, "sigma_pp"),
        (4, "sigma_pq"),
    ] {
        let pick = |m: &GaussianMoments| match field {
            0 => m.mean_q,
            1 => m.mean_p,
            2 => m.sigma_qq,
            3 => m.sigma_pp,
            _ => m.sigma_pq,
        };
        let scale = oracle.iter().fold(0.0f64, |s, m| s.max(pick(m).abs()));
        let mut err = 0.0f64;
        for (row, om) in record.rows.iter().zip(oracle.iter()) {
            let grid_val = match field {
                0 => row.mean_q,
                1 => row.mean_p,
                2 => row.sigma_qq,
                3 => row.sigma_pp,
                _ => row.sigma_pq,
            };
            err = err.max((grid_val - pick(om)).abs());
        }
        let rel = err / scale.max(1e-30);
        if rel > worst_rel {
            worst_rel = rel;
            worst_name = name;
        }
    }
    CriterionReport {
        id: 4,
        name: "moment-oracle",
        passed: worst_rel <= 1e-3,
        detail: format!("worst relative moment error {worst_rel:.3e} ({worst_name})"),
        mass_dev: Some(record.max_mass_deviation(1.0)),
    }
}

/// Criterion 5: the Wigner transform of the Fock-basis propagation matches
/// the grid solution to L2 <= 1e-2 at t = 2 for the quartic oscillator with
/// mild dissipation (N_basis = 64).
pub fn fock_cross_check() -> CriterionReport {
    let params = LindbladParams {
        mass: 1.0,
        hbar: 1.0,
        lambda: 0.1,
        mu: 0.1,
        d_pp: 0.1,
        d_qq: 0.1,
        d_pq: 0.0,
    };
    let pot = Potential::Quartic { omega: 1.0, c: 0.1 };
    // the correction term's k_p^3 symbol dominates the step bound, so the
    // box and count stay small: 64^2 still resolves the state spectrally,
    // and the box holds 7 sigma so the initial mass is 1 to ~1e-11
    let grid = spectral_grid(64, 6.0);
    let (q0, p0) = (1.0, 0.0);
    let w0 = gaussian_wigner(&GaussianMoments::new(q0, p0, 0.5, 0.5, 0.0), &grid, 1.0)
        .expect("admissible");
    let t_end = 2.0;
    let cfg = RunConfig::new(None, t_end, 500, 1).expect("config");
    let (w_grid, record) = match evolve(&w0, &pot, &params, &cfg) {
        Ok(x) => x,
        Err(e) => return failure(5, "fock-cross-check", e),
    };
    let rho0 = FockDensityMatrix::coherent(64, 1.0, params.mass, params.hbar, q0, p0)
        .expect("coherent state");
    let rho_t = match propagate_density(&rho0, &params, &pot, t_end, 1e-3) {
        Ok(r) => r,
        Err(e) => return failure(5, "fock-cross-check", e),
    };
    let (w_fock, _) = match wigner_of_fock(&rho_t, &grid, params.mass, params.hbar) {
        Ok(x) => x,
        Err(e) => return failure(5, "fock-cross-check", e),
    };
    let dist = w_grid.l2_distance(&w_fock).expect("same grid");
    CriterionReport {
        id: 5,
        name: "fock-cross-check",
        passed: dist <= 1e-2,
        detail: format!("L2(grid, fock) = {dist:.3e} at t = {t_end}"),
        mass_dev: Some(record.max_mass_deviation(1.0)),
    }
}

/// Criterion 6: switching the quartic correction on and off produces a
/// trajectory divergence scaling as hbar^2 (log-log slope 2 +- 0.1), while
/// the harmonic correction field is machine zero.
pub fn hbar_scaling() -> CriterionReport {
    let grid = spectral_grid(64, 6.0);
    let pot = Potential::Quartic { omega: 1.0, c: 0.1 };
    // short horizon keeps the hbar = 0.8 correction perturbative, so the
    // log-log fit is not bent by the O(hbar^4) saturation
    let t_end = 0.3;
    // one fixed dt for every run (stable up to hbar = 0.8 with corrections
    // on): the on/off difference must isolate the correction term, not mix
    // in time-discretization differences between step sizes
    let dt = 2.5e-4;
    let mut lnh = Vec::new();
    let mut lnd = Vec::new();
    let mut mass_dev = 0.0f64;
    for &hbar in &[0.2, 0.4, 0.8] {
        let params = LindbladParams::closed(1.0, hbar);
        // same admissible state for every hbar (minimum uncertainty at 0.8)
        let w0 = gaussian_wigner(&GaussianMoments::new(1.5, 0.0, 0.4, 0.4, 0.0), &grid, hbar)
            .expect("admissible");
        let cfg = RunConfig::new(Some(dt), t_end, 500, 1).expect("config");
        let on = match evolve(&w0, &pot, &params, &cfg) {
            Ok(x) => x,
            Err(e) => return failure(6, "hbar-scaling", e),
        };
        let cfg_off = RunConfig::new(Some(dt), t_end, 500, 0).expect("config");
        let off = match evolve(&w0, &pot, &params, &cfg_off) {
            Ok(x) => x,
            Err(e) => return failure(6, "hbar-scaling", e),
        };
        mass_dev = mass_dev
            .max(on.1.max_mass_deviation(1.0))
            .max(off.1.max_mass_deviation(1.0));
        let d = on.0.l2_distance(&off.0).expect("same grid");
        lnh.push(hbar.ln());
        lnd.push(d.ln());
    }
    // least-squares slope of ln D against ln hbar
    let n = lnh.len() as f64;
    let sx: f64 = lnh.iter().sum();
    let sy: f64 = lnd.iter().sum();
    let sxx: f64 = lnh.iter().map(|x| x * x).sum();
    let sxy: f64 = lnh.iter().zip(lnd.iter()).map(|(x, y)| x * y).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);

    // harmonic corrections must vanish identically
    let w_h = gaussian_wigner(&GaussianMoments::new(1.0, 0.0, 0.5, 0.5, 0.0), &grid, 1.0)
        .expect("admissible");
    let harm = quantum_rhs(&w_h, &Potential::Harmonic { omega: 1.0 }, 1.0, 8).expect("rhs");
    let harm_zero = harm.quantum.iter().all(|&x| x == 0.0);

    CriterionReport {
        id: 6,
        name: "hbar-scaling",
        passed: (slope - 2.0).abs() <= 0.1 && harm_zero,
        detail: format!("slope {slope:.4}; harmonic correction identically zero: {harm_zero}"),
        mass_dev: Some(mass_dev),
    }
}

/// Criterion 7: the Kramers configuration thermalizes — from a displaced
/// Gaussian the L1 distance to the thermal state drops below 1e-3 by
/// t = 40/gamma, and the thermal state's stationarity residual is <= 1e-6 at
/// 512^2.
pub fn kramers() -> CriterionReport {
    let gamma = 0.25;
    let k_b_t = 1.0;
    let params = LindbladParams {
        mass: 1.0,
        hbar: 1.0,
        lambda: gamma,
        mu: gamma,
        d_pp: 2.0 * 1.0 * gamma * k_b_t,
        d_qq: 0.0,
        d_pq: 0.0,
    };
    let pot = Potential::Harmonic { omega: 1.0 };
    let grid = spectral_grid(64, 7.0);
    let w0 = gaussian_wigner(&GaussianMoments::new(1.5, 0.0, 0.5, 0.5, 0.0), &grid, 1.0)
        .expect("admissible");
    let t_end = 40.0 / gamma;
    let cfg = RunConfig::new(None, t_end, 200, 0).expect("config");
    let (w1, record) = match evolve(&w0, &pot, &params, &cfg) {
        Ok(x) => x,
        Err(e) => return failure(7, "kramers", e),
    };
    let thermal = kramers_stationary(&pot, params.mass, k_b_t, &grid).expect("confining");
    let l1 = w1.l1_distance(&thermal).expect("same grid");

    let fine = spectral_grid(512, 8.0);
    let thermal_fine = kramers_stationary(&pot, params.mass, k_b_t, &fine).expect("confining");
    let residual = stationarity_residual(&thermal_fine, &pot, &params, 0).expect("rhs");

    CriterionReport {
        id: 7,
        name: "kramers",
        passed: l1 <= 1e-3 && residual <= 1e-6,
        detail: format!("L1 to thermal {l1:.3e} at t = {t_end}; residual {residual:.3e} at 512^2"),
        mass_dev: Some(record.max_mass_deviation(1.0)),
    }
}

/// Criterion 9: with U = 0 and mu = lambda, shifting then evolving equals
/// evolving then shifting to L2 <= 1e-6 at t = 1.
pub fn translation() -> CriterionReport {
    let params = LindbladParams {
        mass: 1.0,
        hbar: 1.0,
        lambda: 0.2,
        mu: 0.2,
        d_pp: 0.5,
        d_qq: 0.5,
        d_pq: 0.0,
    };
    let grid = spectral_grid(128, 8.0);
    let w0 = gaussian_wigner(&GaussianMoments::new(0.0, 0.8, 0.5, 0.5, 0.0), &grid, 1.0)
        .expect("admissible");
    let cfg = RunConfig::new(None, 1.0, 40, 0).expect("config");
    let cells = 16isize; // 2.0 length units
    let shifted_then = match evolve(&w0.rolled_q(cells), &Potential::Free, &params, &cfg) {
        Ok(x) => x,
        Err(e) => return failure(9, "translation", e),
    };
    let then_shifted = match evolve(&w0, &Potential::Free, &params, &cfg) {
        Ok(x) => x,
        Err(e) => return failure(9, "translation", e),
    };
    let diff = shifted_then
        .0
        .l2_distance(&then_shifted.0.rolled_q(cells))
        .expect("same grid");
    let mass_dev = shifted_then
        .1
        .max_mass_deviation(1.0)
        .max(then_shifted.1.max_mass_deviation(1.0));
    CriterionReport {
        id: 9,
        name: "translation",
        passed: diff <= 1e-6,
        detail: format!("shift/evolve commutator L2 = {diff:.3e}"),
        mass_dev: Some(mass_dev),
    }
}

/// Criterion 10: a cosine potential with hbar k far above the momentum
/// spread reduces to free motion — trajectory moments agree to relative 1e-2.
pub fn cosine_free_limit() -> CriterionReport {
    let params = LindbladParams {
        mass: 1.0,
        hbar: 1.0,
        lambda: 0.1,
        mu: 0.1,
        d_pp: 0.2,
        d_qq: 0.2,
        d_pq: 0.0,
    };
    let grid = spectral_grid(128, 10.0);
    // sigma_pp = 0.25 -> momentum spread 0.5; hbar k = 12 >= 20 * 0.5.
    // U0 stays small because second-order scattering into the +-hbar k
    // sidebands shifts sigma_pp by ~(U0 m / hbar k)^2 * (hbar k)^2 even in
    // the reduced regime.
    let w0 = gaussian_wigner(&GaussianMoments::new(0.0, 1.0, 1.0, 0.25, 0.0), &grid, 1.0)
        .expect("admissible");
    let cfg = RunConfig::new(Some(0.005), 2.0, 40, 0).expect("config");
    let pot = Potential::Cosine { u0: 0.1, k: 12.0 };
    let cos_run = match evolve(&w0, &pot, &params, &cfg) {
        Ok(x) => x,
        Err(e) => return failure(10, "cosine-free-limit", e),
    };
    let free_run = match evolve(&w0, &Potential::Free, &params, &cfg) {
        Ok(x) => x,
        Err(e) => return failure(10, "cosine-free-limit", e),
    };
    let mut worst_rel = 0.0f64;
    for field in 0..5usize {
        let pick = |r: &crate::integrate::TrajectoryRow| match field {
            0 => r.mean_q,
            1 => r.mean_p,
            2 => r.sigma_qq,
            3 => r.sigma_pp,
            _ => r.sigma_pq,
        };
        let scale = free_run
            .1
            .rows
            .iter()
            .fold(0.0f64, |s, r| s.max(pick(r).abs()));
        let mut err = 0.0f64;
        for (a, b) in cos_run.1.rows.iter().zip(free_run.1.rows.iter()) {
            err = err.max((pick(a) - pick(b)).abs());
        }
        worst_rel = worst_rel.max(err / scale.max(1e-30));
    }
    let mass_dev = cos_run
        .1
        .max_mass_deviation(1.0)
        .max(free_run.1.max_mass_deviation(1.0));
    CriterionReport {
        id: 10,
        name: "cosine-free-limit",
        passed: worst_rel <= 1e-2,
        detail: format!("worst relative moment gap {worst_rel:.3e}"),
        mass_dev: Some(mass_dev),
    }
}

fn aggregate_mass(reports: &[&CriterionReport]) -> CriterionReport {
    let mut worst = 0.0f64;
    let mut counted = 0;
    for r in reports {
        if let Some(dev) = r.mass_dev {
            worst = worst.max(dev);
            counted += 1;
        }
    }
    CriterionReport {
        id: 8,
        name: "mass-conservation",
        passed: counted > 0 && worst <= 1e-8,
        detail: format!("worst |mass - 1| = {worst:.3e} across {counted} scenarios"),
        mass_dev: Some(worst),
    }
}

/// Run all ten criteria in order. Criterion 8 aggregates the mass drift of
/// every evolving scenario.
pub fn run_all() -> Vec<CriterionReport> {
    let c1 = constraints();
    let c2 = wigner_transform();
    let c3 = harmonic_period();
    let c4 = moment_oracle();
    let c5 = fock_cross_check();
    let c6 = hbar_scaling();
    let c7 = kramers();
    let c9 = translation();
    let c10 = cosine_free_limit();
    let c8 = aggregate_mass(&[&c3, &c4, &c5, &c6, &c7, &c9, &c10]);
    vec![c1, c2, c3, c4, c5, c6, c7, c8, c9, c10]
}

/// Run one named scenario (see [`SCENARIO_NAMES`]); `mass-conservation`
/// re-checks mass on the two cheapest evolving scenarios.
pub fn run_scenario(name: &str) -> Option<Vec<CriterionReport>> {
    match name {
        "constraints" => Some(vec![constraints()]),
        "wigner-transform" => Some(vec![wigner_transform()]),
        "harmonic-period" => Some(vec![harmonic_period()]),
        "moment-oracle" => Some(vec![moment_oracle()]),
        "fock-cross-check" => Some(vec![fock_cross_check()]),
        "hbar-scaling" => Some(vec![hbar_scaling()]),
        "kramers" => Some(vec![kramers()]),
        "mass-conservation" => {
            let c9 = translation();
            let c10 = cosine_free_limit();
            let c8 = aggregate_mass(&[&c9, &c10]);
            Some(vec![c8])
        }
        "translation" => Some(vec![translation()]),
        "cosine-free-limit" => Some(vec![cosine_free_limit()]),
        "all" => Some(run_all()),
        _ => None,
    }
}

