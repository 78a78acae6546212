//! Explicit RK4 time stepping of the Wigner state.
//!
//! The stepper is explicit with a fixed dt, which is adequate at desk scale.
//! Strong momentum diffusion makes the dynamics stiff (the stable step
//! shrinks as dp^2/D_pp); that regime is reported through the stability
//! bound but gets no special treatment — there is no implicit or
//! exponential integrator here.

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::evolution::full_rhs;
use crate::grid::PhaseSpaceGrid;
use crate::params::LindbladParams;
use crate::potential::Potential;
use crate::state::WignerState;

/// Fixed-step run configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    /// Step size; `None` picks `safety * stability_bound` automatically.
    pub dt: Option<f64>,
    pub t_end: f64,
    /// Observer sampling period in steps.
    pub stride: usize,
    /// Quantum-correction series truncation.
    pub truncation: u32,
    /// Stability safety factor c in (0, 1].
    pub safety: f64,
}

impl RunConfig {
    pub fn new(dt: Option<f64>, t_end: f64, stride: usize, truncation: u32) -> Result<Self> {
        let cfg = Self {
            dt,
            t_end,
            stride,
            truncation,
            safety: 0.4,
        };
        cfg.check()?;
        Ok(cfg)
    }

    pub fn with_safety(mut self, safety: f64) -> Result<Self> {
        self.safety = safety;
        self.check()?;
        Ok(self)
    }

    fn check(&self) -> Result<()> {
        if let Some(dt) = self.dt {
            if !(dt.is_finite() && dt > 0.0) {
                return Err(Error::InvalidConfig(format!("dt = {dt} must be positive")));
            }
        }
        if !(self.t_end.is_finite() && self.t_end >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "t_end = {} must be non-negative",
                self.t_end
            )));
        }
        if self.stride == 0 {
            return Err(Error::InvalidConfig("stride must be at least 1".into()));
        }
        if !(self.safety > 0.0 && self.safety <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "safety factor {} must lie in (0, 1]",
                self.safety
            )));
        }
        Ok(())
    }
}

/// One sampled row of run diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryRow {
    pub t: f64,
    pub mass: f64,
    pub mean_q: f64,
    pub mean_p: f64,
    pub sigma_qq: f64,
    pub sigma_pp: f64,
    pub sigma_pq: f64,
    pub edge_mass: f64,
    pub min_w: f64,
    /// <H0> = <p^2/2m + U(q)>, normalized by the mass.
    pub energy: f64,
}

/// Observer samples accumulated over a run (monotone in t).
#[derive(Debug, Clone, Default)]
pub struct TrajectoryRecord {
    pub rows: Vec<TrajectoryRow>,
}

impl TrajectoryRecord {
    pub fn max_mass_deviation(&self, reference: f64) -> f64 {
        self.rows
            .iter()
            .fold(0.0f64, |m, r| m.max((r.mass - reference).abs()))
    }
}

fn record_row(w: &WignerState, pot: &Potential, params: &LindbladParams) -> TrajectoryRow {
    let mass = w.mass();
    let m = w.empirical_moments();
    let norm = if mass.abs() > f64::EPSILON { 1.0 / mass } else { 0.0 };
    let energy = w.expectation(|q, p| 0.5 * p * p / params.mass + pot.value(q, params.mass)) * norm;
    TrajectoryRow {
        t: w.time(),
        mass,
        mean_q: m.mean_q,
        mean_p: m.mean_p,
        sigma_qq: m.sigma_qq,
        sigma_pp: m.sigma_pp,
        sigma_pq: m.sigma_pq,
        edge_mass: w.edge_mass(),
        min_w: w.min_value(),
        energy,
    }
}

/// Largest stable RK4 step for the spectral scheme, from the
/// frozen-coefficient symbol at the worst grid corner.
///
/// Advection-like rates (streaming, force, friction drifts, and the odd
/// momentum derivatives of the quantum-correction series, whose symbols grow
/// as k_p^(2n+1)) add up on the imaginary axis; diffusion rates sit on the
/// negative real axis. The bound keeps each sum inside the corresponding
/// reach of the RK4 stability region (2.82 on the imaginary axis, 2.78 on
/// the real axis). A plain min() over the individual terms is not
/// sufficient: combined advection-diffusion runs (the momentum-diffusion
/// thermalization setup, notably) drift slowly unstable under it, and the
/// correction terms blow up fast when ignored.
pub fn stability_bound(
    grid: &PhaseSpaceGrid,
    pot: &Potential,
    params: &LindbladParams,
    truncation: u32,
) -> f64 {
    let k_q = std::f64::consts::PI / grid.dq();
    let k_p = std::f64::consts::PI / grid.dp();
    let p_max = grid.p_abs_max();
    let q_max = grid.q_min.abs().max(grid.q_at(grid.n_q - 1).abs());

    let sup_derivative = |order: u32| {
        let mut worst = 0.0f64;
        for i in 0..grid.n_q {
            worst = worst.max(pot.derivative(grid.q_at(i), order, params.mass).abs());
        }
        worst
    };
    // the cosine force acts through the bounded shift-difference operator,
    // not through momentum derivatives
    let (force_rate, quantum_rate) = match pot {
        Potential::Cosine { k, .. } => (2.0 * sup_derivative(1) / (params.hbar * k), 0.0),
        _ => {
            let n_eff = pot.correction_depth().clamp(truncation);
            let mut series = 0.0;
            let mut coef = 1.0;
            for n in 1..=n_eff {
                coef *= params.hbar * params.hbar / (4.0 * (2 * n) as f64 * (2 * n + 1) as f64);
                series += coef * sup_derivative(2 * n + 1) * k_p.powi(2 * n as i32 + 1);
            }
            (sup_derivative(1) * k_p, series)
        }
    };

    let drift_q = (params.lambda - params.mu).abs() * q_max * k_q;
    let drift_p = (params.lambda + params.mu).abs() * p_max * k_p;
    let advection = p_max / params.mass * k_q + force_rate + quantum_rate + drift_q + drift_p;
    let diffusion = params.d_pp.abs() * k_p * k_p
        + params.d_qq.abs() * k_q * k_q
        + 2.0 * params.d_pq.abs() * k_q * k_p;

    let mut bound = f64::INFINITY;
    if advection > 0.0 {
        bound = bound.min(2.82 / advection);
    }
    if diffusion > 0.0 {
        bound = bound.min(2.78 / diffusion);
    }
    bound
}

fn blowup_diagnostic(
    grid: &PhaseSpaceGrid,
    pot: &Potential,
    params: &LindbladParams,
    truncation: u32,
    dt: f64,
) -> String {
    let bound = stability_bound(grid, pot, params, truncation);
    format!(
        "dt = {dt:.3e}, stability bound = {bound:.3e} (dt/bound = {:.2})",
        dt / bound
    )
}

/// Advance one RK4 step of length `dt`.
///
/// A step that produces NaN/Inf fails with `NumericalBlowup` carrying the
/// step-size diagnostic.
pub fn step(
    w: &WignerState,
    pot: &Potential,
    params: &LindbladParams,
    dt: f64,
    truncation: u32,
) -> Result<WignerState> {
    let stepped = rk4_step(w, pot, params, dt, truncation)?;
    if !stepped.values().iter().all(|v| v.is_finite()) {
        return Err(Error::NumericalBlowup {
            step: 0,
            time: w.time(),
            diagnostic: blowup_diagnostic(w.grid(), pot, params, truncation, dt),
        });
    }
    Ok(stepped)
}

fn rk4_step(
    w: &WignerState,
    pot: &Potential,
    params: &LindbladParams,
    dt: f64,
    truncation: u32,
) -> Result<WignerState> {
    let grid = *w.grid();
    let stage = |values: Array2<f64>| WignerState::from_parts_unchecked(grid, values, w.time());

    let k1 = full_rhs(w, pot, params, truncation)?.total();
    let w2 = stage(w.values() + &(0.5 * dt * &k1));
    let k2 = full_rhs(&w2, pot, params, truncation)?.total();
    let w3 = stage(w.values() + &(0.5 * dt * &k2));
    let k3 = full_rhs(&w3, pot, params, truncation)?.total();
    let w4 = stage(w.values() + &(dt * &k3));
    let k4 = full_rhs(&w4, pot, params, truncation)?.total();

    let mut out = w.values().clone();
    let c = dt / 6.0;
    ndarray::Zip::from(&mut out)
        .and(&k1)
        .and(&k2)
        .and(&k3)
        .and(&k4)
        .for_each(|o, &a, &b, &cc, &d| {
            *o += c * (a + 2.0 * b + 2.0 * cc + d);
        });
    Ok(WignerState::from_parts_unchecked(grid, out, w.time() + dt))
}

/// Evolve to `cfg.t_end`, sampling diagnostics every `cfg.stride` steps.
pub fn evolve(
    w0: &WignerState,
    pot: &Potential,
    params: &LindbladParams,
    cfg: &RunConfig,
) -> Result<(WignerState, TrajectoryRecord)> {
    evolve_observed(w0, pot, params, cfg, |_| {})
}

/// Like [`evolve`], additionally invoking `observer` on every sampled state
/// (including the initial and final ones).
pub fn evolve_observed<F: FnMut(&WignerState)>(
    w0: &WignerState,
    pot: &Potential,
    params: &LindbladParams,
    cfg: &RunConfig,
    observer: F,
) -> Result<(WignerState, TrajectoryRecord)> {
    evolve_with_snapshots(w0, pot, params, cfg, &[], |_| {}, observer)
}

/// Full-control evolution: lands exactly on every requested snapshot time
/// (and on t_end), calling `on_snapshot` there; `observer` fires at stride
/// samples. Steps are never longer than the configured dt; segment-final
/// steps are shortened to hit their targets exactly.
#[allow(clippy::too_many_arguments)]
pub fn evolve_with_snapshots<S, F>(
    w0: &WignerState,
    pot: &Potential,
    params: &LindbladParams,
    cfg: &RunConfig,
    snapshot_times: &[f64],
    mut on_snapshot: S,
    mut observer: F,
) -> Result<(WignerState, TrajectoryRecord)>
where
    S: FnMut(&WignerState),
    F: FnMut(&WignerState),
{
    cfg.check()?;
    if !w0.values().iter().all(|v| v.is_finite()) {
        return Err(Error::NumericalBlowup {
            step: 0,
            time: w0.time(),
            diagnostic: "initial state contains non-finite values".into(),
        });
    }
    pot.check()?;

    let dt = match cfg.dt {
        Some(dt) => dt,
        None => {
            let bound = stability_bound(w0.grid(), pot, params, cfg.truncation);
            if !bound.is_finite() {
                return Err(Error::InvalidConfig(
                    "automatic dt needs a finite stability bound; set dt explicitly".into(),
                ));
            }
            cfg.safety * bound
        }
    };

    let t0 = w0.time();
    let mut targets: Vec<f64> = snapshot_times
        .iter()
        .copied()
        .filter(|&t| t > t0 && t < t0 + cfg.t_end)
        .collect();
    targets.push(t0 + cfg.t_end);
    targets.sort_by(|a, b| a.partial_cmp(b).expect("finite times"));
    targets.dedup();

    let mut record = TrajectoryRecord::default();
    let mut w = w0.clone();
    record.rows.push(record_row(&w, pot, params));
    observer(&w);
    if snapshot_times.iter().any(|&t| (t - t0).abs() < 1e-12) {
        on_snapshot(&w);
    }
    if cfg.t_end == 0.0 {
        return Ok((w, record));
    }

    let mut step_index = 0usize;
    for &target in &targets {
        let span = target - w.time();
        if span <= 0.0 {
            continue;
        }
        let n_steps = (span / dt - 1e-9).ceil().max(1.0) as usize;
        let seg_start = w.time();
        for s in 0..n_steps {
            let step_dt = if s + 1 == n_steps {
                target - w.time()
            } else {
                dt
            };
            w = rk4_step(&w, pot, params, step_dt, cfg.truncation)?;
            if s + 1 == n_steps {
                // land exactly, avoiding accumulated roundoff in the clock
                w = w.with_time(target);
            } else {
                w = w.with_time(seg_start + (s + 1) as f64 * dt);
            }
            step_index += 1;
            if !w.values().iter().all(|v| v.is_finite()) {
                return Err(Error::NumericalBlowup {
                    step: step_index,
                    time: w.time(),
                    diagnostic: blowup_diagnostic(w.grid(), pot, params, cfg.truncation, step_dt),
                });
            }
            let is_last_overall = s + 1 == n_steps && target == *targets.last().unwrap();
            if step_index % cfg.stride == 0 || is_last_overall {
                record.rows.push(record_row(&w, pot, params));
                observer(&w);
            }
        }
        if target < *targets.last().unwrap() || snapshot_times.iter().any(|&t| (t - target).abs() < 1e-12)
        {
            on_snapshot(&w);
        }
    }

    Ok((w, record))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::DerivativeScheme;
    use crate::moments::GaussianMoments;
    use crate::state::gaussian_wigner;

    fn grid(n: usize, l: f64) -> PhaseSpaceGrid {
        PhaseSpaceGrid::centered(l, l, n, n, DerivativeScheme::SpectralPeriodic).unwrap()
    }

    fn closed() -> LindbladParams {
        LindbladParams::closed(1.0, 1.0)
    }

    #[test]
    fn zero_dt_is_identity() {
        let g = grid(32, 8.0);
        let w = gaussian_wigner(&GaussianMoments::new(0.5, 0.0, 0.5, 0.5, 0.0), &g, 1.0).unwrap();
        let stepped = step(&w, &Potential::Harmonic { omega: 1.0 }, &closed(), 0.0, 0).unwrap();
        for (a, b) in stepped.values().iter().zip(w.values().iter()) {
            assert_eq!(a, b);
        }
        assert_eq!(stepped.time(), w.time());
    }

    #[test]
    fn free_particle_moves_ballistically() {
        let g = grid(64, 8.0);
        let w0 = gaussian_wigner(&GaussianMoments::new(-1.0, 1.0, 0.5, 0.5, 0.0), &g, 1.0).unwrap();
        let cfg = RunConfig::new(Some(0.01), 1.0, 10, 0).unwrap();
        let (w1, record) = evolve(&w0, &Potential::Free, &closed(), &cfg).unwrap();
        let m = w1.empirical_moments();
        assert!((m.mean_q - 0.0).abs() < 1e-6, "mean_q = {}", m.mean_q);
        assert!((m.mean_p - 1.0).abs() < 1e-9);
        assert!(record.max_mass_deviation(1.0) < 1e-10);
    }

    #[test]
    fn harmonic_half_period_reflects_the_state() {
        // rigid rotation by pi maps (q,p) -> (-q,-p); on the centered grid
        // that's an exact index reversal, giving an interpolation-free oracle
        let g = grid(64, 8.0);
        let w0 = gaussian_wigner(&GaussianMoments::new(1.5, 0.0, 0.5, 0.5, 0.0), &g, 1.0).unwrap();
        let t_half = std::f64::consts::PI;
        let cfg = RunConfig::new(Some(t_half / 400.0), t_half, 100, 0).unwrap();
        let (w1, _) = evolve(&w0, &Potential::Harmonic { omega: 1.0 }, &closed(), &cfg).unwrap();
        let n = g.n_q;
        let mut err = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let expect = w0.values()[[(n - i) % n, (n - j) % n]];
                err = err.max((w1.values()[[i, j]] - expect).abs());
            }
        }
        assert!(err < 2e-4, "half-period reflection error {err}");
    }

    #[test]
    fn harmonic_full_period_returns() {
        let g = grid(64, 8.0);
        let w0 = gaussian_wigner(&GaussianMoments::new(1.5, 0.0, 0.5, 0.5, 0.0), &g, 1.0).unwrap();
        let t = 2.0 * std::f64::consts::PI;
        let cfg = RunConfig::new(Some(t / 800.0), t, 200, 0).unwrap();
        let (w1, record) = evolve(&w0, &Potential::Harmonic { omega: 1.0 }, &closed(), &cfg).unwrap();
        assert!(w1.l2_distance(&w0).unwrap() < 1e-3);
        assert!(record.max_mass_deviation(1.0) < 1e-10);
    }

    #[test]
    fn mass_is_conserved_for_arbitrary_fields() {
        // conservation holds for any field, normalized or not
        let g = grid(48, 8.0);
        let mut values = Array2::zeros((48, 48));
        for i in 0..48 {
            for j in 0..48 {
                let (q, p) = (g.q_at(i), g.p_at(j));
                values[[i, j]] = (-0.7 * q * q - 0.4 * p * p).exp() * (1.0 + 0.3 * (q + 0.2 * p));
            }
        }
        let w0 = WignerState::new(g, values, 0.0).unwrap();
        let mass0 = w0.mass();
        let cfg = RunConfig::new(Some(0.01), 1.0, 25, 0).unwrap();
        let (w1, _) = evolve(&w0, &Potential::Free, &closed(), &cfg).unwrap();
        assert!((w1.mass() - mass0).abs() < 1e-10);
    }

    #[test]
    fn dt_convergence_is_fourth_order() {
        let g = grid(64, 8.0);
        let w0 = gaussian_wigner(&GaussianMoments::new(1.0, 0.0, 0.5, 0.5, 0.0), &g, 1.0).unwrap();
        let pot = Potential::Harmonic { omega: 1.0 };
        let t = 1.0;
        let run = |dt: f64| {
            let cfg = RunConfig::new(Some(dt), t, usize::MAX, 0).unwrap();
            evolve(&w0, &pot, &closed(), &cfg).unwrap().0
        };
        // dt must stay inside the RK4 stability region (k_max * p_max * dt
        // below ~2.8), so probe at t/64 and t/128
        let reference = run(t / 1024.0);
        let e1 = run(t / 64.0).l2_distance(&reference).unwrap();
        let e2 = run(t / 128.0).l2_distance(&reference).unwrap();
        let rate = (e1 / e2).log2();
        assert!((rate - 4.0).abs() < 0.4, "rate {rate} (e1 {e1}, e2 {e2})");
    }

    #[test]
    fn gaussian_initial_states_stay_gaussian_in_quadratic_potentials() {
        let g = grid(96, 10.0);
        let w0 = gaussian_wigner(&GaussianMoments::new(1.0, 0.5, 0.6, 0.7, 0.1), &g, 1.0).unwrap();
        let params = LindbladParams {
            mass: 1.0,
            hbar: 1.0,
            lambda: 0.3,
            mu: 0.2,
            d_pp: 0.5,
            d_qq: 0.4,
            d_pq: 0.0,
        };
        let cfg = RunConfig::new(None, 3.0, 50, 0).unwrap();
        let mut worst_kurt = 0.0f64;
        let observer = |w: &WignerState| {
            // excess kurtosis of both marginals
            let mass = w.mass();
            let m = w.empirical_moments();
            for (axis, (mean, var)) in [(0, (m.mean_q, m.sigma_qq)), (1, (m.mean_p, m.sigma_pp))] {
                let m4 = w.expectation(|q, p| {
                    let x = if axis == 0 { q } else { p };
                    (x - mean).powi(4)
                }) / mass;
                worst_kurt = worst_kurt.max((m4 / (var * var) - 3.0).abs());
            }
        };
        evolve_observed(&w0, &Potential::Harmonic { omega: 1.0 }, &params, &cfg, observer).unwrap();
        assert!(worst_kurt < 1e-3, "excess kurtosis {worst_kurt}");
    }

    #[test]
    fn drift_contracts_and_diffusion_expands() {
        let g = grid(64, 8.0);
        let w0 = gaussian_wigner(&GaussianMoments::new(0.0, 0.0, 0.5, 0.5, 0.0), &g, 1.0).unwrap();
        let pure_w2 = |w: &WignerState| {
            let mut acc = 0.0;
            for v in w.values().iter() {
                acc += v * v;
            }
            acc * w.grid().cell_area()
        };
        // pure drift (friction only): volume contraction raises Int W^2
        let drift = LindbladParams {
            mass: 1.0,
            hbar: 1.0,
            lambda: 0.3,
            mu: 0.0,
            d_pp: 0.0,
            d_qq: 0.0,
            d_pq: 0.0,
        };
        let cfg = RunConfig::new(Some(0.005), 0.5, 20, 0).unwrap();
        let mut series = Vec::new();
        evolve_observed(&w0, &Potential::Free, &drift, &cfg, |w| series.push(pure_w2(w))).unwrap();
        assert!(
            series.windows(2).all(|w| w[1] >= w[0] - 1e-12),
            "Int W^2 should grow under pure drift: {series:?}"
        );
        // pure diffusion: -Int W^2 is non-decreasing
        let diffusion = LindbladParams {
            mass: 1.0,
            hbar: 1.0,
            lambda: 0.0,
            mu: 0.0,
            d_pp: 0.3,
            d_qq: 0.3,
            d_pq: 0.0,
        };
        let mut series = Vec::new();
        evolve_observed(&w0, &Potential::Free, &diffusion, &cfg, |w| series.push(pure_w2(w)))
            .unwrap();
        assert!(
            series.windows(2).all(|w| w[1] <= w[0] + 1e-12),
            "Int W^2 should decay under pure diffusion: {series:?}"
        );
    }

    #[test]
    fn oversized_steps_blow_up_with_diagnostic() {
        let g = grid(64, 8.0);
        let w0 = gaussian_wigner(&GaussianMoments::new(1.0, 0.0, 0.5, 0.5, 0.0), &g, 1.0).unwrap();
        let cfg = RunConfig::new(Some(0.5), 40.0, 10, 0).unwrap();
        match evolve(&w0, &Potential::Harmonic { omega: 1.0 }, &closed(), &cfg) {
            Err(Error::NumericalBlowup { step, diagnostic, .. }) => {
                assert!(step > 0);
                assert!(diagnostic.contains("stability bound"));
            }
            other => panic!("expected blowup, got {other:?}"),
        }
    }

    #[test]
    fn observer_sampling_includes_endpoints() {
        let g = grid(32, 8.0);
        let w0 = gaussian_wigner(&GaussianMoments::new(0.0, 0.0, 0.5, 0.5, 0.0), &g, 1.0).unwrap();
        let cfg = RunConfig::new(Some(0.01), 0.1, 3, 0).unwrap();
        let (w1, record) = evolve(&w0, &Potential::Free, &closed(), &cfg).unwrap();
        assert_eq!(w1.time(), 0.1);
        assert_eq!(record.rows.first().unwrap().t, 0.0);
        assert_eq!(record.rows.last().unwrap().t, 0.1);
        // 10 steps, stride 3 -> rows at steps 0, 3, 6, 9, 10
        assert_eq!(record.rows.len(), 5);
        for pair in record.rows.windows(2) {
            assert!(pair[1].t > pair[0].t);
        }
    }

    #[test]
    fn fd_scheme_evolves_and_nearly_conserves_mass() {
        // the diagnostic scheme has one-sided edge stencils, so conservation
        // is only as good as the field decay at the box edge
        let g = PhaseSpaceGrid::centered(8.0, 8.0, 64, 64, DerivativeScheme::CentralFd4).unwrap();
        let w0 = gaussian_wigner(&GaussianMoments::new(0.5, 0.3, 0.5, 0.5, 0.0), &g, 1.0).unwrap();
        let params = LindbladParams {
            mass: 1.0,
            hbar: 1.0,
            lambda: 0.2,
            mu: 0.2,
            d_pp: 0.3,
            d_qq: 0.3,
            d_pq: 0.0,
        };
        let cfg = RunConfig::new(None, 0.5, 20, 0).unwrap();
        let (w1, record) = evolve(&w0, &Potential::Harmonic { omega: 1.0 }, &params, &cfg).unwrap();
        assert_eq!(w1.time(), 0.5);
        assert!(record.max_mass_deviation(1.0) < 1e-9);
        // agrees with the spectral run at diagnostic accuracy
        let gs = grid(64, 8.0);
        let w0s = gaussian_wigner(&GaussianMoments::new(0.5, 0.3, 0.5, 0.5, 0.0), &gs, 1.0).unwrap();
        let (w1s, _) = evolve(&w0s, &Potential::Harmonic { omega: 1.0 }, &params, &cfg).unwrap();
        let mut sup = 0.0f64;
        for (a, b) in w1.values().iter().zip(w1s.values().iter()) {
            sup = sup.max((a - b).abs());
        }
        assert!(sup < 1e-3, "scheme gap {sup}");
    }

    #[test]
    fn snapshots_land_exactly() {
        let g = grid(32, 8.0);
        let w0 = gaussian_wigner(&GaussianMoments::new(0.0, 0.5, 0.5, 0.5, 0.0), &g, 1.0).unwrap();
        let cfg = RunConfig::new(Some(0.03), 1.0, 5, 0).unwrap();
        let mut times = Vec::new();
        evolve_with_snapshots(
            &w0,
            &Potential::Free,
            &closed(),
            &cfg,
            &[0.25, 0.7],
            |w| times.push(w.time()),
            |_| {},
        )
        .unwrap();
        assert_eq!(times, vec![0.25, 0.7]);
    }

    #[test]
    fn auto_dt_respects_the_bound() {
        let g = grid(64, 8.0);
        let pot = Potential::Harmonic { omega: 1.0 };
        let params = closed();
        let bound = stability_bound(&g, &pot, &params, 0);
        assert!(bound > 0.0 && bound.is_finite());
        // streaming and force rates are symmetric here: 2 * k_max * 8
        let expect = 2.82 / (2.0 * (std::f64::consts::PI / g.dq()) * 8.0);
        assert!((bound - expect).abs() < 1e-12, "{bound} vs {expect}");
        let w0 = gaussian_wigner(&GaussianMoments::new(1.0, 0.0, 0.5, 0.5, 0.0), &g, 1.0).unwrap();
        let cfg = RunConfig::new(None, 1.0, 100, 0).unwrap();
        let (w1, record) = evolve(&w0, &pot, &params, &cfg).unwrap();
        assert_eq!(w1.time(), 1.0);
        assert!(record.max_mass_deviation(1.0) < 1e-10);
    }
}
