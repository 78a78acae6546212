//! Independent verification machinery.
//!
//! Three reference routes exist alongside the grid solver:
//!
//! * moment ODEs for quadratic-family potentials (this module) — multiply the
//!   Fokker-Planck form of the dynamics by {q, p, q^2, qp, p^2} and integrate
//!   by parts over phase space; for U'(q) = m w2 q + gamma the means and
//!   centered covariances close on themselves:
//!
//!   ```text
//!   d<q>/dt       =  <p>/m - (lambda - mu) <q>
//!   d<p>/dt       = -m w2 <q> - gamma - (lambda + mu) <p>
//!   d sigma_qq/dt =  2 sigma_pq / m - 2 (lambda - mu) sigma_qq + 2 D_qq
//!   d sigma_pp/dt = -2 m w2 sigma_pq - 2 (lambda + mu) sigma_pp + 2 D_pp
//!   d sigma_pq/dt =  sigma_pp / m - m w2 sigma_qq - 2 lambda sigma_pq + 2 D_pq
//!   ```
//!
//!   Every coefficient is cross-checked against finite-difference probes of
//!   the grid solver in this crate's integration tests before being trusted.
//!
//! * a truncated-Fock-basis propagator for the operator master equation
//!   ([`fock`]), cross-validated against the grid through the Wigner
//!   transform;
//!
//! * the thermal stationary state of the Kramers configuration
//!   ([`kramers_stationary`]), certified by [`stationarity_residual`].

pub mod fock;
pub(crate) mod linalg;

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::evolution::full_rhs;
use crate::grid::PhaseSpaceGrid;
use crate::moments::GaussianMoments;
use crate::params::LindbladParams;
use crate::potential::Potential;
use crate::state::WignerState;

/// Force-law coefficients U'(q) = m*w2*q + gamma of the quadratic family.
fn quadratic_force(pot: &Potential) -> Result<(f64, f64)> {
    match pot {
        Potential::Free => Ok((0.0, 0.0)),
        Potential::Linear { gamma } => Ok((0.0, *gamma)),
        Potential::Harmonic { omega } => Ok((omega * omega, 0.0)),
        Potential::InvertedParabola { kappa } => Ok((-kappa * kappa, 0.0)),
        other => Err(Error::UnsupportedPotential(other.kind_name())),
    }
}

/// Time derivative of the five moments under the quadratic-family dynamics.
pub fn moment_rhs(
    mom: &GaussianMoments,
    params: &LindbladParams,
    pot: &Potential,
) -> Result<GaussianMoments> {
    let (w2, gamma) = quadratic_force(pot)?;
    let m = params.mass;
    let lm = params.lambda - params.mu;
    let lp = params.lambda + params.mu;
    Ok(GaussianMoments {
        mean_q: mom.mean_p / m - lm * mom.mean_q,
        mean_p: -m * w2 * mom.mean_q - gamma - lp * mom.mean_p,
        sigma_qq: 2.0 * mom.sigma_pq / m - 2.0 * lm * mom.sigma_qq + 2.0 * params.d_qq,
        sigma_pp: -2.0 * m * w2 * mom.sigma_pq - 2.0 * lp * mom.sigma_pp + 2.0 * params.d_pp,
        sigma_pq: mom.sigma_pp / m - m * w2 * mom.sigma_qq - 2.0 * params.lambda * mom.sigma_pq
            + 2.0 * params.d_pq,
    })
}

fn add_scaled(a: &GaussianMoments, s: f64, b: &GaussianMoments) -> GaussianMoments {
    GaussianMoments {
        mean_q: a.mean_q + s * b.mean_q,
        mean_p: a.mean_p + s * b.mean_p,
        sigma_qq: a.sigma_qq + s * b.sigma_qq,
        sigma_pp: a.sigma_pp + s * b.sigma_pp,
        sigma_pq: a.sigma_pq + s * b.sigma_pq,
    }
}

fn moment_rk4_step(
    mom: &GaussianMoments,
    params: &LindbladParams,
    pot: &Potential,
    dt: f64,
) -> Result<GaussianMoments> {
    let k1 = moment_rhs(mom, params, pot)?;
    let k2 = moment_rhs(&add_scaled(mom, 0.5 * dt, &k1), params, pot)?;
    let k3 = moment_rhs(&add_scaled(mom, 0.5 * dt, &k2), params, pot)?;
    let k4 = moment_rhs(&add_scaled(mom, dt, &k3), params, pot)?;
    let mut out = add_scaled(mom, dt / 6.0, &k1);
    out = add_scaled(&out, dt / 3.0, &k2);
    out = add_scaled(&out, dt / 3.0, &k3);
    out = add_scaled(&out, dt / 6.0, &k4);
    Ok(out)
}

/// Integrate the moment ODEs to `t_end` with step ~`dt` (RK4, final step
/// shortened to land exactly).
pub fn evolve_moments(
    mom0: &GaussianMoments,
    params: &LindbladParams,
    pot: &Potential,
    t_end: f64,
    dt: f64,
) -> Result<GaussianMoments> {
    let mut mom = *mom0;
    let mut t = 0.0;
    while t < t_end - 1e-15 {
        let step = dt.min(t_end - t);
        mom = moment_rk4_step(&mom, params, pot, step)?;
        t += step;
    }
    Ok(mom)
}

/// Moment trajectories sampled at the given (sorted, non-negative) times.
pub fn moments_at(
    mom0: &GaussianMoments,
    params: &LindbladParams,
    pot: &Potential,
    times: &[f64],
    dt: f64,
) -> Result<Vec<GaussianMoments>> {
    let mut out = Vec::with_capacity(times.len());
    let mut mom = *mom0;
    let mut t = 0.0;
    for &target in times {
        if target > t {
            let span = target - t;
            let n = (span / dt).ceil().max(1.0) as usize;
            let step = span / n as f64;
            for _ in 0..n {
                mom = moment_rk4_step(&mom, params, pot, step)?;
            }
            t = target;
        }
        out.push(mom);
    }
    Ok(out)
}

/// Fixed point of the moment ODEs, when the drift is contracting enough for
/// one to exist (harmonic with friction, notably). `None` when the linear
/// systems are singular.
pub fn stationary_moments(params: &LindbladParams, pot: &Potential) -> Result<Option<GaussianMoments>> {
    let (w2, gamma) = quadratic_force(pot)?;
    let m = params.mass;
    let lm = params.lambda - params.mu;
    let lp = params.lambda + params.mu;

    // means: <p> = m lm <q> from the first equation; substituting into the
    // second gives m (w2 + lm lp) <q> = -gamma
    let det_mean = w2 + lm * lp;
    if det_mean.abs() < 1e-14 {
        return Ok(None);
    }
    let mean_q = -gamma / (m * det_mean);
    let mean_p = m * lm * mean_q;

    // covariances: 3x3 system A s = b with s = (sigma_qq, sigma_pp, sigma_pq)
    let a = [
        [-2.0 * lm, 0.0, 2.0 / m],
        [0.0, -2.0 * lp, -2.0 * m * w2],
        [-m * w2, 1.0 / m, -2.0 * params.lambda],
    ];
    let b = [-2.0 * params.d_qq, -2.0 * params.d_pp, -2.0 * params.d_pq];
    let det = det3(&a);
    if det.abs() < 1e-14 {
        return Ok(None);
    }
    let mut cols = [0.0; 3];
    for c in 0..3 {
        let mut ac = a;
        for r in 0..3 {
            ac[r][c] = b[r];
        }
        cols[c] = det3(&ac) / det;
    }
    Ok(Some(GaussianMoments {
        mean_q,
        mean_p,
        sigma_qq: cols[0],
        sigma_pp: cols[1],
        sigma_pq: cols[2],
    }))
}

fn det3(a: &[[f64; 3]; 3]) -> f64 {
    a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
}

/// Thermal stationary state of the Kramers configuration:
/// W ~ exp[-p^2/(2 m kT) - U(q)/kT], normalized on the grid.
///
/// Exists only when exp(-U/kT) is normalizable, i.e. U grows without bound on
/// both sides; non-confining catalog members are rejected.
pub fn kramers_stationary(
    pot: &Potential,
    mass: f64,
    k_b_t: f64,
    grid: &PhaseSpaceGrid,
) -> Result<WignerState> {
    if !(k_b_t > 0.0 && k_b_t.is_finite()) {
        return Err(Error::InvalidConfig(format!("k_B T = {k_b_t} must be positive")));
    }
    let confining = match pot {
        Potential::Harmonic { .. } => true,
        Potential::Quartic { c, .. } => *c >= 0.0,
        Potential::Polynomial { coeffs } => {
            let leading = coeffs.iter().enumerate().rev().find(|(_, a)| **a != 0.0);
            match leading {
                Some((idx, a)) => (idx + 1) % 2 == 0 && *a > 0.0,
                None => false,
            }
        }
        _ => false,
    };
    if !confining {
        return Err(Error::NotNormalizable);
    }

    let mut values = Array2::zeros((grid.n_q, grid.n_p));
    for i in 0..grid.n_q {
        let u = pot.value(grid.q_at(i), mass);
        for j in 0..grid.n_p {
            let p = grid.p_at(j);
            values[[i, j]] = (-(0.5 * p * p / mass + u) / k_b_t).exp();
        }
    }
    let norm = values.sum() * grid.cell_area();
    values /= norm;
    WignerState::new(*grid, values, 0.0)
}

/// Relative stationarity measure ||full_rhs(W)||_inf / ||W||_inf; ~0 for
/// stationary states, O(1/time-scale) otherwise. Zero fields report 0.
pub fn stationarity_residual(
    w: &WignerState,
    pot: &Potential,
    params: &LindbladParams,
    truncation: u32,
) -> Result<f64> {
    let scale = w.max_abs();
    if scale == 0.0 {
        return Ok(0.0);
    }
    let rhs = full_rhs(w, pot, params, truncation)?;
    Ok(rhs.total_sup() / scale)
}
