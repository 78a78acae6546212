//! The discretized Wigner function and its read-only observables.

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};
use crate::grid::PhaseSpaceGrid;
use crate::moments::GaussianMoments;

/// Real-valued Wigner field over a phase-space grid at a fixed time.
///
/// Immutable snapshot: all observables are read-only; evolution produces new
/// states. Values carry units 1/(length*momentum). Negative values are
/// legitimate (the Wigner function cannot be everywhere positive); the total
/// mass is monitored, never renormalized.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerState {
    grid: PhaseSpaceGrid,
    values: Array2<f64>,
    time: f64,
}

impl WignerState {
    /// Wrap a field, checking shape and finiteness.
    pub fn new(grid: PhaseSpaceGrid, values: Array2<f64>, time: f64) -> Result<Self> {
        if values.shape() != [grid.n_q, grid.n_p] {
            return Err(Error::GridMismatch(format!(
                "field shape {:?} does not match grid {}x{}",
                values.shape(),
                grid.n_q,
                grid.n_p
            )));
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(Error::GridMismatch("field contains non-finite values".into()));
        }
        Ok(Self { grid, values, time })
    }

    /// Internal constructor for the integrator, which performs its own
    /// finiteness scan each step.
    pub(crate) fn from_parts_unchecked(grid: PhaseSpaceGrid, values: Array2<f64>, time: f64) -> Self {
        Self { grid, values, time }
    }

    pub fn grid(&self) -> &PhaseSpaceGrid {
        &self.grid
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub(crate) fn with_time(mut self, time: f64) -> Self {
        self.time = time;
        self
    }

    /// Total mass dq*dp*sum(W); preserved at 1 by the dynamics for a
    /// normalized state.
    pub fn mass(&self) -> f64 {
        self.grid.cell_area() * self.values.sum()
    }

    /// Phase-space average of a grid observable: dq*dp*sum f(q,p) W(q,p).
    pub fn expectation<F: Fn(f64, f64) -> f64>(&self, f: F) -> f64 {
        let mut acc = 0.0;
        for (i, row) in self.values.outer_iter().enumerate() {
            let q = self.grid.q_at(i);
            for (j, &w) in row.iter().enumerate() {
                acc += f(q, self.grid.p_at(j)) * w;
            }
        }
        acc * self.grid.cell_area()
    }

    /// Position and momentum densities: (dp*sum_p W, dq*sum_q W).
    pub fn marginals(&self) -> (Array1<f64>, Array1<f64>) {
        let dp = self.grid.dp();
        let dq = self.grid.dq();
        let position = self.values.sum_axis(ndarray::Axis(1)) * dp;
        let momentum = self.values.sum_axis(ndarray::Axis(0)) * dq;
        (position, momentum)
    }

    /// Means and centered second moments, normalized by the current mass.
    pub fn empirical_moments(&self) -> GaussianMoments {
        let mass = self.mass();
        let norm = if mass.abs() > f64::EPSILON { 1.0 / mass } else { 0.0 };
        let mean_q = self.expectation(|q, _| q) * norm;
        let mean_p = self.expectation(|_, p| p) * norm;
        let sigma_qq = self.expectation(|q, _| (q - mean_q) * (q - mean_q)) * norm;
        let sigma_pp = self.expectation(|_, p| (p - mean_p) * (p - mean_p)) * norm;
        let sigma_pq = self.expectation(|q, p| (q - mean_q) * (p - mean_p)) * norm;
        GaussianMoments::new(mean_q, mean_p, sigma_qq, sigma_pp, sigma_pq)
    }

    /// |W| mass in the outermost ring of cells; grows when the state leaks
    /// toward the box edge.
    pub fn edge_mass(&self) -> f64 {
        let (nq, np) = (self.grid.n_q, self.grid.n_p);
        let mut acc = 0.0;
        for j in 0..np {
            acc += self.values[[0, j]].abs() + self.values[[nq - 1, j]].abs();
        }
        for i in 1..nq - 1 {
            acc += self.values[[i, 0]].abs() + self.values[[i, np - 1]].abs();
        }
        acc * self.grid.cell_area()
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// L2 distance sqrt(dq*dp*sum (W1-W2)^2); grids must match.
    pub fn l2_distance(&self, other: &Self) -> Result<f64> {
        self.check_same_grid(other)?;
        let mut acc = 0.0;
        for (a, b) in self.values.iter().zip(other.values.iter()) {
            let d = a - b;
            acc += d * d;
        }
        Ok((acc * self.grid.cell_area()).sqrt())
    }

    /// L1 distance dq*dp*sum |W1-W2|; grids must match.
    pub fn l1_distance(&self, other: &Self) -> Result<f64> {
        self.check_same_grid(other)?;
        let mut acc = 0.0;
        for (a, b) in self.values.iter().zip(other.values.iter()) {
            acc += (a - b).abs();
        }
        Ok(acc * self.grid.cell_area())
    }

    fn check_same_grid(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch("states live on different grids".into()));
        }
        Ok(())
    }

    /// Circularly shift the field by `cells` grid cells along q
    /// (W'(q) = W(q - cells*dq) on the periodic box).
    pub fn rolled_q(&self, cells: isize) -> Self {
        let nq = self.grid.n_q as isize;
        let mut out = Array2::zeros(self.values.raw_dim());
        for i in 0..self.grid.n_q {
            let src = (i as isize - cells).rem_euclid(nq) as usize;
            out.row_mut(i).assign(&self.values.row(src));
        }
        Self {
            grid: self.grid,
            values: out,
            time: self.time,
        }
    }
}

/// Normalized bivariate Gaussian on the grid from its moments.
///
/// Fails when the covariance matrix is not positive-definite, or when the
/// moments violate the uncertainty condition and therefore do not correspond
/// to any density operator.
pub fn gaussian_wigner(
    moments: &GaussianMoments,
    grid: &PhaseSpaceGrid,
    hbar: f64,
) -> Result<WignerState> {
    let det = moments.covariance_det();
    if !(moments.sigma_qq > 0.0 && moments.sigma_pp > 0.0 && det > 0.0) {
        return Err(Error::BadCovariance);
    }
    if !moments.is_admissible(hbar) {
        return Err(Error::NotAQuantumState {
            det,
            bound: 0.25 * hbar * hbar,
        });
    }
    let norm = 1.0 / (2.0 * std::f64::consts::PI * det.sqrt());
    let mut values = Array2::zeros((grid.n_q, grid.n_p));
    for i in 0..grid.n_q {
        let dq = grid.q_at(i) - moments.mean_q;
        for j in 0..grid.n_p {
            let dp = grid.p_at(j) - moments.mean_p;
            let quad = (moments.sigma_pp * dq * dq - 2.0 * moments.sigma_pq * dq * dp
                + moments.sigma_qq * dp * dp)
                / (2.0 * det);
            values[[i, j]] = norm * (-quad).exp();
        }
    }
    WignerState::new(*grid, values, 0.0)
}
