//! Position-representation density matrices and the Wigner transform.
//!
//! The transform is the partial Fourier transform of the off-diagonal
//! elements,
//!
//! ```text
//! W(p, q) = (1/pi hbar) Int dy <q-y|rho|q+y> exp(2 i p y / hbar),
//! ```
//!
//! discretized with y on multiples of the position step. Anti-diagonal
//! elements outside the sampled box are taken as zero, which is exact for
//! states compactly supported well inside the box.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::PhaseSpaceGrid;
use crate::state::WignerState;

/// Maximum |rho - rho^dagger| entry allowed, relative to the largest entry.
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Relative imaginary residue allowed in the transform output.
pub const IMAG_RESIDUE_TOL: f64 = 1e-10;

/// Complex density matrix rho(q, q') sampled on a uniform q-axis.
///
/// Hermiticity is enforced at construction; the trace is monitored by
/// callers (the transform carries it into the Wigner mass unchanged, and
/// nothing renormalizes).
#[derive(Debug, Clone)]
pub struct DensityMatrixGrid {
    q_axis: Array1<f64>,
    values: Array2<Complex64>,
}

impl DensityMatrixGrid {
    /// Wrap samples, checking squareness, axis uniformity and hermiticity.
    pub fn new(q_axis: Array1<f64>, values: Array2<Complex64>) -> Result<Self> {
        let n = q_axis.len();
        if n < 2 || values.shape() != [n, n] {
            return Err(Error::GridMismatch(format!(
                "density matrix shape {:?} does not match axis length {n}",
                values.shape()
            )));
        }
        let dq = q_axis[1] - q_axis[0];
        if dq <= 0.0 || !dq.is_finite() {
            return Err(Error::GridMismatch("q-axis must be increasing".into()));
        }
        for i in 1..n {
            if ((q_axis[i] - q_axis[i - 1]) - dq).abs() > 1e-9 * dq.abs().max(1.0) {
                return Err(Error::GridMismatch("q-axis is not uniform".into()));
            }
        }
        let scale = values.iter().fold(0.0f64, |m, z| m.max(z.norm()));
        let mut residue = 0.0f64;
        for i in 0..n {
            for j in i..n {
                residue = residue.max((values[[i, j]] - values[[j, i]].conj()).norm());
            }
        }
        if residue > HERMITICITY_TOL * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::NonHermitianInput {
                residue: residue / scale.max(f64::MIN_POSITIVE),
                tolerance: HERMITICITY_TOL,
            });
        }
        Ok(Self { q_axis, values })
    }

    /// Pure state rho(q, q') = psi(q) psi*(q').
    pub fn from_wavefunction(q_axis: Array1<f64>, psi: &[Complex64]) -> Result<Self> {
        let n = q_axis.len();
        if psi.len() != n {
            return Err(Error::GridMismatch(
                "wavefunction length does not match axis".into(),
            ));
        }
        let mut values = Array2::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                values[[i, j]] = psi[i] * psi[j].conj();
            }
        }
        Self::new(q_axis, values)
    }

    pub fn q_axis(&self) -> &Array1<f64> {
        &self.q_axis
    }

    pub fn values(&self) -> &Array2<Complex64> {
        &self.values
    }

    pub fn dq(&self) -> f64 {
        self.q_axis[1] - self.q_axis[0]
    }

    /// Discrete trace dq * sum rho(q, q).
    pub fn trace(&self) -> Complex64 {
        self.values.diag().sum() * Complex64::new(self.dq(), 0.0)
    }
}

/// Wigner transform of a density matrix onto a phase-space grid.
///
/// Preconditions: the matrix's q-axis must coincide with the grid's q-axis,
/// and the grid's momentum extent must stay below the Nyquist bound
/// pi*hbar/(2 dq) set by the position resolution.
///
/// Returns the (real) Wigner state and the relative imaginary residue that
/// was discarded; a residue above tolerance fails with `NonHermitianInput`.
pub fn wigner_from_density_matrix(
    rho: &DensityMatrixGrid,
    grid: &PhaseSpaceGrid,
    hbar: f64,
) -> Result<(WignerState, f64)> {
    let n = grid.n_q;
    if rho.q_axis.len() != n {
        return Err(Error::GridMismatch(format!(
            "density matrix axis has {} points, grid has {n}",
            rho.q_axis.len()
        )));
    }
    let dq = grid.dq();
    for i in 0..n {
        if (rho.q_axis[i] - grid.q_at(i)).abs() > 1e-9 * dq {
            return Err(Error::GridMismatch(
                "density matrix q-axis differs from the grid q-axis".into(),
            ));
        }
    }
    let p_nyquist = std::f64::consts::PI * hbar / (2.0 * dq);
    if grid.p_abs_max() > p_nyquist * (1.0 + 1e-12) {
        return Err(Error::GridMismatch(format!(
            "momentum extent {:.4} exceeds the hbar/dq resolution bound {:.4}",
            grid.p_abs_max(),
            p_nyquist
        )));
    }

    // phase table E[m][j] = exp(2 i p_j y_m / hbar), y_m = m*dq, m in -(n-1)..=(n-1)
    let n_p = grid.n_p;
    let mut phases = Array2::<Complex64>::zeros((2 * n - 1, n_p));
    for (row, m) in (-(n as isize - 1)..=(n as isize - 1)).enumerate() {
        let y = m as f64 * dq;
        for j in 0..n_p {
            phases[[row, j]] = Complex64::from_polar(1.0, 2.0 * grid.p_at(j) * y / hbar);
        }
    }

    let scale = dq / (std::f64::consts::PI * hbar);
    let mut values = Array2::zeros((n, n_p));
    let mut max_im = 0.0f64;
    let mut max_re = 0.0f64;
    let mut acc = vec![Complex64::default(); n_p];
    for i in 0..n {
        acc.iter_mut().for_each(|a| *a = Complex64::default());
        let reach = i.min(n - 1 - i) as isize;
        for m in -reach..=reach {
            let elem = rho.values[[(i as isize - m) as usize, (i as isize + m) as usize]];
            let row = phases.row((m + n as isize - 1) as usize);
            let row = row.as_slice().expect("standard layout");
            for (a, e) in acc.iter_mut().zip(row.iter()) {
                *a += elem * e;
            }
        }
        for (j, a) in acc.iter().enumerate() {
            let w = a * scale;
            values[[i, j]] = w.re;
            max_im = max_im.max(w.im.abs());
            max_re = max_re.max(w.re.abs());
        }
    }

    let residue = max_im / max_re.max(f64::MIN_POSITIVE);
    if residue > IMAG_RESIDUE_TOL {
        return Err(Error::NonHermitianInput {
            residue,
            tolerance: IMAG_RESIDUE_TOL,
        });
    }
    Ok((WignerState::new(*grid, values, 0.0)?, residue))
}
