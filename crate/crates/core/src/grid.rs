//! Uniform rectangular discretization of (q, p) phase space.
//!
//! The box is treated as periodic: grid points are q_i = q_min + i*dq with
//! dq = (q_max - q_min)/n_q, so q_max itself is excluded (it aliases q_min).
//! Same along p.

use ndarray::Array1;

use crate::error::{Error, Result};

/// How derivative fields are evaluated on the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeScheme {
    /// Fourier-spectral derivatives on the periodic box (default).
    SpectralPeriodic,
    /// 4th-order central finite differences with one-sided stencils at the
    /// box edges; diagnostic scheme for checking periodicity artifacts.
    CentralFd4,
}

impl DerivativeScheme {
    /// Highest derivative order this scheme delivers reliably for a given
    /// axis length. The quantum-correction series needs orders 2N+1.
    pub fn max_derivative_order(&self, axis_len: usize) -> usize {
        match self {
            // Spectral derivatives degrade once the order approaches the
            // resolvable bandwidth; n/4 keeps roundoff amplification in check.
            DerivativeScheme::SpectralPeriodic => (axis_len / 4).max(1),
            // Only the 4th-order stencils for orders 1..=3 are trustworthy.
            DerivativeScheme::CentralFd4 => 3,
        }
    }
}

/// Uniform periodic phase-space grid plus its derivative scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSpaceGrid {
    pub q_min: f64,
    pub q_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub n_q: usize,
    pub n_p: usize,
    pub scheme: DerivativeScheme,
}

impl PhaseSpaceGrid {
    pub fn new(
        q_min: f64,
        q_max: f64,
        p_min: f64,
        p_max: f64,
        n_q: usize,
        n_p: usize,
        scheme: DerivativeScheme,
    ) -> Result<Self> {
        if ![q_min, q_max, p_min, p_max].iter().all(|x| x.is_finite()) {
            return Err(Error::GridMismatch("non-finite grid extents".into()));
        }
        if q_max <= q_min || p_max <= p_min {
            return Err(Error::GridMismatch(
                "grid extents must satisfy q_max > q_min and p_max > p_min".into(),
            ));
        }
        for (axis, n) in [("n_q", n_q), ("n_p", n_p)] {
            if n < 8 || n % 2 != 0 {
                return Err(Error::GridMismatch(format!(
                    "{axis} = {n}: grid counts must be even and at least 8"
                )));
            }
        }
        Ok(Self {
            q_min,
            q_max,
            p_min,
            p_max,
            n_q,
            n_p,
            scheme,
        })
    }

    /// Square box [-q_extent, q_extent) x [-p_extent, p_extent).
    pub fn centered(
        q_extent: f64,
        p_extent: f64,
        n_q: usize,
        n_p: usize,
        scheme: DerivativeScheme,
    ) -> Result<Self> {
        Self::new(-q_extent, q_extent, -p_extent, p_extent, n_q, n_p, scheme)
    }

    pub fn dq(&self) -> f64 {
        (self.q_max - self.q_min) / self.n_q as f64
    }

    pub fn dp(&self) -> f64 {
        (self.p_max - self.p_min) / self.n_p as f64
    }

    /// Phase-space cell area dq*dp.
    pub fn cell_area(&self) -> f64 {
        self.dq() * self.dp()
    }

    pub fn q_at(&self, i: usize) -> f64 {
        self.q_min + i as f64 * self.dq()
    }

    pub fn p_at(&self, j: usize) -> f64 {
        self.p_min + j as f64 * self.dp()
    }

    pub fn q_axis(&self) -> Array1<f64> {
        Array1::from_iter((0..self.n_q).map(|i| self.q_at(i)))
    }

    pub fn p_axis(&self) -> Array1<f64> {
        Array1::from_iter((0..self.n_p).map(|j| self.p_at(j)))
    }

    /// Largest |p| on the grid.
    pub fn p_abs_max(&self) -> f64 {
        self.p_min.abs().max(self.p_at(self.n_p - 1).abs())
    }
}
