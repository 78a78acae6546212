//! Phase-space simulator for one-dimensional open quantum systems.
//!
//! The evolving object is the Wigner quasiprobability distribution W(q, p, t)
//! on a periodic phase-space box. Its time derivative splits into a classical
//! Liouville part, a series of odd-momentum-derivative quantum corrections
//! generated by the anharmonicity of the potential, and a friction/diffusion
//! contribution from the coupling to an environment (linear coupling
//! operators, so the drift is linear and the diffusion constant).
//!
//! Module map:
//!
//! * [`params`] — physical constants, friction/diffusion coefficients and
//!   their fundamental constraints;
//! * [`grid`], [`state`], [`density`] — phase-space discretization, the
//!   Wigner field with its observables, and the transform from density
//!   matrices;
//! * [`potential`] — the potential catalog with exact derivative closures;
//! * [`evolution`] — assembly of dW/dt (spectral by default, finite
//!   differences as a diagnostic scheme);
//! * [`integrate`] — RK4 time stepping with observer hooks;
//! * [`oracle`] — independent verification: Gaussian moment ODEs, a
//!   truncated-Fock-basis propagator for the operator master equation, and
//!   thermal stationary states;
//! * [`verify`] — the named end-to-end verification scenarios.

pub mod density;
pub mod error;
pub mod evolution;
mod fourier;
pub mod grid;
pub mod integrate;
pub mod moments;
pub mod oracle;
pub mod params;
pub mod potential;
pub mod state;
mod stencil;
pub mod verify;

pub use density::{wigner_from_density_matrix, DensityMatrixGrid};
pub use error::{Error, Result};
pub use evolution::{classical_rhs, dissipator_rhs, full_rhs, quantum_rhs, RhsField};
pub use grid::{DerivativeScheme, PhaseSpaceGrid};
pub use integrate::{evolve, evolve_observed, step, RunConfig, TrajectoryRecord, TrajectoryRow};
pub use moments::GaussianMoments;
pub use params::{coefficients_from_ops, LindbladOpCoeffs, LindbladParams, ValidationReport};
pub use potential::{CorrectionDepth, Potential};
pub use state::{gaussian_wigner, WignerState};
