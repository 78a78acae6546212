use thiserror::Error;

/// Errors produced by the simulation library.
#[derive(Debug, Error)]
pub enum Error {
    /// Lindblad operator coefficients contain NaN or infinity.
    #[error("non-finite Lindblad operator coefficients")]
    InvalidCoefficients,

    /// Two grids (or a grid and a sampled axis) that must agree do not.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// A density matrix fed to the Wigner transform is not Hermitian, or the
    /// transform produced an imaginary residue above tolerance.
    #[error("non-Hermitian input: residue {residue:.3e} exceeds tolerance {tolerance:.1e}")]
    NonHermitianInput { residue: f64, tolerance: f64 },

    /// Covariance matrix of a Gaussian state is not positive-definite.
    #[error("covariance matrix is not positive-definite")]
    BadCovariance,

    /// A requested state violates the uncertainty condition
    /// sigma_qq*sigma_pp - sigma_pq^2 >= hbar^2/4, or is otherwise not the
    /// Wigner transform of any density operator.
    #[error(
        "not a quantum state: sigma_qq*sigma_pp - sigma_pq^2 = {det:.6e} < hbar^2/4 = {bound:.6e}"
    )]
    NotAQuantumState { det: f64, bound: f64 },

    /// The quantum-correction series needs a momentum derivative of higher
    /// order than the grid/scheme can deliver reliably.
    #[error(
        "truncation too deep: derivative order {order} is unreliable here (scheme supports up to {max_order})"
    )]
    TruncationTooDeep { order: usize, max_order: usize },

    /// An oracle was asked about a potential outside its family.
    #[error("unsupported potential '{0}' for this operation")]
    UnsupportedPotential(&'static str),

    /// Occupation leaked into the top of the truncated Fock basis.
    #[error("Fock basis too small: top-level occupation {occupation:.3e} exceeds {limit:.1e}")]
    BasisTooSmall { occupation: f64, limit: f64 },

    /// exp(-U/kT) has no finite norm on the line, so no thermal state exists.
    #[error("stationary state is not normalizable for this potential")]
    NotNormalizable,

    /// NaN/Inf appeared during time stepping.
    #[error("numerical blowup at step {step} (t = {time:.6e}): {diagnostic}")]
    NumericalBlowup {
        step: usize,
        time: f64,
        diagnostic: String,
    },

    /// Potential parameters violate their domain (e.g. omega <= 0).
    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    /// Run configuration violates its invariants (dt <= 0, stride = 0, ...).
    #[error("invalid run configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
