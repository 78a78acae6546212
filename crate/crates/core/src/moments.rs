//! First and second moments of a phase-space distribution.

/// Means and centered covariances (<q>, <p>, sigma_qq, sigma_pp, sigma_pq).
///
/// For Gaussian states these are sufficient statistics; they are also the
/// state vector of the moment-ODE oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianMoments {
    pub mean_q: f64,
    pub mean_p: f64,
    pub sigma_qq: f64,
    pub sigma_pp: f64,
    pub sigma_pq: f64,
}

impl GaussianMoments {
    pub fn new(mean_q: f64, mean_p: f64, sigma_qq: f64, sigma_pp: f64, sigma_pq: f64) -> Self {
        Self {
            mean_q,
            mean_p,
            sigma_qq,
            sigma_pp,
            sigma_pq,
        }
    }

    /// Determinant of the covariance matrix.
    pub fn covariance_det(&self) -> f64 {
        self.sigma_qq * self.sigma_pp - self.sigma_pq * self.sigma_pq
    }

    /// Margin of the uncertainty condition det >= hbar^2/4; negative values
    /// mean the moments cannot belong to any quantum state.
    pub fn uncertainty_margin(&self, hbar: f64) -> f64 {
        self.covariance_det() - 0.25 * hbar * hbar
    }

    /// Admissible as the Wigner transform of a density operator (Gaussian
    /// case): positive-definite covariance and det >= hbar^2/4, with a small
    /// tolerance so minimum-uncertainty states pass.
    pub fn is_admissible(&self, hbar: f64) -> bool {
        self.sigma_qq > 0.0
            && self.sigma_pp > 0.0
            && self.covariance_det() > 0.0
            && self.uncertainty_margin(hbar) >= -1e-12 * (0.25 * hbar * hbar).max(1.0)
    }
}
