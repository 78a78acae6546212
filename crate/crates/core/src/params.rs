//! Physical and open-system parameters.
//!
//! The environment coupling is specified either directly through the friction
//! constant lambda and the diffusion coefficients D_pp, D_qq, D_pq, or through
//! the coefficients of the two linear Lindblad operators
//! V_j = a_j p + b_j q, from which
//!
//! ```text
//! D_qq = hbar/2 sum |a_j|^2        D_pp   = hbar/2 sum |b_j|^2
//! D_pq = -hbar/2 Re sum a_j* b_j   lambda = -Im sum a_j* b_j
//! ```
//!
//! Valid coefficient sets satisfy
//!   i)  D_pp > 0,  ii) D_qq > 0,  iii) D_pp D_qq - D_pq^2 >= lambda^2 hbar^2 / 4,
//! with the all-zero set admitted separately as the closed-system mode.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Coefficients of the two linear Lindblad operators V_j = a_j p + b_j q.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LindbladOpCoeffs {
    pub a1: Complex64,
    pub b1: Complex64,
    pub a2: Complex64,
    pub b2: Complex64,
}

impl LindbladOpCoeffs {
    pub fn new(a1: Complex64, b1: Complex64, a2: Complex64, b2: Complex64) -> Self {
        Self { a1, b1, a2, b2 }
    }

    fn is_finite(&self) -> bool {
        [self.a1, self.b1, self.a2, self.b2]
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

/// Friction and diffusion coefficients derived from operator coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffusionCoeffs {
    pub d_pp: f64,
    pub d_qq: f64,
    pub d_pq: f64,
    pub lambda: f64,
}

/// Build (D_pp, D_qq, D_pq, lambda) from the operator coefficients.
pub fn coefficients_from_ops(ops: &LindbladOpCoeffs, hbar: f64) -> Result<DiffusionCoeffs> {
    if !ops.is_finite() || !hbar.is_finite() || hbar <= 0.0 {
        return Err(Error::InvalidCoefficients);
    }
    let sum_aa = ops.a1.norm_sqr() + ops.a2.norm_sqr();
    let sum_bb = ops.b1.norm_sqr() + ops.b2.norm_sqr();
    let sum_ab = ops.a1.conj() * ops.b1 + ops.a2.conj() * ops.b2;
    Ok(DiffusionCoeffs {
        d_qq: 0.5 * hbar * sum_aa,
        d_pp: 0.5 * hbar * sum_bb,
        d_pq: -0.5 * hbar * sum_ab.re,
        lambda: -sum_ab.im,
    })
}

/// All physical constants and open-system coefficients of one run.
///
/// `mu` is an independent Hamiltonian coupling (the p*q + q*p term); it is not
/// derivable from the operator coefficients. `mu == lambda` makes the
/// generator translationally invariant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LindbladParams {
    pub mass: f64,
    pub hbar: f64,
    pub lambda: f64,
    pub mu: f64,
    pub d_pp: f64,
    pub d_qq: f64,
    pub d_pq: f64,
}

impl LindbladParams {
    /// Closed system: no friction, no diffusion.
    pub fn closed(mass: f64, hbar: f64) -> Self {
        Self {
            mass,
            hbar,
            lambda: 0.0,
            mu: 0.0,
            d_pp: 0.0,
            d_qq: 0.0,
            d_pq: 0.0,
        }
    }

    /// Derive the open-system coefficients from Lindblad operator coefficients.
    pub fn from_ops(mass: f64, hbar: f64, mu: f64, ops: &LindbladOpCoeffs) -> Result<Self> {
        let c = coefficients_from_ops(ops, hbar)?;
        Ok(Self {
            mass,
            hbar,
            lambda: c.lambda,
            mu,
            d_pp: c.d_pp,
            d_qq: c.d_qq,
            d_pq: c.d_pq,
        })
    }

    /// True when every dissipation field (lambda and the three D's) is exactly
    /// zero. `mu` is a Hamiltonian coupling and does not count as dissipation.
    pub fn is_dissipationless(&self) -> bool {
        self.lambda == 0.0 && self.d_pp == 0.0 && self.d_qq == 0.0 && self.d_pq == 0.0
    }

    /// Check the fundamental constraints. Never fails; the report carries the
    /// outcome of each check and the computed margins.
    pub fn validate(&self) -> ValidationReport {
        let margin_i = self.d_pp;
        let margin_ii = self.d_qq;
        let margin_iii =
            self.d_pp * self.d_qq - self.d_pq * self.d_pq - 0.25 * self.lambda.powi(2) * self.hbar.powi(2);
        let finite = [self.mass, self.hbar, self.lambda, self.mu, self.d_pp, self.d_qq, self.d_pq]
            .iter()
            .all(|x| x.is_finite())
            && self.mass > 0.0
            && self.hbar > 0.0;
        ValidationReport {
            checks: [
                ConstraintCheck {
                    name: "i: D_pp > 0",
                    passed: margin_i > 0.0,
                    margin: margin_i,
                },
                ConstraintCheck {
                    name: "ii: D_qq > 0",
                    passed: margin_ii > 0.0,
                    margin: margin_ii,
                },
                ConstraintCheck {
                    name: "iii: D_pp*D_qq - D_pq^2 >= lambda^2*hbar^2/4",
                    // Tolerance absorbs rounding when the coefficients came out
                    // of coefficients_from_ops; i and ii are cancellation-free
                    // and are checked exactly.
                    passed: margin_iii >= -CONSTRAINT_TOL,
                    margin: margin_iii,
                },
            ],
            closed_system: self.is_dissipationless(),
            finite,
        }
    }
}

/// Absolute tolerance on constraint iii, absorbing rounding in Eq.-of-motion
/// coefficients built from operator coefficients.
pub const CONSTRAINT_TOL: f64 = 1e-12;

/// One constraint's outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstraintCheck {
    pub name: &'static str,
    pub passed: bool,
    pub margin: f64,
}

/// Pass/fail record of the three fundamental constraints.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub checks: [ConstraintCheck; 3],
    /// All dissipation fields are exactly zero (closed-system mode).
    pub closed_system: bool,
    /// Mass and hbar are positive and everything is finite.
    pub finite: bool,
}

impl ValidationReport {
    /// Valid iff every constraint passes, or the system is closed (all
    /// dissipation fields exactly zero).
    pub fn is_valid(&self) -> bool {
        self.finite && (self.closed_system || self.checks.iter().all(|c| c.passed))
    }

    /// Names of the failed constraints (empty for valid closed systems).
    pub fn failures(&self) -> Vec<&'static str> {
        if self.is_valid() {
            return Vec::new();
        }
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn coefficients_match_hand_evaluation() {
        // a1 = 1, b1 = -i
        let ops = LindbladOpCoeffs::new(c(1.0, 0.0), c(0.0, -1.0), c(0.0, 0.0), c(0.0, 0.0));
        let d = coefficients_from_ops(&ops, 1.0).unwrap();
        assert_eq!(d.d_qq, 0.5);
        assert_eq!(d.d_pp, 0.5);
        assert_eq!(d.d_pq, 0.0);
        assert_eq!(d.lambda, 1.0);
    }

    #[test]
    fn zero_ops_give_zero_coefficients() {
        let ops = LindbladOpCoeffs::new(c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0));
        let d = coefficients_from_ops(&ops, 1.0).unwrap();
        assert_eq!(d.d_qq, 0.0);
        assert_eq!(d.d_pp, 0.0);
        assert_eq!(d.d_pq, 0.0);
        assert_eq!(d.lambda, 0.0);
    }

    #[test]
    fn real_ops_fill_cross_coefficient() {
        // a1 = 1, b1 = 1: constraint iii holds with equality.
        let ops = LindbladOpCoeffs::new(c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0));
        let d = coefficients_from_ops(&ops, 1.0).unwrap();
        assert_eq!(d.d_qq, 0.5);
        assert_eq!(d.d_pp, 0.5);
        assert_eq!(d.d_pq, -0.5);
        assert_eq!(d.lambda, 0.0);
        let margin = d.d_pp * d.d_qq - d.d_pq * d.d_pq - 0.25 * d.lambda * d.lambda;
        assert!(margin >= -CONSTRAINT_TOL);
        assert!(margin.abs() < 1e-15);
    }

    #[test]
    fn non_finite_ops_rejected() {
        let ops = LindbladOpCoeffs::new(c(f64::NAN, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0));
        assert!(matches!(
            coefficients_from_ops(&ops, 1.0),
            Err(Error::InvalidCoefficients)
        ));
    }

    fn params(d_pp: f64, d_qq: f64, d_pq: f64, lambda: f64) -> LindbladParams {
        LindbladParams {
            mass: 1.0,
            hbar: 1.0,
            lambda,
            mu: 0.0,
            d_pp,
            d_qq,
            d_pq,
        }
    }

    #[test]
    fn validation_margin_examples() {
        let report = params(1.0, 1.0, 0.0, 1.0).validate();
        assert!(report.is_valid());
        assert!((report.checks[2].margin - 0.75).abs() < 1e-15);

        let report = params(1.0, 0.05, 0.0, 1.0).validate();
        assert!(!report.is_valid());
        assert!(!report.checks[2].passed);
        assert!(report.failures().iter().any(|n| n.starts_with("iii")));

        let report = params(-1.0, 1.0, 0.0, 0.0).validate();
        assert!(!report.is_valid());
        assert!(!report.checks[0].passed);
    }

    #[test]
    fn closed_system_bypasses_positivity() {
        let report = LindbladParams::closed(1.0, 1.0).validate();
        assert!(report.closed_system);
        assert!(report.is_valid());
        // mu alone does not open the system
        let mut p = LindbladParams::closed(1.0, 1.0);
        p.mu = 0.3;
        assert!(p.validate().is_valid());
    }

    #[test]
    fn validation_is_pure() {
        let p = params(0.7, 0.3, 0.1, 0.4);
        assert_eq!(p.validate(), p.validate());
    }

    proptest::proptest! {
        /// Coefficients built from any operator pair satisfy constraint iii
        /// (Cauchy-Schwarz in disguise).
        #[test]
        fn generated_coefficients_satisfy_iii(
            re in proptest::collection::vec(-1e3f64..1e3, 8),
            hbar in 1e-3f64..1e3,
        ) {
            let ops = LindbladOpCoeffs::new(
                c(re[0], re[1]), c(re[2], re[3]), c(re[4], re[5]), c(re[6], re[7]));
            let d = coefficients_from_ops(&ops, hbar).unwrap();
            let margin = d.d_pp * d.d_qq - d.d_pq * d.d_pq
                - 0.25 * d.lambda * d.lambda * hbar * hbar;
            // scale-aware slack: products of ~1e6 entries round at ~1e-10
            let scale = (d.d_pp * d.d_qq).abs().max(1.0);
            proptest::prop_assert!(margin >= -1e-12 * scale);
        }
    }
}
