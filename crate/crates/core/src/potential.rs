//! Potential catalog with exact value and derivative closures.
//!
//! Derivatives are closed-form, never numeric: the quantum-correction series
//! multiplies odd derivatives by hbar^(2n)/(4^n (2n+1)!) and any
//! differentiation noise would be amplified catastrophically.
//!
//! The inverted parabola is the harmonic oscillator with omega^2 -> -kappa^2
//! in every drift formula.

use crate::error::{Error, Result};

/// Highest index n with a nonzero hbar^(2n) term in the correction series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorrectionDepth {
    Finite(u32),
    Infinite,
}

impl CorrectionDepth {
    /// Effective series length given a user truncation.
    pub fn clamp(&self, truncation: u32) -> u32 {
        match self {
            CorrectionDepth::Finite(n) => (*n).min(truncation),
            CorrectionDepth::Infinite => truncation,
        }
    }
}

/// One-dimensional potential U(q). Where the mass enters the definition
/// (harmonic-family potentials), it is supplied at evaluation time; the same
/// mass lives in `LindbladParams`.
#[derive(Debug, Clone, PartialEq)]
pub enum Potential {
    /// U = 0
    Free,
    /// U = gamma q (uniform force field)
    Linear { gamma: f64 },
    /// U = m omega^2 q^2 / 2
    Harmonic { omega: f64 },
    /// U = -m kappa^2 q^2 / 2
    InvertedParabola { kappa: f64 },
    /// U = m omega^2 q^2 / 2 + C q^4
    Quartic { omega: f64, c: f64 },
    /// U = alpha exp(-beta q)
    Exponential { alpha: f64, beta: f64 },
    /// U = U0 cos(k q)
    Cosine { u0: f64, k: f64 },
    /// U = sum_n a_n q^n, coefficients from n = 1 (no constant term)
    Polynomial { coeffs: Vec<f64> },
}

impl Potential {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Potential::Free => "free",
            Potential::Linear { .. } => "linear",
            Potential::Harmonic { .. } => "harmonic",
            Potential::InvertedParabola { .. } => "inverted_parabola",
            Potential::Quartic { .. } => "quartic",
            Potential::Exponential { .. } => "exponential",
            Potential::Cosine { .. } => "cosine",
            Potential::Polynomial { .. } => "polynomial",
        }
    }

    /// Check parameter domains (finiteness; positivity where required).
    pub fn check(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidPotential(msg));
        match self {
            Potential::Free => Ok(()),
            Potential::Linear { gamma } => {
                if !gamma.is_finite() {
                    return bad("gamma must be finite".into());
                }
                Ok(())
            }
            Potential::Harmonic { omega } => {
                if !(omega.is_finite() && *omega > 0.0) {
                    return bad(format!("omega = {omega} must be positive"));
                }
                Ok(())
            }
            Potential::InvertedParabola { kappa } => {
                if !(kappa.is_finite() && *kappa > 0.0) {
                    return bad(format!("kappa = {kappa} must be positive"));
                }
                Ok(())
            }
            Potential::Quartic { omega, c } => {
                if !(omega.is_finite() && *omega > 0.0) || !c.is_finite() {
                    return bad("quartic needs finite C and positive omega".into());
                }
                Ok(())
            }
            Potential::Exponential { alpha, beta } => {
                if !alpha.is_finite() || !(beta.is_finite() && *beta > 0.0) {
                    return bad("exponential needs finite alpha and positive beta".into());
                }
                Ok(())
            }
            Potential::Cosine { u0, k } => {
                if !u0.is_finite() || !(k.is_finite() && *k > 0.0) {
                    return bad("cosine needs finite U0 and positive k".into());
                }
                Ok(())
            }
            Potential::Polynomial { coeffs } => {
                if coeffs.is_empty() || !coeffs.iter().all(|a| a.is_finite()) {
                    return bad("polynomial needs at least one finite coefficient".into());
                }
                Ok(())
            }
        }
    }

    /// U(q). `order = 0` of [`Potential::derivative`].
    pub fn value(&self, q: f64, mass: f64) -> f64 {
        self.derivative(q, 0, mass)
    }

    /// Exact n-th derivative of U at q (closed form).
    pub fn derivative(&self, q: f64, order: u32, mass: f64) -> f64 {
        match self {
            Potential::Free => 0.0,
            Potential::Linear { gamma } => match order {
                0 => gamma * q,
                1 => *gamma,
                _ => 0.0,
            },
            Potential::Harmonic { omega } => {
                let k2 = mass * omega * omega;
                match order {
                    0 => 0.5 * k2 * q * q,
                    1 => k2 * q,
                    2 => k2,
                    _ => 0.0,
                }
            }
            Potential::InvertedParabola { kappa } => {
                let k2 = -mass * kappa * kappa;
                match order {
                    0 => 0.5 * k2 * q * q,
                    1 => k2 * q,
                    2 => k2,
                    _ => 0.0,
                }
            }
            Potential::Quartic { omega, c } => {
                let k2 = mass * omega * omega;
                match order {
                    0 => 0.5 * k2 * q * q + c * q.powi(4),
                    1 => k2 * q + 4.0 * c * q.powi(3),
                    2 => k2 + 12.0 * c * q * q,
                    3 => 24.0 * c * q,
                    4 => 24.0 * c,
                    _ => 0.0,
                }
            }
            Potential::Exponential { alpha, beta } => {
                // d^n/dq^n [alpha e^{-beta q}] = alpha (-beta)^n e^{-beta q}
                alpha * (-beta).powi(order as i32) * (-beta * q).exp()
            }
            Potential::Cosine { u0, k } => {
                // d^n/dq^n [U0 cos(kq)] = U0 k^n cos(kq + n pi/2)
                let amp = u0 * k.powi(order as i32);
                match order % 4 {
                    0 => amp * (k * q).cos(),
                    1 => -amp * (k * q).sin(),
                    2 => -amp * (k * q).cos(),
                    _ => amp * (k * q).sin(),
                }
            }
            Potential::Polynomial { coeffs } => {
                let mut acc = 0.0;
                for (idx, &a) in coeffs.iter().enumerate() {
                    if a == 0.0 {
                        continue;
                    }
                    let deg = (idx + 1) as u32;
                    if deg < order {
                        continue;
                    }
                    // falling factorial deg!/(deg-order)!
                    let mut fac = 1.0;
                    for t in 0..order {
                        fac *= (deg - t) as f64;
                    }
                    acc += a * fac * q.powi((deg - order) as i32);
                }
                acc
            }
        }
    }

    /// Highest n with a nonzero hbar^(2n) correction term: 0 for the
    /// quadratic family (no quantum corrections), 1 for the quartic,
    /// floor((N-1)/2) for a degree-N polynomial, infinite for the
    /// exponential and cosine potentials.
    pub fn correction_depth(&self) -> CorrectionDepth {
        match self {
            Potential::Free
            | Potential::Linear { .. }
            | Potential::Harmonic { .. }
            | Potential::InvertedParabola { .. } => CorrectionDepth::Finite(0),
            Potential::Quartic { c, .. } => {
                CorrectionDepth::Finite(if *c == 0.0 { 0 } else { 1 })
            }
            Potential::Exponential { .. } | Potential::Cosine { .. } => CorrectionDepth::Infinite,
            Potential::Polynomial { coeffs } => {
                let degree = coeffs
                    .iter()
                    .enumerate()
                    .rev()
                    .find(|(_, a)| **a != 0.0)
                    .map(|(idx, _)| idx + 1)
                    .unwrap_or(0);
                CorrectionDepth::Finite(if degree <= 2 { 0 } else { ((degree - 1) / 2) as u32 })
            }
        }
    }

    /// Member of the quadratic family (at most quadratic in q)?
    pub fn is_quadratic_family(&self) -> bool {
        matches!(
            self,
            Potential::Free
                | Potential::Linear { .. }
                | Potential::Harmonic { .. }
                | Potential::InvertedParabola { .. }
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_examples() {
        assert_eq!(Potential::Harmonic { omega: 2.0 }.value(1.0, 1.0), 2.0);
        assert_eq!(Potential::Free.value(3.7, 1.0), 0.0);
        assert_eq!(Potential::Cosine { u0: 1.0, k: 1.0 }.value(0.0, 1.0), 1.0);
    }

    #[test]
    fn derivative_examples() {
        let harm = Potential::Harmonic { omega: 1.3 };
        for q in [-2.0, 0.0, 1.5] {
            assert_eq!(harm.derivative(q, 3, 1.0), 0.0);
        }
        // third derivative of C q^4 is 24 C q; the harmonic part drops out
        let quartic = Potential::Quartic { omega: 1.0, c: 1.0 };
        assert_eq!(quartic.derivative(2.0, 3, 1.0), 48.0);
    }

    #[test]
    fn cosine_odd_derivatives_follow_the_reduction() {
        // d^(2n+1) U / dq^(2n+1) = (-1)^n k^(2n) dU/dq
        let pot = Potential::Cosine { u0: 1.0, k: 2.0 };
        for n in 1..=5u32 {
            for &q in &[-1.3, 0.0, 0.4, 2.9] {
                let lhs = pot.derivative(q, 2 * n + 1, 1.0);
                let rhs = (-1.0f64).powi(n as i32)
                    * 2.0f64.powi(2 * n as i32)
                    * pot.derivative(q, 1, 1.0);
                assert!(
                    (lhs - rhs).abs() < 1e-12 * lhs.abs().max(1.0),
                    "n={n} q={q}: {lhs} vs {rhs}"
                );
            }
        }
        // explicit case from the reduction: k = 2, n = 1 gives 8 sin(2q)
        let q = 0.7;
        assert!((pot.derivative(q, 3, 1.0) - 8.0 * (2.0 * q).sin()).abs() < 1e-12);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let mass = 1.4;
        let catalog: Vec<Potential> = vec![
            Potential::Linear { gamma: 0.8 },
            Potential::Harmonic { omega: 1.1 },
            Potential::InvertedParabola { kappa: 0.9 },
            Potential::Quartic { omega: 1.0, c: 0.3 },
            Potential::Exponential { alpha: 0.7, beta: 0.6 },
            Potential::Cosine { u0: 1.2, k: 1.5 },
            Potential::Polynomial { coeffs: vec![0.5, -0.3, 0.2, 0.0, 0.05] },
        ];
        let h = 1e-3;
        for pot in &catalog {
            for &q in &[-1.1, 0.3, 0.9] {
                for order in 1..=3u32 {
                    // central differences of the (order-1)-th derivative
                    let lower = |x: f64| pot.derivative(x, order - 1, mass);
                    let fd = (lower(q + h) - lower(q - h)) / (2.0 * h);
                    let exact = pot.derivative(q, order, mass);
                    let tol = 1e-5 * exact.abs().max(1.0);
                    assert!(
                        (fd - exact).abs() < tol,
                        "{} order {order} at q={q}: fd {fd} vs exact {exact}",
                        pot.kind_name()
                    );
                }
            }
        }
    }

    #[test]
    fn correction_depths() {
        assert_eq!(
            Potential::Harmonic { omega: 1.0 }.correction_depth(),
            CorrectionDepth::Finite(0)
        );
        assert_eq!(
            Potential::Quartic { omega: 1.0, c: 0.1 }.correction_depth(),
            CorrectionDepth::Finite(1)
        );
        assert_eq!(
            Potential::Exponential { alpha: 1.0, beta: 1.0 }.correction_depth(),
            CorrectionDepth::Infinite
        );
        assert_eq!(
            Potential::Polynomial { coeffs: vec![1.0, 0.5] }.correction_depth(),
            CorrectionDepth::Finite(0)
        );
        // degree 7: floor((7-1)/2) = 3
        assert_eq!(
            Potential::Polynomial { coeffs: vec![0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 2.0] }
                .correction_depth(),
            CorrectionDepth::Finite(3)
        );
        // trailing zeros do not raise the degree
        assert_eq!(
            Potential::Polynomial { coeffs: vec![1.0, 1.0, 0.0, 0.0] }.correction_depth(),
            CorrectionDepth::Finite(0)
        );
    }

    #[test]
    fn parameter_domains_are_checked() {
        assert!(Potential::Harmonic { omega: -1.0 }.check().is_err());
        assert!(Potential::Cosine { u0: 1.0, k: 0.0 }.check().is_err());
        assert!(Potential::Polynomial { coeffs: vec![] }.check().is_err());
        assert!(Potential::Quartic { omega: 1.0, c: f64::NAN }.check().is_err());
        assert!(Potential::Quartic { omega: 1.0, c: -0.5 }.check().is_ok());
    }
}
