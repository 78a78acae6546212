//! Right-hand side of the Wigner evolution equation.
//!
//! dW/dt splits into three parts:
//!
//! * classical:   -(p/m) dW/dq + U'(q) dW/dp
//! * quantum:     sum_{n>=1} (-1)^n hbar^(2n) / (4^n (2n+1)!)
//!                    U^(2n+1)(q) d^(2n+1)W/dp^(2n+1)
//! * dissipative: (lambda-mu) d(qW)/dq + (lambda+mu) d(pW)/dp
//!                    + D_qq d^2W/dq^2 + D_pp d^2W/dp^2 + 2 D_pq d^2W/dpdq
//!
//! For the cosine potential the classical momentum-force term and the whole
//! correction series collapse into the exact nonlocal form
//! U'(q) * [W(q, p + hbar k/2) - W(q, p - hbar k/2)] / (hbar k),
//! evaluated by Fourier shift (or an integer roll when hbar k/2 lands on the
//! momentum step).
//!
//! The drift products d(qW)/dq, d(pW)/dp are differentiated as products: a
//! spectral derivative always sums to zero over the box, so the drift terms
//! conserve mass to roundoff. (Expanding them as W + q dW/dq instead leaves a
//! ~1e-10 residual in the mass rate that accumulates visibly over long
//! thermalization runs; the box-edge ringing of the product form is bounded
//! by the negligible W values at the edge and stays far below every working
//! tolerance.)

use ndarray::{Array2, ArrayView2};

use crate::error::{Error, Result};
use crate::fourier;
use crate::grid::{DerivativeScheme, PhaseSpaceGrid};
use crate::params::LindbladParams;
use crate::potential::Potential;
use crate::state::WignerState;
use crate::stencil;

/// dW/dt over the grid, with the three-part breakdown retained.
///
/// `classical + quantum + dissipative` is the full right-hand side. For the
/// cosine potential under full assembly the momentum-force term lives in the
/// `quantum` component (merged nonlocal form) and `classical` holds only the
/// free-streaming term.
#[derive(Debug, Clone)]
pub struct RhsField {
    grid: PhaseSpaceGrid,
    pub classical: Array2<f64>,
    pub quantum: Array2<f64>,
    pub dissipative: Array2<f64>,
}

impl RhsField {
    pub fn grid(&self) -> &PhaseSpaceGrid {
        &self.grid
    }

    /// Sum of the three components.
    pub fn total(&self) -> Array2<f64> {
        let mut out = self.classical.clone();
        out += &self.quantum;
        out += &self.dissipative;
        out
    }

    /// dq*dp*sum of each component; all three integrate to ~0 (the evolution
    /// is in divergence form), which makes these useful solver diagnostics.
    pub fn component_masses(&self) -> [f64; 3] {
        let area = self.grid.cell_area();
        [
            self.classical.sum() * area,
            self.quantum.sum() * area,
            self.dissipative.sum() * area,
        ]
    }

    pub fn total_mass(&self) -> f64 {
        self.component_masses().iter().sum()
    }

    /// Largest |dW/dt| entry of the summed field.
    pub fn total_sup(&self) -> f64 {
        let mut sup = 0.0f64;
        for ((c, q), d) in self
            .classical
            .iter()
            .zip(self.quantum.iter())
            .zip(self.dissipative.iter())
        {
            sup = sup.max((c + q + d).abs());
        }
        sup
    }
}

fn derive_p(
    values: ArrayView2<'_, f64>,
    dp: f64,
    orders: &[usize],
    scheme: DerivativeScheme,
) -> Vec<Array2<f64>> {
    match scheme {
        DerivativeScheme::SpectralPeriodic => fourier::deriv_rows(values, dp, orders),
        DerivativeScheme::CentralFd4 => orders
            .iter()
            .map(|&m| stencil::deriv_rows_fd(values, dp, m))
            .collect(),
    }
}

fn derive_q(
    values: ArrayView2<'_, f64>,
    dq: f64,
    orders: &[usize],
    scheme: DerivativeScheme,
) -> Vec<Array2<f64>> {
    match scheme {
        DerivativeScheme::SpectralPeriodic => fourier::deriv_cols(values, dq, orders),
        DerivativeScheme::CentralFd4 => orders
            .iter()
            .map(|&m| stencil::deriv_cols_fd(values, dq, m))
            .collect(),
    }
}

/// W(q, p + s) on the periodic momentum axis: integer roll when s is a
/// multiple of dp, Fourier shift otherwise.
fn shift_p(values: ArrayView2<'_, f64>, dp: f64, s: f64) -> Array2<f64> {
    let ratio = s / dp;
    let nearest = ratio.round();
    if (ratio - nearest).abs() < 1e-12 * ratio.abs().max(1.0) {
        let n = values.ncols() as isize;
        let r = (nearest as isize).rem_euclid(n) as usize;
        let mut out = Array2::zeros(values.raw_dim());
        for (row_in, mut row_out) in values.outer_iter().zip(out.outer_iter_mut()) {
            for j in 0..n as usize {
                row_out[j] = row_in[(j + r) % n as usize];
            }
        }
        out
    } else {
        fourier::shift_rows(values, dp, s)
    }
}

struct Assembly<'a> {
    pot: &'a Potential,
    mass: f64,
    hbar: f64,
    truncation: u32,
    lind: Option<&'a LindbladParams>,
    classical: bool,
    quantum: bool,
    /// The classical component carries U' dW/dp. Disabled only for the
    /// cosine potential under full assembly, where the force merges into the
    /// nonlocal quantum term.
    force_in_classical: bool,
}

fn assemble(w: &WignerState, spec: Assembly<'_>) -> Result<RhsField> {
    let grid = *w.grid();
    let (n_q, n_p) = (grid.n_q, grid.n_p);
    let (dq, dp) = (grid.dq(), grid.dp());
    let scheme = grid.scheme;
    let values = w.values().view();

    let (lam_minus_mu, lam_plus_mu, d_pp, d_qq, d_pq) = match spec.lind {
        Some(p) => (p.lambda - p.mu, p.lambda + p.mu, p.d_pp, p.d_qq, p.d_pq),
        None => (0.0, 0.0, 0.0, 0.0, 0.0),
    };

    let is_cosine = matches!(spec.pot, Potential::Cosine { .. });
    let n_eff = spec.pot.correction_depth().clamp(spec.truncation);
    let quantum_series = spec.quantum && !is_cosine && n_eff >= 1;
    let quantum_cosine = spec.quantum && is_cosine;
    let has_force = !matches!(spec.pot, Potential::Free);
    let classical_force = spec.classical && spec.force_in_classical && has_force;

    if quantum_series {
        let max_order = 2 * n_eff as usize + 1;
        let supported = scheme.max_derivative_order(n_p);
        if max_order > supported {
            return Err(Error::TruncationTooDeep {
                order: max_order,
                max_order: supported,
            });
        }
    }

    // shared derivative fields
    let need_dp1 = classical_force || d_pq != 0.0;
    let need_dp2 = d_pp != 0.0;
    let need_dq1 = spec.classical;
    let need_dq2 = d_qq != 0.0;

    let mut p_orders: Vec<usize> = Vec::new();
    if need_dp1 {
        p_orders.push(1);
    }
    if need_dp2 {
        p_orders.push(2);
    }
    if quantum_series {
        for n in 1..=n_eff as usize {
            p_orders.push(2 * n + 1);
        }
    }
    let p_derivs = if p_orders.is_empty() {
        Vec::new()
    } else {
        derive_p(values, dp, &p_orders, scheme)
    };
    let p_deriv = |order: usize| -> &Array2<f64> {
        let idx = p_orders.iter().position(|&o| o == order).expect("order computed");
        &p_derivs[idx]
    };

    let mut q_orders: Vec<usize> = Vec::new();
    if need_dq1 {
        q_orders.push(1);
    }
    if need_dq2 {
        q_orders.push(2);
    }
    let q_derivs = if q_orders.is_empty() {
        Vec::new()
    } else {
        derive_q(values, dq, &q_orders, scheme)
    };
    let q_deriv = |order: usize| -> &Array2<f64> {
        let idx = q_orders.iter().position(|&o| o == order).expect("order computed");
        &q_derivs[idx]
    };

    let mixed = if d_pq != 0.0 {
        Some(derive_q(p_deriv(1).view(), dq, &[1], scheme).remove(0))
    } else {
        None
    };

    let q_axis: Vec<f64> = (0..n_q).map(|i| grid.q_at(i)).collect();
    let p_axis: Vec<f64> = (0..n_p).map(|j| grid.p_at(j)).collect();
    let u_prime: Vec<f64> = q_axis
        .iter()
        .map(|&q| spec.pot.derivative(q, 1, spec.mass))
        .collect();

    let mut classical = Array2::zeros((n_q, n_p));
    let mut quantum = Array2::zeros((n_q, n_p));
    let mut dissipative = Array2::zeros((n_q, n_p));

    if spec.classical {
        let dq1 = q_deriv(1);
        let inv_m = 1.0 / spec.mass;
        for i in 0..n_q {
            let row_dq = dq1.row(i);
            let mut row_out = classical.row_mut(i);
            for j in 0..n_p {
                row_out[j] = -p_axis[j] * inv_m * row_dq[j];
            }
            if classical_force {
                let f = u_prime[i];
                let row_dp = p_deriv(1).row(i);
                for j in 0..n_p {
                    row_out[j] += f * row_dp[j];
                }
            }
        }
    }

    if quantum_series {
        // running coefficient c_n = (-1)^n hbar^(2n) / (4^n (2n+1)!)
        let mut coef = 1.0;
        for n in 1..=n_eff {
            coef *= -spec.hbar * spec.hbar / (4.0 * (2 * n) as f64 * (2 * n + 1) as f64);
            let order = 2 * n as usize + 1;
            let du: Vec<f64> = q_axis
                .iter()
                .map(|&q| spec.pot.derivative(q, order as u32, spec.mass))
                .collect();
            if du.iter().all(|&x| x == 0.0) {
                continue;
            }
            let d_field = p_deriv(order);
            for i in 0..n_q {
                let c = coef * du[i];
                if c == 0.0 {
                    continue;
                }
                let row_d = d_field.row(i);
                let mut row_q = quantum.row_mut(i);
                for j in 0..n_p {
                    row_q[j] += c * row_d[j];
                }
            }
        }
    }

    if quantum_cosine {
        if let Potential::Cosine { k, .. } = spec.pot {
            let s = 0.5 * spec.hbar * k;
            let plus = shift_p(values, dp, s);
            let minus = shift_p(values, dp, -s);
            let inv = 1.0 / (spec.hbar * k);
            for i in 0..n_q {
                let f = u_prime[i] * inv;
                let rp = plus.row(i);
                let rm = minus.row(i);
                let mut row_q = quantum.row_mut(i);
                for j in 0..n_p {
                    row_q[j] = f * (rp[j] - rm[j]);
                }
            }
        }
    }

    if spec.lind.is_some() {
        if lam_minus_mu != 0.0 {
            // d(qW)/dq of the product: exactly mass-free under either scheme
            let mut qw = Array2::zeros((n_q, n_p));
            for i in 0..n_q {
                let q = q_axis[i];
                let row_w = values.row(i);
                let mut row_out = qw.row_mut(i);
                for j in 0..n_p {
                    row_out[j] = q * row_w[j];
                }
            }
            let d_qw = derive_q(qw.view(), dq, &[1], scheme).remove(0);
            dissipative.scaled_add(lam_minus_mu, &d_qw);
        }
        if lam_plus_mu != 0.0 {
            let mut pw = Array2::zeros((n_q, n_p));
            for i in 0..n_q {
                let row_w = values.row(i);
                let mut row_out = pw.row_mut(i);
                for j in 0..n_p {
                    row_out[j] = p_axis[j] * row_w[j];
                }
            }
            let d_pw = derive_p(pw.view(), dp, &[1], scheme).remove(0);
            dissipative.scaled_add(lam_plus_mu, &d_pw);
        }
        if d_qq != 0.0 {
            dissipative.scaled_add(d_qq, q_deriv(2));
        }
        if d_pp != 0.0 {
            dissipative.scaled_add(d_pp, p_deriv(2));
        }
        if let Some(m) = &mixed {
            dissipative.scaled_add(2.0 * d_pq, m);
        }
    }

    Ok(RhsField {
        grid,
        classical,
        quantum,
        dissipative,
    })
}

/// Classical streaming and force terms: -(p/m) dW/dq + U'(q) dW/dp.
pub fn classical_rhs(w: &WignerState, pot: &Potential, mass: f64) -> RhsField {
    assemble(
        w,
        Assembly {
            pot,
            mass,
            hbar: 1.0,
            truncation: 0,
            lind: None,
            classical: true,
            quantum: false,
            force_in_classical: true,
        },
    )
    .expect("classical assembly cannot fail")
}

/// Quantum-correction field.
///
/// Polynomial-family potentials use their exact finite series (the truncation
/// caps it, so `truncation = 0` switches corrections off); the exponential
/// potential truncates its infinite series at `truncation`. For the cosine
/// potential this returns the exact nonlocal form U' * dW/dp|_(hbar k), which
/// subsumes the classical force term and ignores `truncation`.
pub fn quantum_rhs(
    w: &WignerState,
    pot: &Potential,
    hbar: f64,
    truncation: u32,
) -> Result<RhsField> {
    assemble(
        w,
        Assembly {
            pot,
            mass: 1.0,
            hbar,
            truncation,
            lind: None,
            classical: false,
            quantum: true,
            force_in_classical: false,
        },
    )
}

/// Friction and diffusion contribution of the environment.
pub fn dissipator_rhs(w: &WignerState, params: &LindbladParams) -> RhsField {
    assemble(
        w,
        Assembly {
            pot: &Potential::Free,
            mass: params.mass,
            hbar: params.hbar,
            truncation: 0,
            lind: Some(params),
            classical: false,
            quantum: false,
            force_in_classical: false,
        },
    )
    .expect("dissipator assembly cannot fail")
}

/// Full right-hand side with the three-part breakdown, sharing derivative
/// evaluations across components.
pub fn full_rhs(
    w: &WignerState,
    pot: &Potential,
    params: &LindbladParams,
    truncation: u32,
) -> Result<RhsField> {
    let is_cosine = matches!(pot, Potential::Cosine { .. });
    assemble(
        w,
        Assembly {
            pot,
            mass: params.mass,
            hbar: params.hbar,
            truncation,
            lind: Some(params),
            classical: true,
            quantum: true,
            force_in_classical: !is_cosine,
        },
    )
}

/// How much the quantum field changes when the exponential-series truncation
/// grows from N to N+1: ||Q_(N+1) - Q_N||_inf / ||Q_N||_inf. A small report
/// value means N is converged.
pub fn truncation_convergence(
    w: &WignerState,
    pot: &Potential,
    hbar: f64,
    truncation: u32,
) -> Result<f64> {
    let base = quantum_rhs(w, pot, hbar, truncation)?;
    let next = quantum_rhs(w, pot, hbar, truncation + 1)?;
    let mut diff = 0.0f64;
    let mut scale = 0.0f64;
    for (a, b) in base.quantum.iter().zip(next.quantum.iter()) {
        diff = diff.max((a - b).abs());
        scale = scale.max(a.abs());
    }
    Ok(diff / scale.max(f64::MIN_POSITIVE))
}
