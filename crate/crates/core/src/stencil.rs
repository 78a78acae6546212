//! Finite-difference derivatives for the non-periodic diagnostic scheme.
//!
//! Stencil weights come from Fornberg's recurrence, which yields exact
//! interpolatory weights for any derivative order on any node set. Interior
//! points use centered stencils of 4th-order accuracy; points near the box
//! edge use one-sided stencils of the same width.

use ndarray::{Array2, ArrayView2};

/// Fornberg weights: coefficients w such that f^(m)(x0) ~ sum w_i f(x_i).
pub fn fd_weights(m: usize, x0: f64, xs: &[f64]) -> Vec<f64> {
    let n = xs.len();
    assert!(n > m, "need more nodes than the derivative order");
    let mut c = vec![vec![0.0; m + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = xs[0] - x0;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.iter().map(|row| row[m]).collect()
}

/// Stencil half-width giving at least 4th-order accuracy for derivative m.
fn half_width(m: usize) -> usize {
    match m {
        1 | 2 => 2,
        3 => 3,
        _ => (m + 3) / 2,
    }
}

/// Finite-difference derivative of order `m` along rows. Non-periodic: the
/// first and last few points fall back to one-sided stencils.
pub fn deriv_rows_fd(values: ArrayView2<'_, f64>, delta: f64, m: usize) -> Array2<f64> {
    let (rows, n) = (values.nrows(), values.ncols());
    let w = half_width(m);
    let width = 2 * w + 1;
    assert!(n >= width, "axis too short for the stencil");

    // centered weights once; per-offset boundary weights for the edge points
    let nodes: Vec<f64> = (0..width).map(|i| (i as f64 - w as f64) * delta).collect();
    let centered = fd_weights(m, 0.0, &nodes);
    let edge: Vec<Vec<f64>> = (0..w)
        .map(|i| {
            // stencil anchored at the left edge, evaluated at node i
            let xs: Vec<f64> = (0..width).map(|t| t as f64 * delta).collect();
            fd_weights(m, i as f64 * delta, &xs)
        })
        .collect();

    let mut out = Array2::zeros((rows, n));
    for (r, row) in values.outer_iter().enumerate() {
        let row = row.as_slice().expect("standard layout");
        let mut dst = out.row_mut(r);
        let dst = dst.as_slice_mut().expect("standard layout");
        for i in w..n - w {
            let mut acc = 0.0;
            for (t, &cw) in centered.iter().enumerate() {
                acc += cw * row[i - w + t];
            }
            dst[i] = acc;
        }
        for i in 0..w {
            let mut lo = 0.0;
            let mut hi = 0.0;
            for (t, &ew) in edge[i].iter().enumerate() {
                lo += ew * row[t];
                // mirrored stencil for the right edge (sign flips for odd m)
                hi += ew * row[n - 1 - t];
            }
            dst[i] = lo;
            dst[n - 1 - i] = if m % 2 == 0 { hi } else { -hi };
        }
    }
    out
}

/// Finite-difference derivative along columns.
pub fn deriv_cols_fd(values: ArrayView2<'_, f64>, delta: f64, m: usize) -> Array2<f64> {
    let transposed = values.t().as_standard_layout().to_owned();
    deriv_rows_fd(transposed.view(), delta, m)
        .t()
        .as_standard_layout()
        .to_owned()
}
