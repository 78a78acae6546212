//! Fourier-spectral derivatives and shifts on the periodic grid.
//!
//! All routines act along rows (the contiguous axis) of a standard-layout
//! 2D array; column-wise variants transpose, act on rows, and transpose back.
//! Inverse transforms are normalized here, so round trips are exact up to
//! roundoff.

use std::sync::{Arc, Mutex, OnceLock};

use ndarray::{Array2, ArrayView2};
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

static PLANNER: OnceLock<Mutex<FftPlanner<f64>>> = OnceLock::new();

fn plan(len: usize, forward: bool) -> Arc<dyn Fft<f64>> {
    let mut planner = PLANNER
        .get_or_init(|| Mutex::new(FftPlanner::new()))
        .lock()
        .expect("fft planner poisoned");
    if forward {
        planner.plan_fft_forward(len)
    } else {
        planner.plan_fft_inverse(len)
    }
}

/// Signed wavenumbers 2*pi*m/(n*delta) in FFT bin order; the Nyquist bin
/// (index n/2 for even n) carries +pi/delta.
pub fn wavenumbers(n: usize, delta: f64) -> Vec<f64> {
    let base = 2.0 * std::f64::consts::PI / (n as f64 * delta);
    (0..n)
        .map(|m| {
            let signed = if m <= n / 2 { m as f64 } else { m as f64 - n as f64 };
            base * signed
        })
        .collect()
}

/// Multiplier (i k)^order per bin, with the Nyquist bin zeroed for odd orders
/// so real fields stay real.
fn derivative_multiplier(k: &[f64], order: usize) -> Vec<Complex64> {
    let n = k.len();
    let phase = match order % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    };
    k.iter()
        .enumerate()
        .map(|(m, &km)| {
            if order % 2 == 1 && n % 2 == 0 && m == n / 2 {
                Complex64::new(0.0, 0.0)
            } else {
                phase * km.powi(order as i32)
            }
        })
        .collect()
}

/// Spectral derivatives of every requested order along rows, sharing one
/// forward transform per row.
pub fn deriv_rows(values: ArrayView2<'_, f64>, delta: f64, orders: &[usize]) -> Vec<Array2<f64>> {
    let (rows, n) = (values.nrows(), values.ncols());
    let fwd = plan(n, true);
    let inv = plan(n, false);
    let mut scratch = vec![Complex64::default(); fwd.get_inplace_scratch_len().max(inv.get_inplace_scratch_len())];
    let k = wavenumbers(n, delta);
    let mults: Vec<Vec<Complex64>> = orders.iter().map(|&d| derivative_multiplier(&k, d)).collect();

    let mut out: Vec<Array2<f64>> = orders.iter().map(|_| Array2::zeros((rows, n))).collect();
    let mut spec = vec![Complex64::default(); n];
    let mut work = vec![Complex64::default(); n];
    let norm = 1.0 / n as f64;

    for (r, row) in values.outer_iter().enumerate() {
        for (s, &v) in spec.iter_mut().zip(row.iter()) {
            *s = Complex64::new(v, 0.0);
        }
        fwd.process_with_scratch(&mut spec, &mut scratch);
        for (o, mult) in mults.iter().enumerate() {
            for ((w, s), m) in work.iter_mut().zip(spec.iter()).zip(mult.iter()) {
                *w = s * m;
            }
            inv.process_with_scratch(&mut work, &mut scratch);
            let mut dst = out[o].row_mut(r);
            for (d, w) in dst.iter_mut().zip(work.iter()) {
                *d = w.re * norm;
            }
        }
    }
    out
}

/// Spectral derivatives along columns (transpose, derive, transpose back).
pub fn deriv_cols(values: ArrayView2<'_, f64>, delta: f64, orders: &[usize]) -> Vec<Array2<f64>> {
    let transposed = values.t().as_standard_layout().to_owned();
    deriv_rows(transposed.view(), delta, orders)
        .into_iter()
        .map(|d| d.t().as_standard_layout().to_owned())
        .collect()
}

/// Sample of the trigonometric interpolant at row coordinate + s:
/// out[r][j] ~ f_r(x_j + s). Exact for band-limited periodic data.
pub fn shift_rows(values: ArrayView2<'_, f64>, delta: f64, s: f64) -> Array2<f64> {
    let (rows, n) = (values.nrows(), values.ncols());
    let fwd = plan(n, true);
    let inv = plan(n, false);
    let mut scratch = vec![Complex64::default(); fwd.get_inplace_scratch_len().max(inv.get_inplace_scratch_len())];
    let k = wavenumbers(n, delta);
    let mult: Vec<Complex64> = k
        .iter()
        .enumerate()
        .map(|(m, &km)| {
            if n % 2 == 0 && m == n / 2 {
                // real part only: keeps the shifted field real
                Complex64::new((km * s).cos(), 0.0)
            } else {
                Complex64::from_polar(1.0, km * s)
            }
        })
        .collect();

    let mut out = Array2::zeros((rows, n));
    let mut buf = vec![Complex64::default(); n];
    let norm = 1.0 / n as f64;
    for (r, row) in values.outer_iter().enumerate() {
        for (b, &v) in buf.iter_mut().zip(row.iter()) {
            *b = Complex64::new(v, 0.0);
        }
        fwd.process_with_scratch(&mut buf, &mut scratch);
        for (b, m) in buf.iter_mut().zip(mult.iter()) {
            *b *= m;
        }
        inv.process_with_scratch(&mut buf, &mut scratch);
        let mut dst = out.row_mut(r);
        for (d, b) in dst.iter_mut().zip(buf.iter()) {
            *d = b.re * norm;
        }
    }
    out
}
