//! Self-contained dense linear algebra for the Fock-basis oracle: complex
//! matrix products and a cyclic Jacobi eigensolver for real symmetric
//! matrices. Basis sizes stay <= a few hundred, where these are plenty fast
//! and avoid an external LAPACK dependency.

use ndarray::Array2;
use num_complex::Complex64;

/// C = A * B for square complex matrices (ikj loop over contiguous rows).
pub fn matmul(a: &Array2<Complex64>, b: &Array2<Complex64>) -> Array2<Complex64> {
    let n = a.nrows();
    debug_assert_eq!(a.ncols(), b.nrows());
    debug_assert_eq!(b.nrows(), n);
    let mut c = Array2::<Complex64>::zeros((n, n));
    let a_s = a.as_slice().expect("standard layout");
    let b_s = b.as_slice().expect("standard layout");
    let c_s = c.as_slice_mut().expect("standard layout");
    for i in 0..n {
        let c_row = &mut c_s[i * n..(i + 1) * n];
        for k in 0..n {
            let aik = a_s[i * n + k];
            if aik.re == 0.0 && aik.im == 0.0 {
                continue;
            }
            let b_row = &b_s[k * n..(k + 1) * n];
            for (cv, bv) in c_row.iter_mut().zip(b_row.iter()) {
                *cv += aik * bv;
            }
        }
    }
    c
}

/// Eigen-decomposition of a real symmetric matrix by cyclic Jacobi rotations.
/// Returns (eigenvalues, eigenvectors as columns), unordered.
pub fn jacobi_eigh(matrix: &Array2<f64>) -> (Vec<f64>, Array2<f64>) {
    let n = matrix.nrows();
    assert_eq!(matrix.ncols(), n);
    let mut a = matrix.clone();
    let mut v = Array2::<f64>::eye(n);

    let off = |a: &Array2<f64>| {
        let mut s = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                s += a[[i, j]] * a[[i, j]];
            }
        }
        s.sqrt()
    };
    let scale = matrix.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1e-300);

    for _sweep in 0..100 {
        if off(&a) < 1e-13 * scale * n as f64 {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[[p, q]];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (a[[q, q]] - a[[p, p]]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[[k, p]];
                    let akq = a[[k, q]];
                    a[[k, p]] = c * akp - s * akq;
                    a[[k, q]] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[[p, k]];
                    let aqk = a[[q, k]];
                    a[[p, k]] = c * apk - s * aqk;
                    a[[q, k]] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[[k, p]];
                    let vkq = v[[k, q]];
                    v[[k, p]] = c * vkp - s * vkq;
                    v[[k, q]] = s * vkp + c * vkq;
                }
            }
        }
    }
    ((0..n).map(|i| a[[i, i]]).collect(), v)
}

/// Eigenvalues of a complex Hermitian matrix via the real symmetric embedding
/// [[Re, -Im], [Im, Re]] (each eigenvalue appears twice; duplicates removed
/// by taking every other sorted entry).
pub fn hermitian_eigenvalues(matrix: &Array2<Complex64>) -> Vec<f64> {
    let n = matrix.nrows();
    let mut embed = Array2::<f64>::zeros((2 * n, 2 * n));
    for i in 0..n {
        for j in 0..n {
            let z = matrix[[i, j]];
            embed[[i, j]] = z.re;
            embed[[i, j + n]] = -z.im;
            embed[[i + n, j]] = z.im;
            embed[[i + n, j + n]] = z.re;
        }
    }
    let (mut vals, _) = jacobi_eigh(&embed);
    vals.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    vals.into_iter().step_by(2).collect()
}
