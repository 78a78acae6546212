//! Data products: trajectory/field/marginal CSVs, PGM heatmaps, and the
//! density-matrix CSV interchange format.
//!
//! All floating-point values are serialized with 17 significant digits
//! (`{:.16e}`), which round-trips f64 exactly, so identical runs produce
//! byte-identical files.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use wigsim_core::density::DensityMatrixGrid;
use wigsim_core::integrate::TrajectoryRecord;
use wigsim_core::state::WignerState;

use crate::error::CliError;

pub fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

/// Trajectory CSV with the fixed column set.
pub fn write_trajectory(path: &Path, record: &TrajectoryRecord) -> Result<(), CliError> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(
        w,
        "t,mass,mean_q,mean_p,sigma_qq,sigma_pp,sigma_pq,edge_mass,min_w,energy"
    )?;
    for r in &record.rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{}",
            fmt(r.t),
            fmt(r.mass),
            fmt(r.mean_q),
            fmt(r.mean_p),
            fmt(r.sigma_qq),
            fmt(r.sigma_pp),
            fmt(r.sigma_pq),
            fmt(r.edge_mass),
            fmt(r.min_w),
            fmt(r.energy)
        )?;
    }
    Ok(())
}

/// Field CSV: q,p,w triples, position-major.
pub fn write_field(path: &Path, state: &WignerState) -> Result<(), CliError> {
    let g = state.grid();
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "q,p,w")?;
    for i in 0..g.n_q {
        let q = g.q_at(i);
        for j in 0..g.n_p {
            writeln!(w, "{},{},{}", fmt(q), fmt(g.p_at(j)), fmt(state.values()[[i, j]]))?;
        }
    }
    Ok(())
}

/// One-axis density CSV (used for both marginals).
pub fn write_marginal(path: &Path, axis_name: &str, axis: &Array1<f64>, density: &Array1<f64>) -> Result<(), CliError> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "{axis_name},density")?;
    for (x, d) in axis.iter().zip(density.iter()) {
        writeln!(w, "{},{}", fmt(*x), fmt(*d))?;
    }
    Ok(())
}

/// 8-bit binary PGM heatmap: columns scan q (left = q_min), rows scan p
/// (top = largest p). Values map [min W, max W] linearly onto [0, 255],
/// rounding to nearest; the min/max pair goes into the sidecar text file.
pub fn write_pgm(path: &Path, sidecar: &Path, state: &WignerState) -> Result<(), CliError> {
    let g = state.grid();
    let values = state.values();
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for &v in values.iter() {
        min = min.min(v);
        max = max.max(v);
    }
    let span = max - min;
    let mut w = BufWriter::new(File::create(path)?);
    write!(w, "P5\n{} {}\n255\n", g.n_q, g.n_p)?;
    let mut row = vec![0u8; g.n_q];
    for r in 0..g.n_p {
        let j = g.n_p - 1 - r;
        for (i, px) in row.iter_mut().enumerate() {
            *px = if span > 0.0 {
                ((values[[i, j]] - min) / span * 255.0 + 0.5).floor() as u8
            } else {
                0
            };
        }
        w.write_all(&row)?;
    }
    drop(w);
    let mut s = BufWriter::new(File::create(sidecar)?);
    writeln!(s, "min_w = {}", fmt(min))?;
    writeln!(s, "max_w = {}", fmt(max))?;
    Ok(())
}

/// Density-matrix CSV: header `q,qprime,re,im`, one row per matrix element.
pub fn write_density_csv(path: &Path, rho: &DensityMatrixGrid) -> Result<(), CliError> {
    let axis = rho.q_axis();
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "q,qprime,re,im")?;
    for (i, &q) in axis.iter().enumerate() {
        for (j, &qp) in axis.iter().enumerate() {
            let z = rho.values()[[i, j]];
            writeln!(w, "{},{},{},{}", fmt(q), fmt(qp), fmt(z.re), fmt(z.im))?;
        }
    }
    Ok(())
}

/// Read the density-matrix CSV back. Rows may come in any order; every
/// (q, q') cell must appear exactly once.
pub fn read_density_csv(path: &Path) -> Result<DensityMatrixGrid, CliError> {
    let reader = BufReader::new(File::open(path)?);
    let mut rows: Vec<(f64, f64, f64, f64)> = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if idx == 0 {
            if trimmed != "q,qprime,re,im" {
                return Err(CliError::Parse {
                    line: 1,
                    message: format!("expected header `q,qprime,re,im`, got `{trimmed}`"),
                });
            }
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').collect();
        if fields.len() != 4 {
            return Err(CliError::Parse {
                line: line_no,
                message: format!("expected 4 comma-separated values, got {}", fields.len()),
            });
        }
        let parse = |t: &str| -> Result<f64, CliError> {
            t.trim().parse::<f64>().map_err(|_| CliError::Parse {
                line: line_no,
                message: format!("`{t}` is not a number"),
            })
        };
        rows.push((parse(fields[0])?, parse(fields[1])?, parse(fields[2])?, parse(fields[3])?));
    }
    if rows.is_empty() {
        return Err(CliError::Invalid("density-matrix file has no data rows".into()));
    }
    let mut axis: Vec<f64> = rows.iter().map(|r| r.0).collect();
    axis.sort_by(|a, b| a.partial_cmp(b).expect("finite axis"));
    axis.dedup();
    let n = axis.len();
    if rows.len() != n * n {
        return Err(CliError::Invalid(format!(
            "density-matrix file has {} rows but the axis has {n} points (need {})",
            rows.len(),
            n * n
        )));
    }
    let locate = |x: f64| -> Result<usize, CliError> {
        axis.binary_search_by(|a| a.partial_cmp(&x).expect("finite axis"))
            .map_err(|_| CliError::Invalid(format!("coordinate {x} is not on the file's q-axis")))
    };
    let mut values = Array2::from_elem((n, n), Complex64::new(f64::NAN, 0.0));
    for (q, qp, re, im) in rows {
        let i = locate(q)?;
        let j = locate(qp)?;
        if !values[[i, j]].re.is_nan() {
            return Err(CliError::Invalid(format!("duplicate cell ({q}, {qp})")));
        }
        values[[i, j]] = Complex64::new(re, im);
    }
    if values.iter().any(|z| z.re.is_nan()) {
        return Err(CliError::Invalid("density-matrix file is missing cells".into()));
    }
    DensityMatrixGrid::new(Array1::from_vec(axis), values).map_err(CliError::Core)
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    #[test]
    fn density_csv_roundtrip() {
        let n = 12;
        let axis = Array1::linspace(-2.0, 2.0 - 4.0 / n as f64, n);
        let psi: Vec<Complex64> = axis
            .iter()
            .map(|&q| Complex64::new((-0.5 * q * q).exp(), 0.1 * q))
            .collect();
        let rho = DensityMatrixGrid::from_wavefunction(axis, &psi).unwrap();
        let dir = tempdir().unwrap();
        let path = dir.path().join("rho.csv");
        write_density_csv(&path, &rho).unwrap();
        let back = read_density_csv(&path).unwrap();
        assert_eq!(back.q_axis().len(), n);
        for i in 0..n {
            assert_eq!(back.q_axis()[i], rho.q_axis()[i]);
            for j in 0..n {
                assert_eq!(back.values()[[i, j]], rho.values()[[i, j]]);
            }
        }
    }

    #[test]
    fn pgm_has_exact_header_and_size() {
        use wigsim_core::grid::{DerivativeScheme, PhaseSpaceGrid};
        use wigsim_core::moments::GaussianMoments;
        use wigsim_core::state::gaussian_wigner;
        let g = PhaseSpaceGrid::centered(6.0, 6.0, 16, 32, DerivativeScheme::SpectralPeriodic).unwrap();
        let w = gaussian_wigner(&GaussianMoments::new(0.0, 0.0, 0.5, 0.5, 0.0), &g, 1.0).unwrap();
        let dir = tempdir().unwrap();
        let pgm = dir.path().join("w.pgm");
        let sidecar = dir.path().join("w.minmax.txt");
        write_pgm(&pgm, &sidecar, &w).unwrap();
        let bytes = std::fs::read(&pgm).unwrap();
        let header = b"P5\n16 32\n255\n";
        assert!(bytes.starts_with(header));
        assert_eq!(bytes.len(), header.len() + 16 * 32);
        // peak of the Gaussian maps to 255
        assert_eq!(bytes.iter().skip(header.len()).max(), Some(&255));
        let sidecar_text = std::fs::read_to_string(&sidecar).unwrap();
        assert!(sidecar_text.starts_with("min_w = "));
        assert!(sidecar_text.contains("max_w = "));
    }
}
