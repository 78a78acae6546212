//! Execute a parsed run specification and write its data products.

use std::fs;
use std::path::PathBuf;

use wigsim_core::density::wigner_from_density_matrix;
use wigsim_core::evolution::truncation_convergence;
use wigsim_core::grid::PhaseSpaceGrid;
use wigsim_core::integrate::{evolve_with_snapshots, RunConfig};
use wigsim_core::potential::Potential;
use wigsim_core::state::{gaussian_wigner, WignerState};

use crate::error::CliError;
use crate::output;
use crate::spec::{InitialState, RunSpec};

/// Exit summary of one simulation run.
#[derive(Debug)]
pub struct RunReport {
    pub final_time: f64,
    pub initial_mass: f64,
    pub final_mass: f64,
    pub max_mass_deviation: f64,
    pub min_w: f64,
    pub snapshots_written: usize,
    pub transform_residue: Option<f64>,
    /// Relative change of the correction field from N to N+1 (exponential
    /// potential only).
    pub truncation_report: Option<f64>,
    pub files: Vec<PathBuf>,
}

fn build_initial(spec: &RunSpec) -> Result<(WignerState, Option<f64>), CliError> {
    match &spec.initial {
        InitialState::Gaussian(m) => {
            let w = gaussian_wigner(m, &spec.grid, spec.params.hbar)?;
            Ok((w, None))
        }
        InitialState::DensityMatrixFile(path) => {
            let rho = output::read_density_csv(path)?;
            let (w, residue) = wigner_from_density_matrix(&rho, &spec.grid, spec.params.hbar)?;
            Ok((w, Some(residue)))
        }
    }
}

/// Run the simulation described by `spec`, writing the trajectory CSV plus
/// per-snapshot products into `spec.output.dir`. Deterministic: identical
/// specs yield byte-identical files.
pub fn run(spec: &RunSpec) -> Result<RunReport, CliError> {
    let (w0, transform_residue) = build_initial(spec)?;
    let initial_mass = w0.mass();

    let truncation_report = match &spec.potential {
        Potential::Exponential { .. } => Some(truncation_convergence(
            &w0,
            &spec.potential,
            spec.params.hbar,
            spec.run.truncation,
        )?),
        _ => None,
    };

    let cfg = RunConfig::new(spec.run.dt, spec.run.t_end, spec.run.stride, spec.run.truncation)
        .and_then(|c| c.with_safety(spec.run.safety))
        .map_err(CliError::Core)?;

    fs::create_dir_all(&spec.output.dir)?;
    let mut files = Vec::new();
    let mut snapshot_idx = 0usize;
    let mut snapshot_err: Option<CliError> = None;
    let out = &spec.output;
    let (w1, record) = evolve_with_snapshots(
        &w0,
        &spec.potential,
        &spec.params,
        &cfg,
        &out.snapshots,
        |w| {
            if snapshot_err.is_some() {
                return;
            }
            let stem = format!("snapshot_{snapshot_idx:03}");
            snapshot_idx += 1;
            let mut write = || -> Result<(), CliError> {
                if out.csv {
                    let field = out.dir.join(format!("{stem}.csv"));
                    output::write_field(&field, w)?;
                    files.push(field);
                    let (pos, mom) = w.marginals();
                    let mq = out.dir.join(format!("{stem}_marginal_q.csv"));
                    output::write_marginal(&mq, "q", &w.grid().q_axis(), &pos)?;
                    files.push(mq);
                    let mp = out.dir.join(format!("{stem}_marginal_p.csv"));
                    output::write_marginal(&mp, "p", &w.grid().p_axis(), &mom)?;
                    files.push(mp);
                }
                if out.pgm {
                    let pgm = out.dir.join(format!("{stem}.pgm"));
                    let sidecar = out.dir.join(format!("{stem}.minmax.txt"));
                    output::write_pgm(&pgm, &sidecar, w)?;
                    files.push(pgm);
                    files.push(sidecar);
                }
                Ok(())
            };
            if let Err(e) = write() {
                snapshot_err = Some(e);
            }
        },
        |_| {},
    )?;
    if let Some(e) = snapshot_err {
        return Err(e);
    }

    let trajectory = out.dir.join("trajectory.csv");
    output::write_trajectory(&trajectory, &record)?;
    files.push(trajectory);

    Ok(RunReport {
        final_time: w1.time(),
        initial_mass,
        final_mass: w1.mass(),
        max_mass_deviation: record.max_mass_deviation(initial_mass),
        min_w: w1.min_value(),
        snapshots_written: snapshot_idx,
        transform_residue,
        truncation_report,
        files,
    })
}

/// Standalone Wigner transform of a density-matrix file.
///
/// The q-axis comes from the file; the momentum axis defaults to the full
/// resolution-limited range [-pi*hbar/(2 dq), +pi*hbar/(2 dq)) with as many
/// points as the position axis.
pub fn transform(
    input: &PathBuf,
    output_path: &PathBuf,
    hbar: f64,
    n_p: Option<usize>,
    p_max: Option<f64>,
) -> Result<(PathBuf, f64, f64), CliError> {
    let rho = output::read_density_csv(input)?;
    let axis = rho.q_axis();
    let n_q = axis.len();
    let dq = rho.dq();
    let p_bound = std::f64::consts::PI * hbar / (2.0 * dq);
    let p_extent = p_max.unwrap_or(p_bound);
    let n_p = n_p.unwrap_or(n_q);
    let grid = PhaseSpaceGrid::new(
        axis[0],
        axis[0] + n_q as f64 * dq,
        -p_extent,
        p_extent,
        n_q,
        n_p,
        wigsim_core::grid::DerivativeScheme::SpectralPeriodic,
    )?;
    let (w, residue) = wigner_from_density_matrix(&rho, &grid, hbar)?;
    output::write_field(output_path, &w)?;
    Ok((output_path.clone(), residue, w.mass()))
}
