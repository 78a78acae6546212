use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use wigsim_cli::error::CliError;
use wigsim_cli::{parse_spec, runner};
use wigsim_core::verify;

/// Wigner-function simulator for one-dimensional open quantum systems.
#[derive(Parser)]
#[command(name = "wigsim", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the simulation described by a spec file and write its data
    /// products.
    Simulate {
        /// Path to the `section.key = value` spec file.
        spec_file: PathBuf,
    },
    /// Run a named verification scenario (or `all`). `list` prints the
    /// scenario names.
    Verify {
        /// Scenario name, `all`, or `list`.
        scenario: String,
    },
    /// Apply the Wigner transform to a density-matrix CSV (`q,qprime,re,im`).
    Transform {
        /// Input density-matrix file.
        input: PathBuf,
        /// Output field CSV.
        #[arg(long, default_value = "wigner.csv")]
        output: PathBuf,
        /// Planck constant used in the transform phase.
        #[arg(long, default_value_t = 1.0)]
        hbar: f64,
        /// Momentum points (default: same as the position axis).
        #[arg(long)]
        n_p: Option<usize>,
        /// Momentum half-extent (default: the resolution bound
        /// pi*hbar/(2 dq)).
        #[arg(long)]
        p_max: Option<f64>,
    },
}

fn simulate(spec_file: &PathBuf) -> Result<(), CliError> {
    let text = std::fs::read_to_string(spec_file)?;
    let spec = parse_spec(&text)?;
    let report = runner::run(&spec)?;
    if let Some(residue) = report.transform_residue {
        println!("transform imaginary residue: {residue:.3e}");
    }
    if let Some(conv) = report.truncation_report {
        println!(
            "truncation check: |Q_(N+1) - Q_N| / |Q_N| = {conv:.3e} at N = {}",
            spec.run.truncation
        );
    }
    println!("final time:      {:.6}", report.final_time);
    println!("final mass:      {:.12}", report.final_mass);
    println!("mass deviation:  {:.3e}", report.max_mass_deviation);
    println!("min W:           {:.6e}", report.min_w);
    println!("snapshots:       {}", report.snapshots_written);
    for file in &report.files {
        println!("wrote {}", file.display());
    }
    Ok(())
}

fn verify_command(scenario: &str) -> Result<bool, CliError> {
    if scenario == "list" {
        for name in verify::SCENARIO_NAMES {
            println!("{name}");
        }
        println!("all");
        return Ok(true);
    }
    let reports = verify::run_scenario(scenario).ok_or_else(|| {
        CliError::Invalid(format!(
            "unknown scenario `{scenario}`; run `wigsim verify list` for the catalog"
        ))
    })?;
    let mut all_passed = true;
    for report in &reports {
        println!("{}", report.line());
        all_passed &= report.passed;
    }
    Ok(all_passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome: Result<bool, CliError> = match &cli.command {
        Command::Simulate { spec_file } => simulate(spec_file).map(|()| true),
        Command::Verify { scenario } => verify_command(scenario),
        Command::Transform {
            input,
            output,
            hbar,
            n_p,
            p_max,
        } => runner::transform(input, output, *hbar, *n_p, *p_max).map(|(path, residue, mass)| {
            println!("imaginary residue: {residue:.3e}");
            println!("mass: {mass:.12}");
            println!("wrote {}", path.display());
            true
        }),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
