//! The line-oriented run-specification grammar.
//!
//! ```text
//! # comment
//! section.key = value
//! ```
//!
//! Sections: `params`, `potential`, `grid`, `initial`, `run`, `output`.
//! Unknown keys, duplicate keys and malformed values are hard errors carrying
//! the offending line number. Every key has a documented default, so the
//! empty file is a valid spec (harmonic oscillator, closed system, 256x256
//! spectral grid, automatic step size).
//!
//! The environment coupling accepts either the direct coefficients
//! (`params.lambda`, `params.d_pp`, ...) or the Lindblad operator
//! coefficients `params.a1/b1/a2/b2` as complex literals (`0.5`, `1+2i`,
//! `-0.3i`); mixing the two styles is an error.

use std::collections::HashSet;
use std::path::PathBuf;

use num_complex::Complex64;
use wigsim_core::grid::{DerivativeScheme, PhaseSpaceGrid};
use wigsim_core::moments::GaussianMoments;
use wigsim_core::params::{coefficients_from_ops, LindbladOpCoeffs, LindbladParams};
use wigsim_core::potential::Potential;

use crate::error::CliError;

/// Where the initial Wigner state comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialState {
    Gaussian(GaussianMoments),
    DensityMatrixFile(PathBuf),
}

/// Time-stepping block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunBlock {
    /// None = automatic (safety * stability bound).
    pub dt: Option<f64>,
    pub t_end: f64,
    pub stride: usize,
    pub truncation: u32,
    pub safety: f64,
}

/// Data products block.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputBlock {
    pub dir: PathBuf,
    pub csv: bool,
    pub pgm: bool,
    pub snapshots: Vec<f64>,
}

/// A fully validated run specification.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub params: LindbladParams,
    /// Run even when the fundamental constraints fail (high-temperature
    /// limits such as the Kramers configuration need this).
    pub allow_unphysical: bool,
    pub potential: Potential,
    pub grid: PhaseSpaceGrid,
    pub initial: InitialState,
    pub run: RunBlock,
    pub output: OutputBlock,
}

fn parse_err(line: usize, message: impl Into<String>) -> CliError {
    CliError::Parse {
        line,
        message: message.into(),
    }
}

/// Strict complex literal: `1.5`, `2i`, `1+2i`, `-0.5-i`, `i`.
pub fn parse_complex(text: &str) -> Option<Complex64> {
    let s = text.trim();
    if s.is_empty() {
        return None;
    }
    if !s.ends_with('i') && !s.ends_with('I') {
        return s.parse::<f64>().ok().map(|re| Complex64::new(re, 0.0));
    }
    let body = &s[..s.len() - 1];
    // split at the last +/- that is not leading and not an exponent sign
    let bytes = body.as_bytes();
    let mut split = None;
    for idx in (1..bytes.len()).rev() {
        let b = bytes[idx];
        if (b == b'+' || b == b'-') && !matches!(bytes[idx - 1], b'e' | b'E') {
            split = Some(idx);
            break;
        }
    }
    let imag_of = |t: &str| -> Option<f64> {
        match t {
            "" | "+" => Some(1.0),
            "-" => Some(-1.0),
            other => other.parse::<f64>().ok(),
        }
    };
    match split {
        Some(idx) => {
            let re = body[..idx].parse::<f64>().ok()?;
            let im = imag_of(&body[idx..])?;
            Some(Complex64::new(re, im))
        }
        None => imag_of(body).map(|im| Complex64::new(0.0, im)),
    }
}

fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Default)]
struct RawSpec {
    entries: Vec<(usize, String, String)>, // line, key, value
}

fn tokenize(text: &str) -> Result<RawSpec, CliError> {
    let mut raw = RawSpec::default();
    let mut seen = HashSet::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let stripped = match line.find('#') {
            Some(pos) => &line[..pos],
            None => line,
        };
        let stripped = stripped.trim();
        if stripped.is_empty() {
            continue;
        }
        let (key, value) = stripped
            .split_once('=')
            .ok_or_else(|| parse_err(line_no, format!("expected `section.key = value`, got `{stripped}`")))?;
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if !key.contains('.') {
            return Err(parse_err(line_no, format!("key `{key}` is missing its section prefix")));
        }
        if value.is_empty() {
            return Err(parse_err(line_no, format!("key `{key}` has an empty value")));
        }
        if !seen.insert(key.clone()) {
            return Err(parse_err(line_no, format!("duplicate key `{key}`")));
        }
        raw.entries.push((line_no, key, value));
    }
    Ok(raw)
}

const KNOWN_KEYS: &[&str] = &[
    "params.m",
    "params.hbar",
    "params.lambda",
    "params.mu",
    "params.d_pp",
    "params.d_qq",
    "params.d_pq",
    "params.a1",
    "params.b1",
    "params.a2",
    "params.b2",
    "params.allow_unphysical",
    "potential.kind",
    "potential.gamma",
    "potential.omega",
    "potential.kappa",
    "potential.c",
    "potential.alpha",
    "potential.beta",
    "potential.u0",
    "potential.k",
    "potential.coeffs",
    "grid.q_min",
    "grid.q_max",
    "grid.p_min",
    "grid.p_max",
    "grid.n_q",
    "grid.n_p",
    "grid.scheme",
    "initial.kind",
    "initial.mean_q",
    "initial.mean_p",
    "initial.sigma_qq",
    "initial.sigma_pp",
    "initial.sigma_pq",
    "initial.file",
    "run.dt",
    "run.t_end",
    "run.stride",
    "run.truncation",
    "run.safety",
    "output.dir",
    "output.formats",
    "output.snapshots",
];

struct Fields {
    entries: Vec<(usize, String, String)>,
}

impl Fields {
    fn get(&self, key: &str) -> Option<(usize, &str)> {
        self.entries
            .iter()
            .find(|(_, k, _)| k == key)
            .map(|(l, _, v)| (*l, v.as_str()))
    }

    fn float(&self, key: &str) -> Result<Option<f64>, CliError> {
        match self.get(key) {
            None => Ok(None),
            Some((line, v)) => v
                .parse::<f64>()
                .map(Some)
                .map_err(|_| parse_err(line, format!("`{key}` expects a number, got `{v}`"))),
        }
    }

    fn complex(&self, key: &str) -> Result<Option<Complex64>, CliError> {
        match self.get(key) {
            None => Ok(None),
            Some((line, v)) => parse_complex(v)
                .map(Some)
                .ok_or_else(|| parse_err(line, format!("`{key}` expects a complex literal, got `{v}`"))),
        }
    }

    fn usize_field(&self, key: &str) -> Result<Option<usize>, CliError> {
        match self.get(key) {
            None => Ok(None),
            Some((line, v)) => v
                .parse::<usize>()
                .map(Some)
                .map_err(|_| parse_err(line, format!("`{key}` expects a non-negative integer, got `{v}`"))),
        }
    }

    fn boolean(&self, key: &str) -> Result<Option<bool>, CliError> {
        match self.get(key) {
            None => Ok(None),
            Some((line, v)) => match v {
                "true" => Ok(Some(true)),
                "false" => Ok(Some(false)),
                _ => Err(parse_err(line, format!("`{key}` expects true or false, got `{v}`"))),
            },
        }
    }

    fn float_list(&self, key: &str) -> Result<Option<Vec<f64>>, CliError> {
        match self.get(key) {
            None => Ok(None),
            Some((line, v)) => v
                .split(',')
                .map(|t| t.trim().parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map(Some)
                .map_err(|_| parse_err(line, format!("`{key}` expects comma-separated numbers, got `{v}`"))),
        }
    }
}

/// Parse and validate a specification text.
pub fn parse_spec(text: &str) -> Result<RunSpec, CliError> {
    let raw = tokenize(text)?;
    for (line, key, _) in &raw.entries {
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(parse_err(*line, format!("unknown key `{key}`")));
        }
    }
    let f = Fields { entries: raw.entries };

    // --- params -----------------------------------------------------------
    let mass = f.float("params.m")?.unwrap_or(1.0);
    let hbar = f.float("params.hbar")?.unwrap_or(1.0);
    let mu = f.float("params.mu")?.unwrap_or(0.0);
    let allow_unphysical = f.boolean("params.allow_unphysical")?.unwrap_or(false);
    let direct_keys = ["params.lambda", "params.d_pp", "params.d_qq", "params.d_pq"];
    let ops_keys = ["params.a1", "params.b1", "params.a2", "params.b2"];
    let has_direct = direct_keys.iter().any(|k| f.get(k).is_some());
    let has_ops = ops_keys.iter().any(|k| f.get(k).is_some());
    if has_direct && has_ops {
        return Err(CliError::Invalid(
            "give either the direct coefficients (lambda, d_*) or the operator coefficients (a1..b2), not both"
                .into(),
        ));
    }
    let params = if has_ops {
        let zero = Complex64::new(0.0, 0.0);
        let ops = LindbladOpCoeffs::new(
            f.complex("params.a1")?.unwrap_or(zero),
            f.complex("params.b1")?.unwrap_or(zero),
            f.complex("params.a2")?.unwrap_or(zero),
            f.complex("params.b2")?.unwrap_or(zero),
        );
        let d = coefficients_from_ops(&ops, hbar).map_err(CliError::Core)?;
        LindbladParams {
            mass,
            hbar,
            lambda: d.lambda,
            mu,
            d_pp: d.d_pp,
            d_qq: d.d_qq,
            d_pq: d.d_pq,
        }
    } else {
        LindbladParams {
            mass,
            hbar,
            lambda: f.float("params.lambda")?.unwrap_or(0.0),
            mu,
            d_pp: f.float("params.d_pp")?.unwrap_or(0.0),
            d_qq: f.float("params.d_qq")?.unwrap_or(0.0),
            d_pq: f.float("params.d_pq")?.unwrap_or(0.0),
        }
    };
    if !(mass > 0.0 && mass.is_finite()) || !(hbar > 0.0 && hbar.is_finite()) {
        return Err(CliError::Invalid("params: m and hbar must be positive".into()));
    }
    let report = params.validate();
    if !report.is_valid() && !allow_unphysical {
        return Err(CliError::Invalid(format!(
            "params violate the fundamental constraints: {} (set params.allow_unphysical = true to run a limit configuration anyway)",
            report.failures().join("; ")
        )));
    }

    // --- potential ---------------------------------------------------------
    let kind = f.get("potential.kind").map(|(_, v)| v).unwrap_or("harmonic");
    let only = |allowed: &[&str]| -> Result<(), CliError> {
        for key in [
            "potential.gamma",
            "potential.omega",
            "potential.kappa",
            "potential.c",
            "potential.alpha",
            "potential.beta",
            "potential.u0",
            "potential.k",
            "potential.coeffs",
        ] {
            if f.get(key).is_some() && !allowed.contains(&key) {
                return Err(CliError::Invalid(format!(
                    "`{key}` does not apply to potential.kind = {kind}"
                )));
            }
        }
        Ok(())
    };
    let potential = match kind {
        "free" => {
            only(&[])?;
            Potential::Free
        }
        "linear" => {
            only(&["potential.gamma"])?;
            Potential::Linear {
                gamma: f.float("potential.gamma")?.unwrap_or(1.0),
            }
        }
        "harmonic" => {
            only(&["potential.omega"])?;
            Potential::Harmonic {
                omega: f.float("potential.omega")?.unwrap_or(1.0),
            }
        }
        "inverted_parabola" => {
            only(&["potential.kappa"])?;
            Potential::InvertedParabola {
                kappa: f.float("potential.kappa")?.unwrap_or(1.0),
            }
        }
        "quartic" => {
            only(&["potential.omega", "potential.c"])?;
            Potential::Quartic {
                omega: f.float("potential.omega")?.unwrap_or(1.0),
                c: f.float("potential.c")?.unwrap_or(0.1),
            }
        }
        "exponential" => {
            only(&["potential.alpha", "potential.beta"])?;
            Potential::Exponential {
                alpha: f.float("potential.alpha")?.unwrap_or(1.0),
                beta: f.float("potential.beta")?.unwrap_or(1.0),
            }
        }
        "cosine" => {
            only(&["potential.u0", "potential.k"])?;
            Potential::Cosine {
                u0: f.float("potential.u0")?.unwrap_or(1.0),
                k: f.float("potential.k")?.unwrap_or(1.0),
            }
        }
        "polynomial" => {
            only(&["potential.coeffs"])?;
            Potential::Polynomial {
                coeffs: f
                    .float_list("potential.coeffs")?
                    .ok_or_else(|| CliError::Invalid("polynomial potential needs potential.coeffs".into()))?,
            }
        }
        other => {
            let line = f.get("potential.kind").map(|(l, _)| l).unwrap_or(0);
            return Err(parse_err(line, format!("unknown potential kind `{other}`")));
        }
    };
    potential.check().map_err(CliError::Core)?;

    // --- grid ---------------------------------------------------------------
    let scheme = match f.get("grid.scheme").map(|(l, v)| (l, v)) {
        None => DerivativeScheme::SpectralPeriodic,
        Some((_, "spectral")) => DerivativeScheme::SpectralPeriodic,
        Some((_, "fd4")) => DerivativeScheme::CentralFd4,
        Some((line, other)) => {
            return Err(parse_err(line, format!("grid.scheme must be spectral or fd4, got `{other}`")))
        }
    };
    let grid = PhaseSpaceGrid::new(
        f.float("grid.q_min")?.unwrap_or(-8.0),
        f.float("grid.q_max")?.unwrap_or(8.0),
        f.float("grid.p_min")?.unwrap_or(-8.0),
        f.float("grid.p_max")?.unwrap_or(8.0),
        f.usize_field("grid.n_q")?.unwrap_or(256),
        f.usize_field("grid.n_p")?.unwrap_or(256),
        scheme,
    )
    .map_err(CliError::Core)?;

    // --- initial state -------------------------------------------------------
    let initial_kind = f.get("initial.kind").map(|(_, v)| v).unwrap_or("gaussian");
    let gaussian_keys = [
        "initial.mean_q",
        "initial.mean_p",
        "initial.sigma_qq",
        "initial.sigma_pp",
        "initial.sigma_pq",
    ];
    let initial = match initial_kind {
        "gaussian" => {
            if f.get("initial.file").is_some() {
                return Err(CliError::Invalid(
                    "initial.file only applies to initial.kind = density_matrix".into(),
                ));
            }
            InitialState::Gaussian(GaussianMoments::new(
                f.float("initial.mean_q")?.unwrap_or(0.0),
                f.float("initial.mean_p")?.unwrap_or(0.0),
                f.float("initial.sigma_qq")?.unwrap_or(0.5 * hbar),
                f.float("initial.sigma_pp")?.unwrap_or(0.5 * hbar),
                f.float("initial.sigma_pq")?.unwrap_or(0.0),
            ))
        }
        "density_matrix" => {
            if gaussian_keys.iter().any(|k| f.get(k).is_some()) {
                return Err(CliError::Invalid(
                    "Gaussian moment keys do not apply to initial.kind = density_matrix".into(),
                ));
            }
            let (_, path) = f
                .get("initial.file")
                .ok_or_else(|| CliError::Invalid("initial.kind = density_matrix needs initial.file".into()))?;
            let path = PathBuf::from(path);
            if !path.exists() {
                return Err(CliError::Invalid(format!(
                    "initial.file `{}` does not exist",
                    path.display()
                )));
            }
            InitialState::DensityMatrixFile(path)
        }
        other => {
            let line = f.get("initial.kind").map(|(l, _)| l).unwrap_or(0);
            return Err(parse_err(line, format!("unknown initial kind `{other}`")));
        }
    };

    // --- run ------------------------------------------------------------------
    let dt = match f.get("run.dt") {
        None => None,
        Some((_, "auto")) => None,
        Some((line, v)) => Some(v.parse::<f64>().map_err(|_| {
            parse_err(line, format!("run.dt expects a number or `auto`, got `{v}`"))
        })?),
    };
    let run = RunBlock {
        dt,
        t_end: f.float("run.t_end")?.unwrap_or(10.0),
        stride: f.usize_field("run.stride")?.unwrap_or(10),
        truncation: f.usize_field("run.truncation")?.unwrap_or(3) as u32,
        safety: f.float("run.safety")?.unwrap_or(0.4),
    };
    if let Some(dt) = run.dt {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(CliError::Invalid(format!("run.dt = {dt} must be positive")));
        }
    }
    if !(run.t_end >= 0.0 && run.t_end.is_finite()) {
        return Err(CliError::Invalid(format!("run.t_end = {} must be non-negative", run.t_end)));
    }
    if run.stride == 0 {
        return Err(CliError::Invalid("run.stride must be at least 1".into()));
    }
    if !(run.safety > 0.0 && run.safety <= 1.0) {
        return Err(CliError::Invalid(format!(
            "run.safety = {} must lie in (0, 1]",
            run.safety
        )));
    }

    // --- output ----------------------------------------------------------------
    let (csv, pgm) = match f.get("output.formats") {
        None => (true, false),
        Some((line, v)) => {
            let mut csv = false;
            let mut pgm = false;
            for token in v.split(',') {
                match token.trim() {
                    "csv" => csv = true,
                    "pgm" => pgm = true,
                    other => {
                        return Err(parse_err(
                            line,
                            format!("output.formats accepts csv and pgm, got `{other}`"),
                        ))
                    }
                }
            }
            (csv, pgm)
        }
    };
    let snapshots = f.float_list("output.snapshots")?.unwrap_or_default();
    for &t in &snapshots {
        if !(t >= 0.0 && t <= run.t_end) {
            return Err(CliError::Invalid(format!(
                "snapshot time {t} lies outside [0, t_end = {}]",
                run.t_end
            )));
        }
    }
    let output = OutputBlock {
        dir: PathBuf::from(f.get("output.dir").map(|(_, v)| v).unwrap_or("out")),
        csv,
        pgm,
        snapshots,
    };

    Ok(RunSpec {
        params,
        allow_unphysical,
        potential,
        grid,
        initial,
        run,
        output,
    })
}

impl RunSpec {
    /// Canonical text form; `parse_spec(serialize(spec)) == spec`.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let mut push = |k: &str, v: String| {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(&v);
            out.push('\n');
        };
        push("params.m", format_float(self.params.mass));
        push("params.hbar", format_float(self.params.hbar));
        push("params.lambda", format_float(self.params.lambda));
        push("params.mu", format_float(self.params.mu));
        push("params.d_pp", format_float(self.params.d_pp));
        push("params.d_qq", format_float(self.params.d_qq));
        push("params.d_pq", format_float(self.params.d_pq));
        push("params.allow_unphysical", self.allow_unphysical.to_string());
        match &self.potential {
            Potential::Free => push("potential.kind", "free".into()),
            Potential::Linear { gamma } => {
                push("potential.kind", "linear".into());
                push("potential.gamma", format_float(*gamma));
            }
            Potential::Harmonic { omega } => {
                push("potential.kind", "harmonic".into());
                push("potential.omega", format_float(*omega));
            }
            Potential::InvertedParabola { kappa } => {
                push("potential.kind", "inverted_parabola".into());
                push("potential.kappa", format_float(*kappa));
            }
            Potential::Quartic { omega, c } => {
                push("potential.kind", "quartic".into());
                push("potential.omega", format_float(*omega));
                push("potential.c", format_float(*c));
            }
            Potential::Exponential { alpha, beta } => {
                push("potential.kind", "exponential".into());
                push("potential.alpha", format_float(*alpha));
                push("potential.beta", format_float(*beta));
            }
            Potential::Cosine { u0, k } => {
                push("potential.kind", "cosine".into());
                push("potential.u0", format_float(*u0));
                push("potential.k", format_float(*k));
            }
            Potential::Polynomial { coeffs } => {
                push("potential.kind", "polynomial".into());
                let list: Vec<String> = coeffs.iter().map(|c| format_float(*c)).collect();
                push("potential.coeffs", list.join(", "));
            }
        }
        push("grid.q_min", format_float(self.grid.q_min));
        push("grid.q_max", format_float(self.grid.q_max));
        push("grid.p_min", format_float(self.grid.p_min));
        push("grid.p_max", format_float(self.grid.p_max));
        push("grid.n_q", self.grid.n_q.to_string());
        push("grid.n_p", self.grid.n_p.to_string());
        push(
            "grid.scheme",
            match self.grid.scheme {
                DerivativeScheme::SpectralPeriodic => "spectral".into(),
                DerivativeScheme::CentralFd4 => "fd4".into(),
            },
        );
        match &self.initial {
            InitialState::Gaussian(m) => {
                push("initial.kind", "gaussian".into());
                push("initial.mean_q", format_float(m.mean_q));
                push("initial.mean_p", format_float(m.mean_p));
                push("initial.sigma_qq", format_float(m.sigma_qq));
                push("initial.sigma_pp", format_float(m.sigma_pp));
                push("initial.sigma_pq", format_float(m.sigma_pq));
            }
            InitialState::DensityMatrixFile(path) => {
                push("initial.kind", "density_matrix".into());
                push("initial.file", path.display().to_string());
            }
        }
        match self.run.dt {
            None => push("run.dt", "auto".into()),
            Some(dt) => push("run.dt", format_float(dt)),
        }
        push("run.t_end", format_float(self.run.t_end));
        push("run.stride", self.run.stride.to_string());
        push("run.truncation", self.run.truncation.to_string());
        push("run.safety", format_float(self.run.safety));
        push("output.dir", self.output.dir.display().to_string());
        let mut formats = Vec::new();
        if self.output.csv {
            formats.push("csv");
        }
        if self.output.pgm {
            formats.push("pgm");
        }
        if !formats.is_empty() {
            push("output.formats", formats.join(","));
        }
        if !self.output.snapshots.is_empty() {
            let list: Vec<String> = self.output.snapshots.iter().map(|t| format_float(*t)).collect();
            push("output.snapshots", list.join(", "));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_spec_gets_documented_defaults() {
        let spec = parse_spec("").unwrap();
        assert_eq!(spec.params.hbar, 1.0);
        assert_eq!(spec.params.mass, 1.0);
        assert!(spec.params.is_dissipationless());
        assert_eq!(spec.potential, Potential::Harmonic { omega: 1.0 });
        assert_eq!(spec.grid.n_q, 256);
        assert_eq!(spec.grid.n_p, 256);
        assert_eq!(spec.run.dt, None); // auto
        assert_eq!(
            spec.initial,
            InitialState::Gaussian(GaussianMoments::new(0.0, 0.0, 0.5, 0.5, 0.0))
        );
    }

    #[test]
    fn unknown_key_reports_the_line() {
        let err = parse_spec("params.m = 1\nparams.nonsense = 2\n").unwrap_err();
        match err {
            CliError::Parse { line, message } => {
                assert_eq!(line, 2);
                assert!(message.contains("nonsense"));
            }
            other => panic!("expected parse error, got {other}"),
        }
    }

    #[test]
    fn duplicate_keys_are_rejected() {
        let err = parse_spec("run.t_end = 1\nrun.t_end = 2\n").unwrap_err();
        assert!(matches!(err, CliError::Parse { line: 2, .. }));
    }

    #[test]
    fn constraint_violation_names_the_constraint() {
        let text = "params.lambda = 1.0\nparams.d_pp = 1.0\nparams.d_qq = 0.05\n";
        let err = parse_spec(text).unwrap_err();
        match err {
            CliError::Invalid(msg) => assert!(msg.contains("iii"), "{msg}"),
            other => panic!("expected invalid spec, got {other}"),
        }
        // the documented override admits limit configurations
        let text = format!("{text}params.allow_unphysical = true\n");
        assert!(parse_spec(&text).is_ok());
    }

    #[test]
    fn operator_coefficients_fill_the_diffusion_block() {
        let spec = parse_spec("params.a1 = 1\nparams.b1 = -i\n").unwrap();
        assert_eq!(spec.params.d_qq, 0.5);
        assert_eq!(spec.params.d_pp, 0.5);
        assert_eq!(spec.params.d_pq, 0.0);
        assert_eq!(spec.params.lambda, 1.0);
        // mixing styles is an error
        assert!(parse_spec("params.a1 = 1\nparams.lambda = 0.5\n").is_err());
    }

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("1.5"), Some(Complex64::new(1.5, 0.0)));
        assert_eq!(parse_complex("2i"), Some(Complex64::new(0.0, 2.0)));
        assert_eq!(parse_complex("i"), Some(Complex64::new(0.0, 1.0)));
        assert_eq!(parse_complex("-i"), Some(Complex64::new(0.0, -1.0)));
        assert_eq!(parse_complex("1+2i"), Some(Complex64::new(1.0, 2.0)));
        assert_eq!(parse_complex("-0.5-0.25i"), Some(Complex64::new(-0.5, -0.25)));
        assert_eq!(parse_complex("1e-3+2e-4i"), Some(Complex64::new(1e-3, 2e-4)));
        assert_eq!(parse_complex("3-i"), Some(Complex64::new(3.0, -1.0)));
        assert_eq!(parse_complex(""), None);
        assert_eq!(parse_complex("abc"), None);
        assert_eq!(parse_complex("1+2"), None);
    }

    #[test]
    fn potential_parameters_are_scoped() {
        assert!(parse_spec("potential.kind = harmonic\npotential.gamma = 1\n").is_err());
        assert!(parse_spec("potential.kind = free\npotential.omega = 1\n").is_err());
        let spec = parse_spec("potential.kind = quartic\npotential.c = 0.2\n").unwrap();
        assert_eq!(spec.potential, Potential::Quartic { omega: 1.0, c: 0.2 });
    }

    #[test]
    fn snapshots_must_lie_inside_the_run() {
        let ok = parse_spec("run.t_end = 2\noutput.snapshots = 0.5, 2.0\n").unwrap();
        assert_eq!(ok.output.snapshots, vec![0.5, 2.0]);
        assert!(parse_spec("run.t_end = 2\noutput.snapshots = 3.0\n").is_err());
    }

    #[test]
    fn roundtrip_is_identity() {
        let text = "\
params.lambda = 0.2
params.mu = 0.15
params.d_pp = 0.5
params.d_qq = 0.4
params.d_pq = 0.05
potential.kind = quartic
potential.omega = 1.25
potential.c = 0.07
grid.q_min = -6
grid.q_max = 6
grid.p_min = -7
grid.p_max = 7
grid.n_q = 64
grid.n_p = 128
initial.mean_q = 1.5
run.dt = 0.001
run.t_end = 2.5
run.stride = 25
output.dir = data
output.formats = csv,pgm
output.snapshots = 0.5, 1.25
";
        let spec = parse_spec(text).unwrap();
        let again = parse_spec(&spec.serialize()).unwrap();
        assert_eq!(spec, again);
    }

    proptest::proptest! {
        #[test]
        fn serialization_roundtrips_random_specs(
            lambda in 0.0f64..0.5,
            d in 0.3f64..1.0,
            omega in 0.5f64..2.0,
            mean_q in -2.0f64..2.0,
            t_end in 0.1f64..5.0,
            n_exp in 3u32..6,
            stride in 1usize..50,
        ) {
            let n = 1usize << n_exp;
            let text = format!(
                "params.lambda = {lambda}\nparams.mu = {lambda}\nparams.d_pp = {d}\nparams.d_qq = {d}\n\
                 potential.kind = harmonic\npotential.omega = {omega}\n\
                 grid.n_q = {n}\ngrid.n_p = {n}\n\
                 initial.mean_q = {mean_q}\nrun.t_end = {t_end}\nrun.stride = {stride}\n"
            );
            let spec = parse_spec(&text).unwrap();
            let again = parse_spec(&spec.serialize()).unwrap();
            proptest::prop_assert_eq!(spec, again);
        }
    }
}
