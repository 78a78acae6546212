//! Batch front-end for the phase-space open-system simulator: a
//! line-oriented run-specification grammar, deterministic CSV/PGM data
//! products, and the named verification scenarios.

pub mod error;
pub mod output;
pub mod runner;
pub mod spec;

pub use error::CliError;
pub use runner::{run, transform, RunReport};
pub use spec::{parse_spec, InitialState, OutputBlock, RunBlock, RunSpec};
