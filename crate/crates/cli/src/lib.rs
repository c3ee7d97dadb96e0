//! Batch experiments over the `topress` library: configuration, runners,
//! CSV and SVG output, and pass/fail verdicts computed from result rows.

pub mod config;
pub mod error;
pub mod experiments;
pub mod rows;
pub mod svg;

pub use config::{Experiment, ExperimentConfig};
pub use error::{CliError, Result};
pub use experiments::{run, Report, Verdict};
pub use rows::ResultRow;
