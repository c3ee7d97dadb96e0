//! The experiment runners. Each returns its rows together with verdicts
//! that are computed from the rows alone.

use std::cmp::Ordering;
use std::fmt;

use crate::config::{Experiment, ExperimentConfig};
use crate::error::Result;
use crate::rows::ResultRow;

pub mod doubling;
pub mod finite_vp;
pub mod fullshift;
pub mod lattice;
pub mod leakage;

pub use doubling::run_doubling;
pub use finite_vp::run_finite_vp;
pub use fullshift::run_fullshift;
pub use lattice::run_lattice_check;
pub use leakage::run_leakage;

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Verdict {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Verdict {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] {}: {}", self.name, self.detail)
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub experiment: Experiment,
    pub rows: Vec<ResultRow>,
    pub verdicts: Vec<Verdict>,
    /// Human-readable lines printed after the run.
    pub summary: Vec<String>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }
}

pub fn run(cfg: &ExperimentConfig) -> Result<Report> {
    match cfg.experiment {
        Experiment::LatticeCheck => run_lattice_check(cfg),
        Experiment::Doubling => run_doubling(cfg),
        Experiment::Leakage => run_leakage(cfg),
        Experiment::FiniteVp => run_finite_vp(cfg),
        Experiment::Fullshift => run_fullshift(cfg),
    }
}

fn mode_rank(mode: &str) -> usize {
    ["Q", "P", "S", "G", "Hrate"].iter().position(|m| *m == mode).unwrap_or(5)
}

/// Cover, then mode, then box size, then box coordinates.
pub(crate) fn sort_rows(rows: &mut [ResultRow]) {
    rows.sort_by(|a, b| {
        a.cover
            .cmp(&b.cover)
            .then(mode_rank(&a.mode).cmp(&mode_rank(&b.mode)))
            .then(a.mode.cmp(&b.mode))
            .then(a.lambda_n.cmp(&b.lambda_n))
            .then(a.n.cmp(&b.n))
            .then(a.log_value.partial_cmp(&b.log_value).unwrap_or(Ordering::Equal))
    });
}

/// The row with the largest box among those matching `cover` and `mode`.
pub(crate) fn final_row<'a>(rows: &'a [ResultRow], cover: &str, mode: &str) -> Option<&'a ResultRow> {
    rows.iter()
        .filter(|r| r.cover == cover && r.mode == mode)
        .max_by_key(|r| r.lambda_n)
}
