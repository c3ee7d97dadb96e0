//! Circle doubling with the half-arc partition: entropy `log 2`, and pressure
//! `log(1 + e^a)` for the potential `a` times the upper-arc indicator.

use rayon::prelude::*;
use topress::covers::{half_arc_partition, join, potential_cover, SetFamily};
use topress::lattice::LatticePoint;
use topress::topological::{cover_pressure_value, separated_value, spanning_value, Mode};

use super::{final_row, sort_rows, Report, Verdict};
use crate::config::{ExperimentConfig, SystemSpec};
use crate::error::{config_error, Result};
use crate::rows::ResultRow;

const ID: &str = "doubling";

pub fn run_doubling(cfg: &ExperimentConfig) -> Result<Report> {
    let SystemSpec::Doubling { m } = cfg.system else {
        return Err(config_error("doubling runs on a doubling system"));
    };
    let a = cfg
        .potential
        .arc_height()
        .ok_or_else(|| config_error("doubling needs an arc-indicator potential"))?;
    let sys = cfg.system.build()?;
    let f = cfg.potential.build(&cfg.system, m)?;
    let arc = half_arc_partition(m);
    let banded = join(&arc, &potential_cover(&sys, &f, cfg.eps)?)?;
    let covers: Vec<(&str, SetFamily)> = vec![("arc", arc), ("arc+potential", banded)];
    let opts = cfg.pressure_options();

    let tasks: Vec<(usize, u64)> = (0..covers.len())
        .flat_map(|c| (1..=cfg.n_max).map(move |t| (c, t)))
        .collect();
    let chunks = tasks
        .par_iter()
        .map(|&(c, t)| -> Result<Vec<ResultRow>> {
            let (name, a) = (&covers[c].0, &covers[c].1);
            let n = LatticePoint::new(vec![t]);
            let q = cover_pressure_value(&sys, &f, a, &n, Mode::Q, &opts)?.sample;
            let p = cover_pressure_value(&sys, &f, a, &n, Mode::P, &opts)?.sample;
            let s = separated_value(&sys, &f, a, &n, &opts)?.sample;
            let g = spanning_value(&sys, &f, a, &n, &opts)?.sample;
            Ok(vec![
                ResultRow::from_sample(ID, *name, Mode::Q, &q),
                ResultRow::from_sample(ID, *name, Mode::P, &p),
                ResultRow::from_sample(ID, *name, Mode::S, &s),
                ResultRow::from_sample(ID, *name, Mode::G, &g),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rows: Vec<ResultRow> = chunks.into_iter().flatten().collect();
    sort_rows(&mut rows);
    add_fekete_bounds(&mut rows);

    let target = (1.0 + a.exp()).ln();
    let verdicts = verdicts(&rows, target, cfg.tolerance);
    let mut summary = vec![format!("doubling on {m} states, arc height {a}, reference log(1+e^a) = {target:.6}")];
    for (name, _) in &covers {
        if let Some(r) = final_row(&rows, name, "Q") {
            summary.push(format!("{name}: final Q rate {:.6} at n = {}", r.rate, r.n));
        }
    }
    Ok(Report {
        experiment: cfg.experiment,
        rows,
        verdicts,
        summary,
    })
}

/// Running minimum of the rate for the subadditive `Q` and `P` sequences.
fn add_fekete_bounds(rows: &mut [ResultRow]) {
    let mut best: Option<(String, String, f64)> = None;
    for r in rows.iter_mut() {
        if r.mode != "Q" && r.mode != "P" {
            continue;
        }
        let running = match &best {
            Some((c, m, b)) if *c == r.cover && *m == r.mode => b.min(r.rate),
            _ => r.rate,
        };
        r.bound = Some(running);
        best = Some((r.cover.clone(), r.mode.clone(), running));
    }
}

/// Final `Q` rate of every cover within `tolerance` of `target`.
pub fn verdicts(rows: &[ResultRow], target: f64, tolerance: f64) -> Vec<Verdict> {
    let mut covers: Vec<&str> = rows.iter().map(|r| r.cover.as_str()).collect();
    covers.dedup();
    covers
        .into_iter()
        .map(|c| match final_row(rows, c, "Q") {
            Some(r) => Verdict::new(
                format!("{c} Q rate"),
                (r.rate - target).abs() <= tolerance,
                format!("rate {:.6} at n = {} vs {target:.6} (tolerance {tolerance})", r.rate, r.n),
            ),
            None => Verdict::new(format!("{c} Q rate"), false, "no Q rows"),
        })
        .collect()
}
