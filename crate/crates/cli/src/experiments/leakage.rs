//! Entropy leakage on the disk grid: non-admissible pizza-slice itineraries
//! and euclidean separated counts near the boundary grow, while an admissible
//! cover sees none of the boundary dynamics.

use rayon::prelude::*;
use topress::covers::{classify_admissible, SetFamily};
use topress::dynsys::{DiskGrid, FiniteSystem, Potential};
use topress::lattice::LatticePoint;
use topress::solver::{max_weight_independent_set, WeightedGraph};
use topress::topological::{cover_pressure_value, Mode, PressureOptions};

use super::{final_row, sort_rows, Report, Verdict};
use crate::config::{AdmissibleCover, ExperimentConfig, SystemSpec};
use crate::error::{config_error, Result};
use crate::rows::ResultRow;

const ID: &str = "leakage";
pub const PIZZA: &str = "pizza";
pub const EUCLIDEAN: &str = "euclidean";
pub const ADMISSIBLE: &str = "admissible";
/// Least final rate the two leaking tracks must show.
pub const LEAK_MIN: f64 = 0.6;
/// Largest final rate the admissible track may show.
pub const ADMISSIBLE_MAX: f64 = 0.05;

/// Rings `rings / 2` and beyond; the center and lower rings form the inner disk.
fn in_annulus(grid: &DiskGrid, x: usize) -> bool {
    grid.ring_sector(x).is_some_and(|(i, _)| i >= grid.rings / 2)
}

/// Inner disk plus the annulus cut into `slices` angular slices.
pub fn pizza_partition(grid: &DiskGrid, slices: usize) -> SetFamily {
    let labels: Vec<u32> = (0..grid.state_count())
        .map(|x| match grid.ring_sector(x) {
            Some((_, j)) if in_annulus(grid, x) => 1 + (j * slices / grid.sectors) as u32,
            _ => 0,
        })
        .collect();
    SetFamily::from_labels(&labels)
}

/// The annulus, which holds the marked outer ring, and the inner disk.
pub fn annulus_cover(grid: &DiskGrid) -> SetFamily {
    let labels: Vec<u32> = (0..grid.state_count()).map(|x| u32::from(in_annulus(grid, x))).collect();
    SetFamily::from_labels(&labels)
}

/// Largest set of outer-ring cells pairwise more than `eps` apart in the
/// Bowen distance over `n` steps, using cell centers.
pub fn euclidean_separated(
    sys: &FiniteSystem,
    grid: &DiskGrid,
    n: u64,
    eps: f64,
    opts: &PressureOptions,
) -> Result<(usize, topress::solver::SolveStatus)> {
    let geometry = sys.geometry().ok_or_else(|| config_error("disk system lacks geometry"))?;
    let boundary: Vec<usize> = (0..grid.sectors).map(|j| grid.cell(grid.rings - 1, j)).collect();
    let map = sys.generator(0);
    let orbits: Vec<Vec<[f64; 2]>> = boundary
        .iter()
        .map(|&x| {
            let mut y = x;
            (0..n)
                .map(|_| {
                    let p = geometry[y];
                    y = map[y] as usize;
                    p
                })
                .collect()
        })
        .collect();
    let mut edges = Vec::new();
    for i in 0..boundary.len() {
        for j in i + 1..boundary.len() {
            let d = orbits[i]
                .iter()
                .zip(&orbits[j])
                .map(|(p, q)| (p[0] - q[0]).hypot(p[1] - q[1]))
                .fold(0.0, f64::max);
            if d <= eps {
                edges.push((i, j));
            }
        }
    }
    let g = WeightedGraph::new(vec![1.0; boundary.len()], &edges)?;
    let sol = max_weight_independent_set(&g, &opts.limits)?;
    Ok((sol.vertices.len(), sol.status))
}

pub fn run_leakage(cfg: &ExperimentConfig) -> Result<Report> {
    let SystemSpec::Disk { rings, sectors } = cfg.system else {
        return Err(config_error("leakage runs on a disk system"));
    };
    let grid = DiskGrid::new(rings, sectors)?;
    let sys = grid.system()?;
    let f = Potential::zero(sys.state_count());
    let pizza = pizza_partition(&grid, cfg.slices);
    let admissible = match cfg.admissible_cover {
        AdmissibleCover::Annulus => annulus_cover(&grid),
        AdmissibleCover::Trivial => SetFamily::trivial(sys.state_count()),
    };
    if !classify_admissible(&sys, &admissible)?.is_admissible {
        return Err(config_error("the admissible track's cover is not admissible"));
    }
    let opts = PressureOptions {
        allow_non_admissible: true,
        ..cfg.pressure_options()
    };

    let tasks: Vec<(usize, u64)> = (0..3).flat_map(|k| (1..=cfg.n_max).map(move |t| (k, t))).collect();
    let mut rows = tasks
        .par_iter()
        .map(|&(track, t)| -> Result<ResultRow> {
            let n = LatticePoint::new(vec![t]);
            Ok(match track {
                0 => {
                    let v = cover_pressure_value(&sys, &f, &pizza, &n, Mode::Q, &opts)?;
                    ResultRow::from_sample(ID, PIZZA, Mode::Q, &v.sample)
                }
                1 => {
                    let (count, status) = euclidean_separated(&sys, &grid, t, cfg.separation, &opts)?;
                    ResultRow::new(ID, EUCLIDEAN, Mode::S, &n, t, (count as f64).ln(), None, status)
                }
                _ => {
                    let v = cover_pressure_value(&sys, &f, &admissible, &n, Mode::Q, &opts)?;
                    ResultRow::from_sample(ID, ADMISSIBLE, Mode::Q, &v.sample)
                }
            })
        })
        .collect::<Result<Vec<_>>>()?;
    sort_rows(&mut rows);
    let verdicts = verdicts(&rows);
    let mut summary = vec![format!(
        "disk grid {rings}x{sectors} ({} states), {} pizza slices, separation {}",
        sys.state_count(),
        cfg.slices,
        cfg.separation
    )];
    for (track, mode) in [(PIZZA, "Q"), (EUCLIDEAN, "S"), (ADMISSIBLE, "Q")] {
        if let Some(r) = final_row(&rows, track, mode) {
            summary.push(format!("{track}: rate {:.6} at n = {}", r.rate, r.n));
        }
    }
    Ok(Report {
        experiment: cfg.experiment,
        rows,
        verdicts,
        summary,
    })
}

pub fn verdicts(rows: &[ResultRow]) -> Vec<Verdict> {
    let check = |track: &str, mode: &str, ok: &dyn Fn(f64) -> bool, rule: &str| match final_row(rows, track, mode) {
        Some(r) => Verdict::new(
            format!("{track} rate"),
            ok(r.rate),
            format!("rate {:.6} at n = {}, required {rule}", r.rate, r.n),
        ),
        None => Verdict::new(format!("{track} rate"), false, "no rows"),
    };
    vec![
        check(PIZZA, "Q", &|r| r >= LEAK_MIN, &format!(">= {LEAK_MIN}")),
        check(EUCLIDEAN, "S", &|r| r >= LEAK_MIN, &format!(">= {LEAK_MIN}")),
        check(ADMISSIBLE, "Q", &|r| r <= ADMISSIBLE_MAX, &format!("<= {ADMISSIBLE_MAX}")),
    ]
}
