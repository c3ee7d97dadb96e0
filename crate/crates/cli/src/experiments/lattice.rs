//! Random tilings of boxes: the residue bound and an exhaustive check that
//! tiles and residue partition the box.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use topress::lattice::{decompose, enumerate_box, LatticeBox, LatticePoint};
use topress::solver::SolveStatus;

use super::{sort_rows, Report, Verdict};
use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::rows::{dash_joined, ResultRow};

const ID: &str = "lattice-check";
pub const RESIDUE: &str = "residue";
pub const TILING: &str = "tiling";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Case {
    pub n: LatticePoint,
    pub q: LatticePoint,
    pub k: LatticePoint,
}

/// `cases` boxes cycling through dimensions 1, 2 and 3.
pub fn random_cases(seed: u64, cases: usize, q_max: u64) -> Vec<Case> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..cases)
        .map(|c| {
            let dim = 1 + c % 3;
            let side = [80, 24, 10][dim - 1];
            let n: Vec<u64> = (0..dim).map(|_| rng.gen_range(1..=side)).collect();
            let q: Vec<u64> = (0..dim).map(|_| rng.gen_range(1..=q_max)).collect();
            let k: Vec<u64> = q.iter().map(|&qj| rng.gen_range(0..qj)).collect();
            Case {
                n: LatticePoint::new(n),
                q: LatticePoint::new(q),
                k: LatticePoint::new(k),
            }
        })
        .collect()
}

/// Points of the box covered exactly once by tiles and residue together, or
/// zero if some tile leaves the box.
fn exactly_once(case: &Case) -> Result<(u64, u64)> {
    let d = decompose(&case.n, &case.q, &case.k)?;
    let bx = LatticeBox::new(case.n.clone())?;
    let points = enumerate_box(&case.n)?;
    let index = |p: &LatticePoint| points.binary_search(p).ok();
    let mut hits = vec![0u32; points.len()];
    let mut outside = false;
    for corner in &d.corners {
        for p in d.tile_points(corner) {
            match index(&p) {
                Some(i) if bx.contains(&p) => hits[i] += 1,
                _ => outside = true,
            }
        }
    }
    for p in &d.residue {
        match index(p) {
            Some(i) => hits[i] += 1,
            None => outside = true,
        }
    }
    let once = if outside { 0 } else { hits.iter().filter(|&&h| h == 1).count() as u64 };
    Ok((d.residue.len() as u64, once))
}

pub fn run_lattice_check(cfg: &ExperimentConfig) -> Result<Report> {
    let cases = random_cases(cfg.seed, cfg.cases, cfg.q_max);
    let chunks = cases
        .par_iter()
        .enumerate()
        .map(|(i, c)| -> Result<Vec<ResultRow>> {
            let (residue, once) = exactly_once(c)?;
            let lambda = c.n.lambda()?;
            let dim = c.n.dim() as f64;
            let bound = 2.0 * dim * c.q.max_coord() as f64 * lambda as f64 / c.n.min_coord() as f64;
            let id = format!("c{i:04} q={} k={}", dash_joined(&c.q), dash_joined(&c.k));
            Ok(vec![
                ResultRow::new(ID, id.clone(), RESIDUE, &c.n, lambda, (residue as f64).ln(), Some(bound), SolveStatus::Exact),
                ResultRow::new(ID, id, TILING, &c.n, lambda, (once as f64).ln(), Some(lambda as f64), SolveStatus::Exact),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rows: Vec<ResultRow> = chunks.into_iter().flatten().collect();
    sort_rows(&mut rows);
    let verdicts = verdicts(&rows);
    let summary = vec![format!("{} random tilings across dimensions 1 to 3, q up to {}", cases.len(), cfg.q_max)];
    Ok(Report {
        experiment: cfg.experiment,
        rows,
        verdicts,
        summary,
    })
}

fn count_of(r: &ResultRow) -> f64 {
    r.log_value.exp().round()
}

pub fn verdicts(rows: &[ResultRow]) -> Vec<Verdict> {
    let residue: Vec<&ResultRow> = rows.iter().filter(|r| r.mode == RESIDUE).collect();
    let tiling: Vec<&ResultRow> = rows.iter().filter(|r| r.mode == TILING).collect();
    let over = residue
        .iter()
        .filter(|r| r.bound.is_none_or(|b| count_of(r) > b + 1e-9))
        .count();
    let broken = tiling
        .iter()
        .filter(|r| r.bound.is_none_or(|b| count_of(r) != b))
        .count();
    vec![
        Verdict::new(
            "residue bound",
            over == 0 && !residue.is_empty(),
            format!("{over} of {} residues above the bound", residue.len()),
        ),
        Verdict::new(
            "tiling partitions the box",
            broken == 0 && !tiling.is_empty(),
            format!("{broken} of {} tilings miss or repeat points", tiling.len()),
        ),
    ]
}
