//! Full shift on `k` symbols with a single-site potential: cylinder sums,
//! Bernoulli measure pressures and the Gibbs optimum against the closed form.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use topress::fullshift::{bernoulli_pressure, cylinder_sum, exact_pressure, gibbs_optimizer, FullShift};
use topress::lattice::{enumerate_box, LatticePoint};
use topress::solver::SolveStatus;
use topress::topological::Mode;

use super::{sort_rows, Report, Verdict};
use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::rows::ResultRow;

const ID: &str = "fullshift";
pub const TOL: f64 = 1e-9;

pub fn random_specs(seed: u64, count: usize) -> Result<Vec<FullShift>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let k = rng.gen_range(1..=4);
            let dim = rng.gen_range(1..=3);
            Ok(FullShift::new(dim, (0..k).map(|_| rng.gen_range(-2.0..2.0)).collect())?)
        })
        .collect()
}

/// A random probability vector, sometimes a point mass.
pub fn random_probability(rng: &mut impl Rng, k: usize) -> Vec<f64> {
    if rng.gen_bool(0.05) {
        let mut p = vec![0.0; k];
        p[rng.gen_range(0..k)] = 1.0;
        return p;
    }
    let w: Vec<f64> = (0..k).map(|_| rng.gen_range(0.0..1.0f64).powi(2) + 1e-12).collect();
    let s: f64 = w.iter().sum();
    w.iter().map(|x| x / s).collect()
}

/// Boxes with sides up to `n_max` whose cylinder count fits the budget.
fn feasible_boxes(spec: &FullShift, n_max: u64, budget: u64) -> Result<Vec<LatticePoint>> {
    let mut out = Vec::new();
    for b in enumerate_box(&LatticePoint::diagonal(spec.dim(), n_max))? {
        let n = LatticePoint::new(b.coords().iter().map(|c| c + 1).collect::<Vec<_>>());
        let lambda = n.lambda()?;
        let fits = (spec.symbols() as f64).powf(lambda as f64) <= budget as f64 + 0.5;
        if fits {
            out.push(n);
        }
    }
    Ok(out)
}

fn spec_rows(
    label: &str,
    spec: &FullShift,
    cfg: &ExperimentConfig,
    rng: &mut impl Rng,
    summary: &mut Vec<String>,
) -> Result<Vec<ResultRow>> {
    let exact = exact_pressure(spec);
    let one = LatticePoint::ones(1);
    let mut rows = Vec::new();
    let mut largest: Option<(LatticePoint, f64)> = None;
    for n in feasible_boxes(spec, cfg.n_max, cfg.enumeration_budget)? {
        let sum = cylinder_sum(spec, &n, cfg.enumeration_budget)?;
        let lambda = n.lambda()?;
        rows.push(ResultRow::new(
            ID,
            format!("{label}/cylinder"),
            Mode::P,
            &n,
            lambda,
            sum.ln(),
            Some(exact),
            SolveStatus::Exact,
        ));
        if largest.as_ref().is_none_or(|(m, _)| m.lambda().unwrap_or(0) < lambda) {
            largest = Some((n, sum));
        }
    }
    let (p_star, gibbs) = gibbs_optimizer(spec);
    rows.push(ResultRow::new(ID, format!("{label}/gibbs"), Mode::Hrate, &one, 1, gibbs, Some(exact), SolveStatus::Exact));
    let k = spec.symbols();
    let uniform = bernoulli_pressure(spec, &vec![1.0 / k as f64; k])?;
    rows.push(ResultRow::new(
        ID,
        format!("{label}/bernoulli-uniform"),
        Mode::Hrate,
        &one,
        1,
        uniform,
        Some(exact),
        SolveStatus::Exact,
    ));
    for i in 0..cfg.bernoulli_samples {
        let p = random_probability(rng, k);
        let v = bernoulli_pressure(spec, &p)?;
        rows.push(ResultRow::new(
            ID,
            format!("{label}/bernoulli{i:04}"),
            Mode::Hrate,
            &one,
            1,
            v,
            Some(exact),
            SolveStatus::Exact,
        ));
    }
    summary.push(format!("{label}: k = {k}, N = {}, phi = {:?}", spec.dim(), spec.phi()));
    summary.push(format!("  exact pressure      {exact:.12}"));
    if let Some((n, sum)) = largest {
        summary.push(format!("  cylinder sum at {n}  {sum:.6e}"));
    }
    summary.push(format!("  uniform Bernoulli   {uniform:.12}"));
    summary.push(format!("  Gibbs optimum       {gibbs:.12} at p = {p_star:.6?}"));
    Ok(rows)
}

pub fn run_fullshift(cfg: &ExperimentConfig) -> Result<Report> {
    let specs = if cfg.random_specs > 0 {
        random_specs(cfg.seed, cfg.random_specs)?
    } else {
        vec![FullShift::new(cfg.dim, cfg.phi.clone())?]
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed);
    let mut rows = Vec::new();
    let mut summary = Vec::new();
    for (i, spec) in specs.iter().enumerate() {
        rows.extend(spec_rows(&format!("s{i:03}"), spec, cfg, &mut rng, &mut summary)?);
    }
    sort_rows(&mut rows);
    let verdicts = verdicts(&rows);
    Ok(Report {
        experiment: cfg.experiment,
        rows,
        verdicts,
        summary,
    })
}

pub fn verdicts(rows: &[ResultRow]) -> Vec<Verdict> {
    let kind = |r: &ResultRow| r.cover.rsplit('/').next().unwrap_or("").to_string();
    let mut gibbs_gap = 0.0f64;
    let mut gibbs_n = 0;
    let mut worst_excess = f64::NEG_INFINITY;
    let mut bern_n = 0;
    let mut cyl_err = 0.0f64;
    let mut cyl_n = 0;
    for r in rows {
        let Some(exact) = r.bound else { continue };
        let k = kind(r);
        if k == "gibbs" {
            gibbs_gap = gibbs_gap.max((r.log_value - exact).abs());
            gibbs_n += 1;
        } else if k.starts_with("bernoulli") {
            worst_excess = worst_excess.max(r.log_value - exact);
            bern_n += 1;
        } else if k == "cylinder" {
            // relative error of the sum against (sum of e^phi)^lambda
            cyl_err = cyl_err.max((r.log_value - exact * r.lambda_n as f64).exp_m1().abs());
            cyl_n += 1;
        }
    }
    vec![
        Verdict::new(
            "Gibbs value equals exact pressure",
            gibbs_n > 0 && gibbs_gap <= TOL,
            format!("{gibbs_n} specs, largest gap {gibbs_gap:.3e}"),
        ),
        Verdict::new(
            "Bernoulli measures stay below",
            bern_n > 0 && worst_excess <= TOL,
            format!("{bern_n} measures, largest excess {worst_excess:.3e}"),
        ),
        Verdict::new(
            "cylinder sums match the closed form",
            cyl_n > 0 && cyl_err <= TOL,
            format!("{cyl_n} boxes, largest relative error {cyl_err:.3e}"),
        ),
    ]
}
