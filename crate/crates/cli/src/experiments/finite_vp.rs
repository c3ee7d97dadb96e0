//! The variational principle on random functional graphs: the topological
//! pressure from covers against the best cycle average, which is the largest
//! measure pressure since every invariant measure lives on cycles.
//!
//! Past every transient the joins stop changing and `f_{n+L} - f_n` is `L`
//! times a cycle mean for `L` the lcm of the cycle lengths, so the slope of
//! `ln V_n` between `n0` and `n0 + L` converges to the pressure geometrically.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use topress::covers::SetFamily;
use topress::dynsys::{FiniteSystem, Potential};
use topress::lattice::LatticePoint;
use topress::measure::{measure_pressure, FiniteMeasure, KsOptions};
use topress::topological::{
    cover_pressure_value, separated_value, spanning_value, Mode, PressureOptions, PressureSample,
};

use super::{sort_rows, Report, Verdict};
use crate::config::{ExperimentConfig, SystemSpec};
use crate::error::{config_error, Result};
use crate::rows::ResultRow;

const ID: &str = "finite-vp";
pub const VP_TOL: f64 = 1e-6;
const SLOPE_STABLE: f64 = 1e-9;
const MAX_START: u64 = 1 << 24;
const MODES: [Mode; 4] = [Mode::Q, Mode::P, Mode::S, Mode::G];

/// A functional graph, potential and cover list.
pub struct Instance {
    pub sys: FiniteSystem,
    pub f: Potential,
    pub covers: Vec<(String, SetFamily)>,
}

fn random_labels(rng: &mut impl Rng, m: usize, k: usize) -> Vec<u32> {
    (0..m).map(|_| rng.gen_range(0..k as u32)).collect()
}

fn random_cover(rng: &mut impl Rng, m: usize, k: usize) -> Result<SetFamily> {
    let mut sets: Vec<Vec<usize>> = (0..k).map(|_| (0..m).filter(|_| rng.gen_bool(0.5)).collect()).collect();
    for x in 0..m {
        if !sets.iter().any(|s| s.contains(&x)) {
            let i = rng.gen_range(0..k);
            sets[i].push(x);
        }
    }
    Ok(SetFamily::cover(m, sets)?)
}

/// Trivial cover, singletons, two random partitions and two random covers.
pub fn cover_list(rng: &mut impl Rng, m: usize) -> Result<Vec<(String, SetFamily)>> {
    Ok(vec![
        ("trivial".into(), SetFamily::trivial(m)),
        ("singletons".into(), SetFamily::singletons(m)),
        ("partition2".into(), SetFamily::from_labels(&random_labels(rng, m, 2))),
        ("partition3".into(), SetFamily::from_labels(&random_labels(rng, m, 3))),
        ("cover2".into(), random_cover(rng, m, 2)?),
        ("cover3".into(), random_cover(rng, m, 3)?),
    ])
}

pub fn random_instance(seed: u64, max_states: usize) -> Result<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = rng.gen_range(1..=max_states);
    let map: Vec<u32> = (0..m).map(|_| rng.gen_range(0..m as u32)).collect();
    let sys = FiniteSystem::new(m, vec![map], &[])?;
    let f = Potential::new((0..m).map(|_| rng.gen_range(-1.0..1.0)).collect())?;
    let covers = cover_list(&mut rng, m)?;
    Ok(Instance { sys, f, covers })
}

fn sample(inst: &Instance, a: &SetFamily, mode: Mode, t: u64, opts: &PressureOptions) -> Result<PressureSample> {
    let n = LatticePoint::new(vec![t]);
    Ok(match mode {
        Mode::Q | Mode::P => cover_pressure_value(&inst.sys, &inst.f, a, &n, mode, opts)?.sample,
        Mode::S => separated_value(&inst.sys, &inst.f, a, &n, opts)?.sample,
        _ => spanning_value(&inst.sys, &inst.f, a, &n, opts)?.sample,
    })
}

/// Samples at `n0` and `n0 + L` for every cover and mode, with `n0` a multiple
/// of `L` past the transients, doubled until every slope settles.
pub fn tail_samples(inst: &Instance, opts: &PressureOptions) -> Result<Vec<(String, Mode, PressureSample, PressureSample)>> {
    let (tail, period) = inst.sys.eventual_period()?;
    let mut n0 = period * tail.div_ceil(period).max(1);
    let mut previous: Option<Vec<f64>> = None;
    loop {
        let mut out = Vec::new();
        for (name, a) in &inst.covers {
            for mode in MODES {
                let lo = sample(inst, a, mode, n0, opts)?;
                let hi = sample(inst, a, mode, n0 + period, opts)?;
                out.push((name.clone(), mode, lo, hi));
            }
        }
        let slopes: Vec<f64> = out.iter().map(|(_, _, lo, hi)| slope(lo.log_value, hi.log_value, period)).collect();
        let settled = previous
            .as_ref()
            .is_some_and(|p| p.iter().zip(&slopes).all(|(a, b)| (a - b).abs() <= SLOPE_STABLE));
        if settled || n0 >= MAX_START {
            return Ok(out);
        }
        previous = Some(slopes);
        n0 *= 2;
    }
}

fn slope(lo: f64, hi: f64, steps: u64) -> f64 {
    (hi - lo) / steps as f64
}

/// Largest cycle mean of `f`.
pub fn best_cycle_mean(sys: &FiniteSystem, f: &Potential) -> Result<f64> {
    Ok(sys
        .cycle_structure(f)?
        .iter()
        .map(|c| c.mean)
        .fold(f64::NEG_INFINITY, f64::max))
}

fn instance_rows(label: &str, inst: &Instance, opts: &PressureOptions) -> Result<Vec<ResultRow>> {
    let oracle = best_cycle_mean(&inst.sys, &inst.f)?;
    let mut rows = Vec::new();
    for (name, mode, lo, hi) in tail_samples(inst, opts)? {
        let cover = format!("{label}/{name}");
        for s in [lo, hi] {
            rows.push(ResultRow::from_sample(ID, cover.clone(), mode, &s).with_bound(Some(oracle)));
        }
    }
    Ok(rows)
}

pub fn run_finite_vp(cfg: &ExperimentConfig) -> Result<Report> {
    let opts = cfg.pressure_options();
    let mut summary = Vec::new();
    let mut rows = if let SystemSpec::Custom { .. } = cfg.system {
        let sys = cfg.system.build()?;
        if sys.dim() != 1 {
            return Err(config_error("finite-vp needs a single map"));
        }
        let m = sys.state_count();
        let f = cfg.potential.build(&cfg.system, m)?;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let inst = Instance {
            covers: cover_list(&mut rng, m)?,
            sys,
            f,
        };
        if let Some(path) = &cfg.measure {
            let mu = FiniteMeasure::from_csv(std::fs::File::open(path)?, m)?;
            let ks = if m <= 8 {
                KsOptions::exhaustive(4)
            } else {
                KsOptions::fixed(SetFamily::singletons(m), 4)
            };
            let p = measure_pressure(&mu, &inst.sys, &inst.f, &ks)?;
            summary.push(format!("measure pressure of {}: {p:.9}", path.display()));
        }
        instance_rows("custom", &inst, &opts)?
    } else {
        let seeds: Vec<u64> = (0..cfg.instances as u64).map(|i| instance_seed(cfg.seed, i)).collect();
        let chunks = seeds
            .par_iter()
            .enumerate()
            .map(|(i, &s)| instance_rows(&format!("i{i:03}"), &random_instance(s, cfg.max_states)?, &opts))
            .collect::<Result<Vec<_>>>()?;
        chunks.into_iter().flatten().collect()
    };
    sort_rows(&mut rows);
    let verdicts = verdicts(&rows);
    summary.insert(0, format!("{} instance(s), tolerance {VP_TOL:e}", count_instances(&rows)));
    Ok(Report {
        experiment: cfg.experiment,
        rows,
        verdicts,
        summary,
    })
}

pub fn instance_seed(seed: u64, i: u64) -> u64 {
    seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(i)
}

fn count_instances(rows: &[ResultRow]) -> usize {
    let mut ids: Vec<&str> = rows.iter().filter_map(|r| r.cover.split('/').next()).collect();
    ids.dedup();
    ids.len()
}

/// Per instance and mode: the largest slope over covers, from pairs of rows.
pub fn pressure_by_instance(rows: &[ResultRow]) -> BTreeMap<(String, String), (f64, f64)> {
    let mut pairs: BTreeMap<(&str, &str), Vec<&ResultRow>> = BTreeMap::new();
    for r in rows {
        pairs.entry((&r.cover, &r.mode)).or_default().push(r);
    }
    let mut out: BTreeMap<(String, String), (f64, f64)> = BTreeMap::new();
    for ((cover, mode), mut rs) in pairs {
        rs.sort_by_key(|r| r.lambda_n);
        let (Some(lo), Some(hi)) = (rs.first(), rs.last()) else { continue };
        if hi.lambda_n == lo.lambda_n {
            continue;
        }
        let s = slope(lo.log_value, hi.log_value, hi.lambda_n - lo.lambda_n);
        let inst = cover.split('/').next().unwrap_or(cover).to_string();
        let oracle = lo.bound.unwrap_or(f64::NAN);
        let e = out.entry((inst, mode.to_string())).or_insert((f64::NEG_INFINITY, oracle));
        e.0 = e.0.max(s);
    }
    out
}

/// `Q`, `S` and `G` pressures each within tolerance of the cycle oracle.
pub fn verdicts(rows: &[ResultRow]) -> Vec<Verdict> {
    let table = pressure_by_instance(rows);
    let mut out = Vec::new();
    for mode in ["Q", "S", "G"] {
        let mut worst = 0.0f64;
        let mut failed = Vec::new();
        let mut count = 0;
        for ((inst, m), (p, oracle)) in &table {
            if m != mode {
                continue;
            }
            count += 1;
            let gap = (p - oracle).abs();
            if gap.is_nan() || gap > VP_TOL {
                failed.push(inst.clone());
            }
            worst = worst.max(gap);
        }
        let detail = if failed.is_empty() {
            format!("{count} instances, largest gap {worst:.3e}")
        } else {
            format!("{} of {count} instances off by more than {VP_TOL:e}: {}", failed.len(), failed.join(" "))
        };
        out.push(Verdict::new(format!("{mode} pressure vs cycle oracle"), failed.is_empty() && count > 0, detail));
    }
    out
}
