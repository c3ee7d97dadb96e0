#![allow(dead_code)]

use std::io::Write;
use std::sync::{Mutex, MutexGuard, OnceLock};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use topress::covers::SetFamily;
use topress::dynsys::{FiniteSystem, Potential};
use topress::lattice::{enumerate_box, LatticePoint};
use topress::measure::{pushforward, FiniteMeasure};
use topress_cli::config::{Experiment, ExperimentConfig, PotentialSpec};
use topress_cli::experiments::{run, Report};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Holds every acceptance check to one at a time so wall-clock limits are
/// measured without competing work.
pub fn serial() -> MutexGuard<'static, ()> {
    static LOCK: Mutex<()> = Mutex::new(());
    LOCK.lock().unwrap_or_else(|e| e.into_inner())
}

/// One line per criterion straight to the terminal, bypassing output capture.
pub fn verdict(id: u32, title: &str, failures: &[String], detail: &str) {
    let tag = if failures.is_empty() { "PASS" } else { "FAIL" };
    let mut line = format!("criterion {id:>2} [{tag}] {title}: {detail}");
    if let Some(first) = failures.first() {
        line.push_str(&format!(" ({} failing, first: {first})", failures.len()));
    }
    let mut err = std::io::stderr().lock();
    let _ = writeln!(err, "{line}");
    let _ = err.flush();
    assert!(failures.is_empty(), "{line}\n{}", failures.join("\n"));
}

pub struct Timed {
    pub report: Report,
    pub elapsed: Duration,
}

pub fn timed_run(cfg: &ExperimentConfig) -> Timed {
    let start = Instant::now();
    let report = run(cfg).expect("experiment runs");
    Timed {
        report,
        elapsed: start.elapsed(),
    }
}

pub fn doubling_config(a: f64) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::defaults(Experiment::Doubling);
    cfg.potential = PotentialSpec::ArcIndicator { a };
    cfg
}

/// The default doubling run with `f = 0`, shared by every check that reads it.
pub fn doubling_flat() -> &'static Timed {
    static RUN: OnceLock<Timed> = OnceLock::new();
    RUN.get_or_init(|| timed_run(&doubling_config(0.0)))
}

/// The default doubling run with `f` the upper-arc indicator.
pub fn doubling_arc() -> &'static Timed {
    static RUN: OnceLock<Timed> = OnceLock::new();
    RUN.get_or_init(|| timed_run(&doubling_config(1.0)))
}

pub fn finite_vp() -> &'static Timed {
    static RUN: OnceLock<Timed> = OnceLock::new();
    RUN.get_or_init(|| timed_run(&ExperimentConfig::defaults(Experiment::FiniteVp)))
}

pub fn random_map(rng: &mut impl Rng, m: usize) -> Vec<u32> {
    (0..m).map(|_| rng.gen_range(0..m as u32)).collect()
}

/// One map on up to `max_states` states, or a product of two small maps.
pub fn random_system(rng: &mut impl Rng, dims: usize, max_states: usize) -> FiniteSystem {
    if dims == 1 {
        let m = rng.gen_range(2..=max_states);
        return FiniteSystem::new(m, vec![random_map(rng, m)], &[]).unwrap();
    }
    let m1 = rng.gen_range(2..=3);
    let m2 = rng.gen_range(2..=3);
    let (a, b) = (random_map(rng, m1), random_map(rng, m2));
    let m = m1 * m2;
    let g1 = (0..m).map(|x| (a[x / m2] as usize * m2 + x % m2) as u32).collect();
    let g2 = (0..m).map(|x| ((x / m2) * m2 + b[x % m2] as usize) as u32).collect();
    FiniteSystem::new(m, vec![g1, g2], &[]).unwrap()
}

pub fn random_labels(rng: &mut impl Rng, m: usize, k: usize) -> Vec<u32> {
    (0..m).map(|_| rng.gen_range(0..k as u32)).collect()
}

pub fn random_partition(rng: &mut impl Rng, m: usize, k: usize) -> SetFamily {
    SetFamily::from_labels(&random_labels(rng, m, k))
}

pub fn random_cover(rng: &mut impl Rng, m: usize, k: usize) -> SetFamily {
    let mut sets: Vec<Vec<usize>> = (0..k)
        .map(|_| (0..m).filter(|_| rng.gen_bool(0.4)).collect())
        .collect();
    for x in 0..m {
        if !sets.iter().any(|s| s.contains(&x)) {
            let i = rng.gen_range(0..k);
            sets[i].push(x);
        }
    }
    SetFamily::cover(m, sets).unwrap()
}

pub fn random_potential(rng: &mut impl Rng, m: usize) -> Potential {
    Potential::new((0..m).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap()
}

pub fn random_box(rng: &mut impl Rng, dims: usize, max: u64) -> LatticePoint {
    LatticePoint::new((0..dims).map(|_| rng.gen_range(1..=max)).collect::<Vec<_>>())
}

pub fn random_probability(rng: &mut impl Rng, m: usize) -> FiniteMeasure {
    let w: Vec<f64> = (0..m)
        .map(|_| if rng.gen_bool(0.2) { 0.0 } else { rng.gen_range(0.0..1.0) })
        .collect();
    let w = if w.iter().sum::<f64>() > 0.0 { w } else { vec![1.0; m] };
    FiniteMeasure::new(w).unwrap().normalized().unwrap()
}

/// Random mass pushed past every tail and averaged over a full period box.
pub fn invariant_measure(rng: &mut impl Rng, sys: &FiniteSystem) -> FiniteMeasure {
    let mut tails = Vec::new();
    let mut periods = Vec::new();
    for g in sys.generators() {
        let single = FiniteSystem::new(sys.state_count(), vec![g.clone()], &[]).unwrap();
        let (tail, lcm) = single.eventual_period().unwrap();
        tails.push(tail);
        periods.push(lcm);
    }
    let mu = random_probability(rng, sys.state_count());
    let mu = pushforward(&mu, sys, &LatticePoint::new(tails)).unwrap();
    let boxes = enumerate_box(&LatticePoint::new(periods)).unwrap();
    let mut w = vec![0.0; sys.state_count()];
    for k in &boxes {
        for (acc, x) in w.iter_mut().zip(pushforward(&mu, sys, k).unwrap().weights()) {
            *acc += x;
        }
    }
    FiniteMeasure::new(w.into_iter().map(|x| x / boxes.len() as f64).collect()).unwrap()
}

/// `T^k x` by stepping each generator `k_j` times.
pub fn step(sys: &FiniteSystem, k: &LatticePoint, mut x: usize) -> usize {
    for (j, &times) in k.coords().iter().enumerate() {
        for _ in 0..times {
            x = sys.generator(j)[x] as usize;
        }
    }
    x
}

/// `f_n(x)` summed point by point.
pub fn birkhoff(sys: &FiniteSystem, f: &Potential, n: &LatticePoint, x: usize) -> f64 {
    enumerate_box(n).unwrap().iter().map(|k| f.value(step(sys, k, x))).sum()
}

/// `sum p ln(1/p)` over the blocks of `labels`.
pub fn entropy_of_labels(weights: &[f64], labels: &[u32]) -> f64 {
    let mut mass = std::collections::BTreeMap::<u32, f64>::new();
    for (w, l) in weights.iter().zip(labels) {
        *mass.entry(*l).or_default() += w;
    }
    mass.values().filter(|&&p| p > 0.0).map(|p| -p * p.ln()).sum()
}

pub fn log_sum_exp(values: &[f64]) -> f64 {
    let top = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return top;
    }
    top + values.iter().map(|v| (v - top).exp()).sum::<f64>().ln()
}

pub fn brute_min_cover(universe: usize, sets: &[Vec<u32>], weights: &[f64]) -> f64 {
    let k = sets.len();
    let mut best = f64::INFINITY;
    for mask in 0u32..(1 << k) {
        let mut hit = vec![false; universe];
        let mut w = 0.0;
        for i in (0..k).filter(|i| mask >> i & 1 == 1) {
            w += weights[i];
            for &e in &sets[i] {
                hit[e as usize] = true;
            }
        }
        if hit.iter().all(|&h| h) {
            best = best.min(w);
        }
    }
    best
}

pub fn brute_mwis(weights: &[f64], edges: &[(usize, usize)]) -> f64 {
    let n = weights.len();
    let mut best = 0.0f64;
    for mask in 0u32..(1 << n) {
        if edges.iter().any(|&(a, b)| mask >> a & 1 == 1 && mask >> b & 1 == 1) {
            continue;
        }
        best = best.max((0..n).filter(|&i| mask >> i & 1 == 1).map(|i| weights[i]).sum());
    }
    best
}

pub fn brute_mwds(weights: &[f64], edges: &[(usize, usize)]) -> f64 {
    let n = weights.len();
    let mut best = f64::INFINITY;
    for mask in 1u32..(1 << n) {
        let mut hit: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
        for &(a, b) in edges {
            if mask >> a & 1 == 1 {
                hit[b] = true;
            }
            if mask >> b & 1 == 1 {
                hit[a] = true;
            }
        }
        if hit.iter().all(|&h| h) {
            best = best.min((0..n).filter(|&i| mask >> i & 1 == 1).map(|i| weights[i]).sum());
        }
    }
    best
}

pub fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    edges
}
