//! Topological pressure from covers: minimal weighted subcovers (`Q`, `P`),
//! separated sets (`S`) and spanning sets (`G`).
//!
//! Weights `e^{f_n}` overflow quickly, so every quantity is carried as a
//! natural logarithm and solvers see weights rescaled around a reference.

use std::collections::HashMap;
use std::fmt;

use crate::covers::{
    classify_admissible, orbit_join, orbit_join_maximal, ClosenessGraph, JoinBudget, SetFamily,
};
use crate::dynsys::{FiniteSystem, Potential};
use crate::error::{domain, Result};
use crate::lattice::{decompose, LatticePoint};
use crate::solver::{
    max_weight_independent_set, min_subcover_with, SolveStatus, SolverLimits, WeightedCoverInstance,
    WeightedGraph,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    /// Subcover sum of the infimum of `e^{f_n}` over each member.
    Q,
    /// Subcover sum of the supremum.
    P,
    /// Maximal separated sum.
    S,
    /// Minimal spanning sum.
    G,
    /// Partition entropy, reported as `e^H`.
    Hrate,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Q => "Q",
            Mode::P => "P",
            Mode::S => "S",
            Mode::G => "G",
            Mode::Hrate => "Hrate",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PressureOptions {
    pub limits: SolverLimits,
    pub budget: JoinBudget,
    pub max_edges: usize,
    /// Accept covers without a member containing the marked set; diagnostic only.
    pub allow_non_admissible: bool,
    /// Also compute separated and spanning values in `topological_pressure`.
    pub point_sets: bool,
}

impl Default for PressureOptions {
    fn default() -> Self {
        PressureOptions {
            limits: SolverLimits::default(),
            budget: JoinBudget::default(),
            max_edges: 1 << 26,
            allow_non_admissible: false,
            point_sets: true,
        }
    }
}

/// One value `V_n`, held as `ln V_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct PressureSample {
    pub n: LatticePoint,
    pub lambda: u64,
    pub log_value: f64,
    pub status: SolveStatus,
}

impl PressureSample {
    pub fn new(n: LatticePoint, log_value: f64, status: SolveStatus) -> Result<Self> {
        let lambda = n.lambda()?;
        if lambda == 0 {
            return Err(domain("samples need a nonempty box"));
        }
        if !log_value.is_finite() {
            return Err(domain(format!("value at {n} is not a positive finite number")));
        }
        Ok(PressureSample {
            n,
            lambda,
            log_value,
            status,
        })
    }

    pub fn rate(&self) -> f64 {
        self.log_value / self.lambda as f64
    }

    /// `V_n` itself; infinite or zero once it leaves the f64 range.
    pub fn raw_value(&self) -> f64 {
        self.log_value.exp()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Extrapolation {
    /// The rate at the largest computed box.
    #[default]
    LastRate,
    /// Slope of `ln V` between the last two computed boxes.
    TailSlope,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PressureEstimate {
    pub samples: Vec<PressureSample>,
    /// Least rate over the samples; only meaningful for subadditive sequences.
    pub fekete_bound: Option<f64>,
    pub extrapolated: f64,
    pub tail_slope: Option<f64>,
}

impl PressureEstimate {
    pub fn limit(&self, how: Extrapolation) -> f64 {
        match how {
            Extrapolation::LastRate => self.extrapolated,
            Extrapolation::TailSlope => self.tail_slope.unwrap_or(self.extrapolated),
        }
    }

    pub fn all_exact(&self) -> bool {
        self.samples.iter().all(|s| s.status.is_exact())
    }
}

/// Rates of a sequence of values ordered by increasing box.
pub fn rate_sequence(samples: Vec<PressureSample>, subadditive: bool) -> Result<PressureEstimate> {
    let last = samples.last().ok_or_else(|| domain("rate sequence needs a sample"))?;
    let extrapolated = last.rate();
    let tail_slope = match samples.len() {
        0 | 1 => None,
        k => {
            let (a, b) = (&samples[k - 2], &samples[k - 1]);
            (b.lambda != a.lambda)
                .then(|| (b.log_value - a.log_value) / (b.lambda as f64 - a.lambda as f64))
        }
    };
    let fekete_bound = subadditive.then(|| {
        samples
            .iter()
            .map(|s| s.rate())
            .fold(f64::INFINITY, f64::min)
    });
    Ok(PressureEstimate {
        samples,
        fekete_bound,
        extrapolated,
        tail_slope,
    })
}

/// `ln` of the bound `P_n <= P_p^{|tiles|} P_1^{|residue|}` from tiling `[0,n)` by
/// translates of `[0,p)` anchored at the origin.
pub fn p_mode_log_bound(log_p1: f64, log_pp: f64, n: &LatticePoint, p: &LatticePoint) -> Result<f64> {
    let d = decompose(n, p, &LatticePoint::zero(n.dim()))?;
    Ok(d.tile_count() as f64 * log_pp + d.residue.len() as f64 * log_p1)
}

/// A value `V_n` with the certificate that attains it.
#[derive(Clone, Debug)]
pub struct CoverValue {
    pub sample: PressureSample,
    /// The family `A^n` the certificate indexes into (maximal members in `Q` mode).
    pub family: SetFamily,
    pub certificate: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct PointSetValue {
    pub sample: PressureSample,
    pub points: Vec<usize>,
}

fn group_by_signature(membership: &[Vec<u32>]) -> (Vec<Vec<u32>>, Vec<u32>) {
    let mut ids: HashMap<&[u32], u32> = HashMap::new();
    let mut reps: Vec<Vec<u32>> = Vec::new();
    let mut group_of = Vec::with_capacity(membership.len());
    for sig in membership {
        let id = *ids.entry(sig.as_slice()).or_insert_with(|| {
            reps.push(sig.clone());
            (reps.len() - 1) as u32
        });
        group_of.push(id);
    }
    (reps, group_of)
}

/// Minimal total of `e^{lw}` over covering subfamilies, as a logarithm.
///
/// Weights are rescaled by the largest per-element minimum; sets heavier than
/// the trivial feasible solution cannot be optimal and are dropped.
fn min_cover_log(
    universe: usize,
    sets: &[Vec<u32>],
    log_weights: &[f64],
    limits: &SolverLimits,
) -> Result<(f64, Vec<usize>, SolveStatus)> {
    let mut elem_min = vec![f64::INFINITY; universe];
    for (s, lw) in sets.iter().zip(log_weights) {
        for &e in s {
            elem_min[e as usize] = elem_min[e as usize].min(*lw);
        }
    }
    let shift = elem_min.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let ceiling = universe as f64 * 1.000001;
    let mut kept = Vec::new();
    let mut kept_sets = Vec::new();
    let mut weights = Vec::new();
    for (i, (s, lw)) in sets.iter().zip(log_weights).enumerate() {
        let w = (lw - shift).exp();
        if w <= ceiling {
            kept.push(i);
            kept_sets.push(s.clone());
            weights.push(w.max(f64::MIN_POSITIVE));
        }
    }
    let inst = WeightedCoverInstance::new(universe, kept_sets, weights)?;
    let sol = min_subcover_with(&inst, limits)?;
    let certificate: Vec<usize> = sol.certificate.iter().map(|&i| kept[i]).collect();
    // recompute in the log domain so tiny weights keep their precision
    let mut lws: Vec<f64> = certificate.iter().map(|&i| log_weights[i]).collect();
    lws.sort_by(f64::total_cmp);
    Ok((log_sum_exp(&lws), certificate, sol.status))
}

pub fn log_sum_exp(values: &[f64]) -> f64 {
    let m = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + values.iter().map(|v| (v - m).exp()).sum::<f64>().ln()
}

fn check_cover(sys: &FiniteSystem, a: &SetFamily, f: &Potential) -> Result<()> {
    if a.state_count() != sys.state_count() || f.len() != sys.state_count() {
        return Err(domain("cover, potential and system disagree on the state count"));
    }
    Ok(())
}

pub fn cover_pressure_value(
    sys: &FiniteSystem,
    f: &Potential,
    a: &SetFamily,
    n: &LatticePoint,
    mode: Mode,
    opts: &PressureOptions,
) -> Result<CoverValue> {
    check_cover(sys, a, f)?;
    let family = match mode {
        Mode::Q => orbit_join_maximal(sys, a, n, opts.budget)?,
        Mode::P => orbit_join(sys, a, n, opts.budget)?,
        other => return Err(domain(format!("mode {other} is not a subcover mode"))),
    };
    let fsum = sys.birkhoff_sums(f, n)?;
    let log_weights: Vec<f64> = family
        .members()
        .iter()
        .map(|s| {
            let vals = s.iter().map(|&x| fsum[x as usize]);
            if mode == Mode::Q {
                vals.fold(f64::INFINITY, f64::min)
            } else {
                vals.fold(f64::NEG_INFINITY, f64::max)
            }
        })
        .collect();
    let (groups, group_of) = group_by_signature(&family.membership());
    let mut sets: Vec<Vec<u32>> = vec![Vec::new(); family.len()];
    for (g, sig) in groups.iter().enumerate() {
        for &i in sig {
            sets[i as usize].push(g as u32);
        }
    }
    drop(group_of);
    let (log_value, certificate, status) = min_cover_log(groups.len(), &sets, &log_weights, &opts.limits)?;
    Ok(CoverValue {
        sample: PressureSample::new(n.clone(), log_value, status)?,
        family,
        certificate,
    })
}

fn closeness(sys: &FiniteSystem, a: &SetFamily, n: &LatticePoint, opts: &PressureOptions) -> Result<ClosenessGraph> {
    let family = orbit_join_maximal(sys, a, n, opts.budget)?;
    ClosenessGraph::from_family(family, opts.max_edges)
}

/// Largest `sum e^{f_n}` over sets with no two points in a common member of `A^n`.
pub fn separated_value(
    sys: &FiniteSystem,
    f: &Potential,
    a: &SetFamily,
    n: &LatticePoint,
    opts: &PressureOptions,
) -> Result<PointSetValue> {
    check_cover(sys, a, f)?;
    let graph = closeness(sys, a, n, opts)?;
    let fsum = sys.birkhoff_sums(f, n)?;
    // twins share neighborhoods, so only the heaviest state of a group matters
    let reps: Vec<usize> = graph
        .groups
        .iter()
        .map(|g| {
            let mut best = g[0] as usize;
            for &x in g {
                if fsum[x as usize] > fsum[best] {
                    best = x as usize;
                }
            }
            best
        })
        .collect();
    let lw: Vec<f64> = reps.iter().map(|&x| fsum[x]).collect();
    let shift = lw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let weights = lw.iter().map(|v| (v - shift).exp().max(f64::MIN_POSITIVE)).collect();
    let wg = WeightedGraph::from_adjacency(weights, graph.adjacency.clone())?;
    let sol = max_weight_independent_set(&wg, &opts.limits)?;
    let mut points: Vec<usize> = sol.vertices.iter().map(|&g| reps[g]).collect();
    points.sort_unstable();
    let mut lws: Vec<f64> = points.iter().map(|&x| fsum[x]).collect();
    lws.sort_by(f64::total_cmp);
    Ok(PointSetValue {
        sample: PressureSample::new(n.clone(), log_sum_exp(&lws), sol.status)?,
        points,
    })
}

/// Least `sum e^{f_n}` over sets meeting the closeness neighborhood of every state.
pub fn spanning_value(
    sys: &FiniteSystem,
    f: &Potential,
    a: &SetFamily,
    n: &LatticePoint,
    opts: &PressureOptions,
) -> Result<PointSetValue> {
    check_cover(sys, a, f)?;
    let graph = closeness(sys, a, n, opts)?;
    let fsum = sys.birkhoff_sums(f, n)?;
    let reps: Vec<usize> = graph
        .groups
        .iter()
        .map(|g| {
            let mut best = g[0] as usize;
            for &x in g {
                if fsum[x as usize] < fsum[best] {
                    best = x as usize;
                }
            }
            best
        })
        .collect();
    let comps = WeightedGraph::from_adjacency(vec![1.0; reps.len()], graph.adjacency.clone())?.components();
    let comp_limits = SolverLimits {
        exact_limit: opts.limits.graph_exact_limit,
        ..opts.limits
    };
    let mut points = Vec::new();
    let mut status = SolveStatus::Exact;
    for comp in comps {
        let local: HashMap<usize, u32> = comp.iter().enumerate().map(|(i, &g)| (g, i as u32)).collect();
        let sets: Vec<Vec<u32>> = comp
            .iter()
            .map(|&g| {
                std::iter::once(local[&g])
                    .chain(graph.adjacency[g].iter().map(|h| local[&(*h as usize)]))
                    .collect()
            })
            .collect();
        let lw: Vec<f64> = comp.iter().map(|&g| fsum[reps[g]]).collect();
        let (_, cert, st) = min_cover_log(comp.len(), &sets, &lw, &comp_limits)?;
        status = status.combine(st);
        points.extend(cert.iter().map(|&i| reps[comp[i]]));
    }
    points.sort_unstable();
    let mut lws: Vec<f64> = points.iter().map(|&x| fsum[x]).collect();
    lws.sort_by(f64::total_cmp);
    Ok(PointSetValue {
        sample: PressureSample::new(n.clone(), log_sum_exp(&lws), status)?,
        points,
    })
}

/// Rates of one cover across the requested boxes.
#[derive(Clone, Debug)]
pub struct CoverEstimates {
    pub admissible: bool,
    pub q: PressureEstimate,
    pub s: Option<PressureEstimate>,
    pub g: Option<PressureEstimate>,
}

#[derive(Clone, Debug)]
pub struct TopologicalPressure {
    pub estimate: f64,
    pub covers: Vec<CoverEstimates>,
}

/// The largest `Q` limit over the covers, with `S` and `G` alongside.
pub fn topological_pressure(
    sys: &FiniteSystem,
    f: &Potential,
    covers: &[SetFamily],
    n_values: &[LatticePoint],
    opts: &PressureOptions,
    how: Extrapolation,
) -> Result<TopologicalPressure> {
    if covers.is_empty() || n_values.is_empty() {
        return Err(domain("need at least one cover and one box"));
    }
    let mut out = Vec::with_capacity(covers.len());
    for (i, a) in covers.iter().enumerate() {
        let admissible = classify_admissible(sys, a)?.is_admissible;
        if !admissible && !opts.allow_non_admissible {
            return Err(domain(format!("cover {i} is not admissible")));
        }
        let mut q = Vec::new();
        let mut s = Vec::new();
        let mut g = Vec::new();
        for n in n_values {
            q.push(cover_pressure_value(sys, f, a, n, Mode::Q, opts)?.sample);
            if opts.point_sets {
                s.push(separated_value(sys, f, a, n, opts)?.sample);
                g.push(spanning_value(sys, f, a, n, opts)?.sample);
            }
        }
        out.push(CoverEstimates {
            admissible,
            q: rate_sequence(q, false)?,
            s: opts.point_sets.then(|| rate_sequence(s, false)).transpose()?,
            g: opts.point_sets.then(|| rate_sequence(g, false)).transpose()?,
        });
    }
    let estimate = out
        .iter()
        .map(|c| c.q.limit(how))
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(TopologicalPressure {
        estimate,
        covers: out,
    })
}

/// Boxes `(t, ..., t)` for `t = 1..=t_max`.
pub fn diagonal(dim: usize, t_max: u64) -> Vec<LatticePoint> {
    (1..=t_max).map(|t| LatticePoint::diagonal(dim, t)).collect()
}
