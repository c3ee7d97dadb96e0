//! Finite measures, partition entropy and measure pressure.

use std::io::Read;

use crate::covers::{classify_admissible_partition, orbit_join, orbit_join_over, JoinBudget, SetFamily};
use crate::dynsys::{FiniteSystem, Potential};
use crate::error::{domain, precondition, Error, Result};
use crate::lattice::{enumerate_box, LatticePoint};
use crate::solver::SolveStatus;
use crate::topological::{log_sum_exp, rate_sequence, PressureEstimate, PressureSample};

/// A finite measure on the states, not necessarily of mass one.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteMeasure {
    weights: Vec<f64>,
    mass: f64,
}

impl FiniteMeasure {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if let Some(i) = weights.iter().position(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(domain(format!("weight at state {i} must be finite and non-negative")));
        }
        let mass = weights.iter().sum();
        Ok(FiniteMeasure { weights, mass })
    }

    pub fn dirac(state_count: usize, x: usize) -> Result<Self> {
        Self::uniform_on(state_count, &[x])
    }

    /// Probability spread evenly over `states`.
    pub fn uniform_on(state_count: usize, states: &[usize]) -> Result<Self> {
        if states.is_empty() {
            return Err(domain("support must be nonempty"));
        }
        let mut w = vec![0.0; state_count];
        for &x in states {
            if x >= state_count {
                return Err(domain(format!("state {x} out of range")));
            }
            w[x] += 1.0 / states.len() as f64;
        }
        Self::new(w)
    }

    pub fn uniform(state_count: usize) -> Result<Self> {
        Self::new(vec![1.0 / state_count as f64; state_count])
    }

    /// Reads `state,weight` lines; a header line is skipped if it does not parse.
    pub fn from_csv(reader: impl Read, state_count: usize) -> Result<Self> {
        let mut text = String::new();
        let mut reader = reader;
        reader
            .read_to_string(&mut text)
            .map_err(|e| domain(format!("reading measure: {e}")))?;
        let mut w = vec![0.0; state_count];
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split(',');
            let (s, v) = (parts.next().unwrap_or(""), parts.next().unwrap_or(""));
            match (s.trim().parse::<usize>(), v.trim().parse::<f64>()) {
                (Ok(x), Ok(v)) => {
                    if x >= state_count {
                        return Err(domain(format!("line {}: state {x} out of range", i + 1)));
                    }
                    w[x] += v;
                }
                _ if i == 0 => continue,
                _ => return Err(domain(format!("line {}: expected state,weight", i + 1))),
            }
        }
        Self::new(w)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, x: usize) -> f64 {
        self.weights[x]
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn scaled(&self, alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(domain(format!("scale {alpha} must be finite and non-negative")));
        }
        Self::new(self.weights.iter().map(|w| w * alpha).collect())
    }

    pub fn normalized(&self) -> Result<Self> {
        if self.mass <= 0.0 {
            return Err(domain("cannot normalize the zero measure"));
        }
        self.scaled(1.0 / self.mass)
    }

    pub fn integral(&self, f: &Potential) -> Result<f64> {
        if f.len() != self.len() {
            return Err(domain("potential and measure differ in length"));
        }
        Ok(self.weights.iter().zip(f.values()).map(|(w, v)| w * v).sum())
    }

    fn of_set(&self, set: &[u32]) -> f64 {
        set.iter().map(|&x| self.weights[x as usize]).sum()
    }
}

fn check_measure(mu: &FiniteMeasure, sys: &FiniteSystem) -> Result<()> {
    if mu.len() != sys.state_count() {
        return Err(domain(format!(
            "measure has {} states, system has {}",
            mu.len(),
            sys.state_count()
        )));
    }
    Ok(())
}

/// `mu o T^{-k}`.
pub fn pushforward(mu: &FiniteMeasure, sys: &FiniteSystem, k: &LatticePoint) -> Result<FiniteMeasure> {
    check_measure(mu, sys)?;
    let map = sys.power_map(k)?;
    let mut w = vec![0.0; mu.len()];
    for (x, &y) in map.iter().enumerate() {
        w[y as usize] += mu.weights[x];
    }
    FiniteMeasure::new(w)
}

/// `sum |a(x) - b(x)|`, the total-variation norm of `a - b`.
pub fn total_variation(a: &FiniteMeasure, b: &FiniteMeasure) -> Result<f64> {
    if a.len() != b.len() {
        return Err(domain("measures differ in length"));
    }
    Ok(a.weights.iter().zip(&b.weights).map(|(x, y)| (x - y).abs()).sum())
}

pub fn is_invariant(mu: &FiniteMeasure, sys: &FiniteSystem, tol: f64) -> Result<bool> {
    for j in 0..sys.dim() {
        let push = pushforward(mu, sys, &LatticePoint::unit(sys.dim(), j))?;
        if total_variation(&push, mu)? > tol {
            return Ok(false);
        }
    }
    Ok(true)
}

fn xlog1x(m: f64) -> f64 {
    if m > 0.0 {
        -m * m.ln()
    } else {
        0.0
    }
}

fn require_partition(c: &SetFamily, mu: &FiniteMeasure) -> Result<()> {
    if !c.is_partition() {
        return Err(precondition("entropy needs a partition"));
    }
    if c.state_count() != mu.len() {
        return Err(domain("partition and measure differ in length"));
    }
    Ok(())
}

/// `sum over cells of mu(C) ln(1/mu(C))`, with `0 ln(1/0) = 0`.
pub fn partition_entropy(mu: &FiniteMeasure, c: &SetFamily) -> Result<f64> {
    require_partition(c, mu)?;
    let mut masses: Vec<f64> = c.members().iter().map(|s| mu.of_set(s)).collect();
    masses.sort_by(f64::total_cmp);
    Ok(masses.into_iter().map(xlog1x).sum())
}

fn require_probability(mu: &FiniteMeasure) -> Result<()> {
    if (mu.mass - 1.0).abs() > 1e-9 {
        return Err(precondition(format!("probability measure required, mass is {}", mu.mass)));
    }
    Ok(())
}

/// `H(C | D)`, the average over cells of `D` of the entropy of `C` under the
/// conditional measure.
pub fn conditional_entropy(mu: &FiniteMeasure, c: &SetFamily, d: &SetFamily) -> Result<f64> {
    require_probability(mu)?;
    require_partition(c, mu)?;
    require_partition(d, mu)?;
    let lc = c.labels().unwrap();
    let mut h = 0.0;
    for cell in d.members() {
        let md = mu.of_set(cell);
        if md <= 0.0 {
            continue;
        }
        let mut parts: std::collections::BTreeMap<u32, f64> = Default::default();
        for &x in cell {
            *parts.entry(lc[x as usize]).or_default() += mu.weights[x as usize];
        }
        let inner: f64 = parts.values().map(|&m| xlog1x(m / md)).sum();
        h += md * inner;
    }
    Ok(h)
}

/// `H(C^n)` for each box, with rates `H(C^n) / lambda(n)`.
///
/// Samples store `H` as their logarithmic value, so the raw value is `e^H`.
pub fn entropy_rate(
    mu: &FiniteMeasure,
    sys: &FiniteSystem,
    c: &SetFamily,
    n_values: &[LatticePoint],
    budget: JoinBudget,
) -> Result<PressureEstimate> {
    check_measure(mu, sys)?;
    require_partition(c, mu)?;
    let mut samples = Vec::with_capacity(n_values.len());
    for n in n_values {
        let joined = orbit_join(sys, c, n, budget)?;
        let h = partition_entropy(mu, &joined)?;
        samples.push(PressureSample::new(n.clone(), h, SolveStatus::Exact)?);
    }
    rate_sequence(samples, true)
}

/// Entropy rate limit from the increments `H(C^{n'}) - H(C^n)` between the last
/// two boxes. For one map this is `H(C | T^{-1} C^n)`, which decreases to the
/// entropy of `C` and vanishes once the itinerary partition stops refining.
pub fn entropy_limit(est: &PressureEstimate) -> f64 {
    est.tail_slope.unwrap_or(est.extrapolated).max(0.0)
}

#[derive(Clone, Debug, PartialEq)]
pub enum KsStrategy {
    /// Every partition of the state set; needs `M <= cap`.
    Exhaustive { cap: usize },
    /// Partitions with at most one cell meeting the marked set; needs `M <= cap`.
    AdmissibleOnly { cap: usize },
    Fixed(SetFamily),
}

#[derive(Clone, Debug, PartialEq)]
pub struct KsOptions {
    pub strategy: KsStrategy,
    /// Diagonal boxes `1..=t_max`; the entropy limit uses the last two.
    pub t_max: u64,
    pub budget: JoinBudget,
}

impl KsOptions {
    pub fn fixed(c: SetFamily, t_max: u64) -> Self {
        KsOptions {
            strategy: KsStrategy::Fixed(c),
            t_max,
            budget: JoinBudget::default(),
        }
    }

    pub fn exhaustive(t_max: u64) -> Self {
        KsOptions {
            strategy: KsStrategy::Exhaustive { cap: 8 },
            t_max,
            budget: JoinBudget::default(),
        }
    }
}

/// All set partitions of `0..m` as label vectors, in restricted-growth order.
pub fn all_partitions(m: usize) -> Vec<Vec<u32>> {
    fn go(m: usize, cur: &mut Vec<u32>, max: u32, out: &mut Vec<Vec<u32>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        let top = if cur.is_empty() { 0 } else { max + 1 };
        for l in 0..=top {
            cur.push(l);
            go(m, cur, max.max(l), out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if m > 0 {
        go(m, &mut Vec::with_capacity(m), 0, &mut out);
    }
    out
}

/// Supremum of partition entropy limits over the strategy's class.
pub fn ks_entropy(mu: &FiniteMeasure, sys: &FiniteSystem, opts: &KsOptions) -> Result<f64> {
    check_measure(mu, sys)?;
    if !is_invariant(mu, sys, 1e-9)? {
        return Err(precondition("entropy of a non-invariant measure"));
    }
    if opts.t_max < 2 {
        return Err(domain("entropy limits need at least two boxes"));
    }
    let boxes: Vec<LatticePoint> = (1..=opts.t_max)
        .map(|t| LatticePoint::diagonal(sys.dim(), t))
        .collect();
    let m = sys.state_count();
    let class: Vec<SetFamily> = match &opts.strategy {
        KsStrategy::Fixed(c) => vec![c.clone()],
        KsStrategy::Exhaustive { cap } | KsStrategy::AdmissibleOnly { cap } => {
            if m > *cap {
                return Err(Error::Budget {
                    what: "states for partition enumeration",
                    needed: m as u64,
                    limit: *cap as u64,
                });
            }
            let admissible_only = matches!(opts.strategy, KsStrategy::AdmissibleOnly { .. });
            let mut class = Vec::new();
            for labels in all_partitions(m) {
                let p = SetFamily::from_labels(&labels);
                if admissible_only && !classify_admissible_partition(sys, &p)?.is_admissible_partition {
                    continue;
                }
                class.push(p);
            }
            class
        }
    };
    let mut best = 0.0f64;
    for c in &class {
        let est = entropy_rate(mu, sys, c, &boxes, opts.budget)?;
        best = best.max(entropy_limit(&est));
    }
    Ok(best)
}

/// `h_mu + integral of f`.
pub fn measure_pressure(mu: &FiniteMeasure, sys: &FiniteSystem, f: &Potential, opts: &KsOptions) -> Result<f64> {
    Ok(ks_entropy(mu, sys, opts)? + mu.integral(f)?)
}

/// `sigma_n` (weights proportional to `e^{f_n}` on `E`) and its box average `mu_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalMeasures {
    pub sigma: FiniteMeasure,
    pub mu: FiniteMeasure,
    /// `ln S_n`, `S_n = sum over E of e^{f_n}`.
    pub log_normalizer: f64,
    pub n: LatticePoint,
}

pub fn empirical_measures(
    sys: &FiniteSystem,
    f: &Potential,
    n: &LatticePoint,
    e: &[usize],
) -> Result<EmpiricalMeasures> {
    if e.is_empty() {
        return Err(domain("the point set must be nonempty"));
    }
    let m = sys.state_count();
    if let Some(&x) = e.iter().find(|&&x| x >= m) {
        return Err(domain(format!("state {x} out of range")));
    }
    let fsum = sys.birkhoff_sums(f, n)?;
    let lws: Vec<f64> = e.iter().map(|&x| fsum[x]).collect();
    let log_normalizer = log_sum_exp(&lws);
    let mut sigma = vec![0.0; m];
    for (&x, lw) in e.iter().zip(&lws) {
        sigma[x] += (lw - log_normalizer).exp();
    }
    let sigma = FiniteMeasure::new(sigma)?;
    let pts = enumerate_box(n)?;
    let mut mu = vec![0.0; m];
    for k in &pts {
        let push = pushforward(&sigma, sys, k)?;
        for (acc, w) in mu.iter_mut().zip(push.weights()) {
            *acc += w;
        }
    }
    let lambda = pts.len() as f64;
    let mu = FiniteMeasure::new(mu.into_iter().map(|w| w / lambda).collect())?;
    Ok(EmpiricalMeasures {
        sigma,
        mu,
        log_normalizer,
        n: n.clone(),
    })
}

/// `|| mu_n o T^{-m} - mu_n ||` in total variation.
pub fn invariance_defect(em: &EmpiricalMeasures, sys: &FiniteSystem, m: &LatticePoint) -> Result<f64> {
    total_variation(&pushforward(&em.mu, sys, m)?, &em.mu)
}

#[derive(Clone, Debug, PartialEq)]
pub enum LinkCheck {
    Applicable {
        log_normalizer: f64,
        entropy: f64,
        /// `integral of f_n d sigma_n`.
        integral: f64,
        /// `integral of f_n d sigma_n / lambda(n)`.
        transport_lhs: f64,
        /// `integral of f d mu_n`.
        transport_rhs: f64,
        holds: bool,
    },
    /// Some cell of `Z^n` holds more than one point of `E`.
    Inapplicable { cell: usize, points: usize },
}

/// Checks `ln S_n = H_{sigma_n}(Z^n) + integral of f_n d sigma_n` and the transport identity.
pub fn separated_entropy_link_check(
    sys: &FiniteSystem,
    f: &Potential,
    a: &SetFamily,
    n: &LatticePoint,
    e: &[usize],
    z: &SetFamily,
    budget: JoinBudget,
) -> Result<LinkCheck> {
    if !z.is_partition() {
        return Err(precondition("the refining family must be a partition"));
    }
    if !crate::covers::refines(z, a)? {
        return Err(precondition("the partition must refine the cover"));
    }
    let graph = crate::covers::closeness_graph(sys, a, n, budget)?;
    if !graph.is_separated(e) {
        return Err(precondition("the point set is not separated"));
    }
    let zn = orbit_join_over(sys, z, &enumerate_box(n)?, budget)?;
    let labels = zn.labels().expect("joins of partitions are partitions");
    let mut counts = vec![0usize; zn.len()];
    for &x in e {
        counts[labels[x] as usize] += 1;
    }
    if let Some((cell, &points)) = counts.iter().enumerate().find(|(_, &c)| c > 1) {
        return Ok(LinkCheck::Inapplicable { cell, points });
    }
    let em = empirical_measures(sys, f, n, e)?;
    let entropy = partition_entropy(&em.sigma, &zn)?;
    let fsum = sys.birkhoff_sums(f, n)?;
    let integral: f64 = e.iter().map(|&x| em.sigma.weight(x) * fsum[x]).sum();
    let lambda = n.lambda()? as f64;
    let transport_lhs = integral / lambda;
    let transport_rhs = em.mu.integral(f)?;
    let scale = 1.0 + em.log_normalizer.abs();
    let holds = (em.log_normalizer - entropy - integral).abs() <= 1e-9 * scale
        && (transport_lhs - transport_rhs).abs() <= 1e-9 * (1.0 + transport_rhs.abs());
    Ok(LinkCheck::Applicable {
        log_normalizer: em.log_normalizer,
        entropy,
        integral,
        transport_lhs,
        transport_rhs,
        holds,
    })
}
