//! Weighted set cover, maximum-weight independent set and minimum-weight
//! dominating set, exact by branch and bound on small residual instances and
//! greedy otherwise.

use std::fmt;

use crate::bitset::Bits;
use crate::error::{domain, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SolveStatus {
    Exact,
    /// A feasible solution that may exceed the minimum.
    GreedyUpper,
    /// A feasible solution that may fall short of the maximum.
    GreedyLower,
}

impl SolveStatus {
    pub fn is_exact(self) -> bool {
        self == SolveStatus::Exact
    }

    /// The weaker of two statuses.
    pub fn combine(self, other: SolveStatus) -> SolveStatus {
        self.max(other)
    }
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolveStatus::Exact => "exact",
            SolveStatus::GreedyUpper => "greedy_upper",
            SolveStatus::GreedyLower => "greedy_lower",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolverLimits {
    /// Residual set-cover instances with at most this many sets are solved exactly.
    pub exact_limit: usize,
    /// Residual set-cover instances with at most this many elements are solved exactly.
    pub small_universe: usize,
    /// Graph components with at most this many vertices are solved exactly.
    pub graph_exact_limit: usize,
    /// Search nodes per exact solve before falling back to the incumbent.
    pub node_limit: u64,
}

impl Default for SolverLimits {
    fn default() -> Self {
        SolverLimits {
            exact_limit: 24,
            small_universe: 20,
            graph_exact_limit: 2000,
            node_limit: 5_000_000,
        }
    }
}

impl SolverLimits {
    pub fn with_exact_limit(exact_limit: usize) -> Self {
        SolverLimits {
            exact_limit,
            ..Self::default()
        }
    }
}

/// Minimize total weight over subfamilies covering `0..universe`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedCoverInstance {
    universe: usize,
    sets: Vec<Vec<u32>>,
    weights: Vec<f64>,
}

impl WeightedCoverInstance {
    pub fn new(universe: usize, sets: Vec<Vec<u32>>, weights: Vec<f64>) -> Result<Self> {
        if sets.len() != weights.len() {
            return Err(domain("one weight per set is required"));
        }
        if let Some(i) = weights.iter().position(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(domain(format!("weight {i} must be positive and finite")));
        }
        let mut covered = vec![false; universe];
        let mut clean = Vec::with_capacity(sets.len());
        for s in sets {
            let mut s = s;
            s.sort_unstable();
            s.dedup();
            for &e in &s {
                if e as usize >= universe {
                    return Err(domain(format!("element {e} outside the universe")));
                }
                covered[e as usize] = true;
            }
            clean.push(s);
        }
        if let Some(e) = covered.iter().position(|&c| !c) {
            return Err(domain(format!("instance does not cover element {e}")));
        }
        Ok(WeightedCoverInstance {
            universe,
            sets: clean,
            weights,
        })
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn sets(&self) -> &[Vec<u32>] {
        &self.sets
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Total weight of the given sets, summed in index order.
    pub fn weight_of(&self, chosen: &[usize]) -> f64 {
        let mut c = chosen.to_vec();
        c.sort_unstable();
        c.iter().map(|&i| self.weights[i]).sum()
    }

    pub fn is_cover(&self, chosen: &[usize]) -> bool {
        let mut hit = vec![false; self.universe];
        for &i in chosen {
            for &e in &self.sets[i] {
                hit[e as usize] = true;
            }
        }
        hit.iter().all(|&h| h)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoverSolution {
    pub value: f64,
    /// Chosen set indices, ascending.
    pub certificate: Vec<usize>,
    pub status: SolveStatus,
}

pub fn min_subcover_value(inst: &WeightedCoverInstance, exact_limit: usize) -> Result<CoverSolution> {
    Ok(solve_cover(inst, &SolverLimits::with_exact_limit(exact_limit)))
}

pub fn min_subcover_with(inst: &WeightedCoverInstance, limits: &SolverLimits) -> Result<CoverSolution> {
    Ok(solve_cover(inst, limits))
}

struct Reduction<'a> {
    inst: &'a WeightedCoverInstance,
    elem_sets: Vec<Vec<u32>>,
    set_alive: Vec<bool>,
    open: Vec<bool>,
    chosen: Vec<usize>,
}

impl<'a> Reduction<'a> {
    fn new(inst: &'a WeightedCoverInstance) -> Self {
        let mut elem_sets = vec![Vec::new(); inst.universe];
        for (i, s) in inst.sets.iter().enumerate() {
            for &e in s {
                elem_sets[e as usize].push(i as u32);
            }
        }
        Reduction {
            inst,
            elem_sets,
            set_alive: vec![true; inst.sets.len()],
            open: vec![true; inst.universe],
            chosen: Vec::new(),
        }
    }

    fn choose(&mut self, s: usize) {
        self.chosen.push(s);
        self.set_alive[s] = false;
        for &e in &self.inst.sets[s] {
            self.open[e as usize] = false;
        }
    }

    fn alive_sets_of(&self, e: usize) -> Vec<u32> {
        self.elem_sets[e]
            .iter()
            .copied()
            .filter(|&s| self.set_alive[s as usize])
            .collect()
    }

    fn open_part(&self, s: usize) -> Vec<u32> {
        self.inst.sets[s]
            .iter()
            .copied()
            .filter(|&e| self.open[e as usize])
            .collect()
    }

    fn forced(&mut self) -> bool {
        let mut changed = false;
        for e in 0..self.inst.universe {
            if !self.open[e] {
                continue;
            }
            let alive = self.alive_sets_of(e);
            if alive.len() == 1 {
                self.choose(alive[0] as usize);
                changed = true;
            }
        }
        changed
    }

    fn drop_useless(&mut self) -> bool {
        let mut changed = false;
        for s in 0..self.inst.sets.len() {
            if self.set_alive[s] && !self.inst.sets[s].iter().any(|&e| self.open[e as usize]) {
                self.set_alive[s] = false;
                changed = true;
            }
        }
        changed
    }

    fn dominated_sets(&mut self) -> bool {
        let alive: Vec<usize> = (0..self.inst.sets.len()).filter(|&s| self.set_alive[s]).collect();
        let open_elems: Vec<usize> = (0..self.inst.universe).filter(|&e| self.open[e]).collect();
        if (alive.len() as f64).powi(2) * (open_elems.len() as f64 / 64.0 + 1.0) > 5e7 {
            return false;
        }
        let mut index = vec![usize::MAX; self.inst.universe];
        for (i, &e) in open_elems.iter().enumerate() {
            index[e] = i;
        }
        let parts: Vec<Bits> = alive
            .iter()
            .map(|&s| Bits::from_indices(open_elems.len(), self.open_part(s).iter().map(|&e| index[e as usize])))
            .collect();
        let sizes: Vec<usize> = parts.iter().map(|p| p.count()).collect();
        let w = &self.inst.weights;
        let mut killed = vec![false; alive.len()];
        let mut changed = false;
        for a in 0..alive.len() {
            for b in 0..alive.len() {
                if a == b || killed[b] || killed[a] {
                    continue;
                }
                let (sa, sb) = (alive[a], alive[b]);
                if !parts[a].is_subset(&parts[b]) {
                    continue;
                }
                let better = w[sb] < w[sa]
                    || (w[sb] == w[sa] && (sizes[b] > sizes[a] || (sizes[b] == sizes[a] && sb < sa)));
                if better {
                    killed[a] = true;
                    self.set_alive[sa] = false;
                    changed = true;
                }
            }
        }
        changed
    }

    fn dominated_elements(&mut self) -> bool {
        let open_elems: Vec<usize> = (0..self.inst.universe).filter(|&e| self.open[e]).collect();
        if open_elems.len() > 600 {
            return false;
        }
        let alive: Vec<usize> = (0..self.inst.sets.len()).filter(|&s| self.set_alive[s]).collect();
        let mut index = vec![usize::MAX; self.inst.sets.len()];
        for (i, &s) in alive.iter().enumerate() {
            index[s] = i;
        }
        let sigs: Vec<Bits> = open_elems
            .iter()
            .map(|&e| Bits::from_indices(alive.len(), self.alive_sets_of(e).iter().map(|&s| index[s as usize])))
            .collect();
        let mut closed = vec![false; open_elems.len()];
        let mut changed = false;
        for a in 0..open_elems.len() {
            for b in 0..open_elems.len() {
                if a == b || closed[a] || closed[b] {
                    continue;
                }
                // b is implied by a when every set covering a also covers b
                if sigs[a].is_subset(&sigs[b]) && (sigs[a] != sigs[b] || a < b) {
                    closed[b] = true;
                    self.open[open_elems[b]] = false;
                    changed = true;
                }
            }
        }
        changed
    }

    fn run(&mut self) {
        loop {
            let mut changed = self.forced();
            changed |= self.drop_useless();
            changed |= self.dominated_sets();
            changed |= self.dominated_elements();
            if !changed {
                break;
            }
        }
    }
}

fn solve_cover(inst: &WeightedCoverInstance, limits: &SolverLimits) -> CoverSolution {
    let mut red = Reduction::new(inst);
    red.run();
    let open_elems: Vec<usize> = (0..inst.universe).filter(|&e| red.open[e]).collect();
    let mut status = SolveStatus::Exact;
    let mut chosen = red.chosen.clone();
    if !open_elems.is_empty() {
        let alive: Vec<usize> = (0..inst.sets.len()).filter(|&s| red.set_alive[s]).collect();
        let mut index = vec![usize::MAX; inst.universe];
        for (i, &e) in open_elems.iter().enumerate() {
            index[e] = i;
        }
        let sets: Vec<Bits> = alive
            .iter()
            .map(|&s| Bits::from_indices(open_elems.len(), red.open_part(s).iter().map(|&e| index[e as usize])))
            .collect();
        let weights: Vec<f64> = alive.iter().map(|&s| inst.weights[s]).collect();
        let residual = Residual::new(sets, weights);
        let greedy = residual.greedy();
        let exact_ok = alive.len() <= limits.exact_limit || open_elems.len() <= limits.small_universe;
        let picked = if exact_ok {
            let (sol, complete) = residual.branch_and_bound(greedy, limits.node_limit);
            if !complete {
                status = SolveStatus::GreedyUpper;
            }
            sol
        } else {
            status = SolveStatus::GreedyUpper;
            greedy
        };
        chosen.extend(picked.iter().map(|&i| alive[i]));
    }
    chosen.sort_unstable();
    CoverSolution {
        value: inst.weight_of(&chosen),
        certificate: chosen,
        status,
    }
}

struct Residual {
    sets: Vec<Bits>,
    weights: Vec<f64>,
    elem_sets: Vec<Vec<usize>>,
    universe: usize,
}

impl Residual {
    fn new(sets: Vec<Bits>, weights: Vec<f64>) -> Self {
        let universe = sets.first().map_or(0, |s| s.len());
        let mut elem_sets = vec![Vec::new(); universe];
        for (i, s) in sets.iter().enumerate() {
            for e in s.iter() {
                elem_sets[e].push(i);
            }
        }
        Residual {
            sets,
            weights,
            elem_sets,
            universe,
        }
    }

    fn cost(&self, chosen: &[usize]) -> f64 {
        let mut c = chosen.to_vec();
        c.sort_unstable();
        c.iter().map(|&i| self.weights[i]).sum()
    }

    /// Best ratio first, then reverse deletion of redundant sets.
    fn greedy(&self) -> Vec<usize> {
        let mut uncovered = Bits::full(self.universe);
        let mut chosen = Vec::new();
        while !uncovered.is_empty() {
            let mut best: Option<(f64, usize)> = None;
            for (i, s) in self.sets.iter().enumerate() {
                let gain = s.intersection_count(&uncovered);
                if gain == 0 {
                    continue;
                }
                let ratio = self.weights[i] / gain as f64;
                if best.is_none_or(|(r, _)| ratio < r) {
                    best = Some((ratio, i));
                }
            }
            let (_, i) = best.expect("residual instance covers its universe");
            uncovered = uncovered.and_not(&self.sets[i]);
            chosen.push(i);
        }
        let mut order = chosen.clone();
        order.sort_by(|&a, &b| self.weights[b].total_cmp(&self.weights[a]).then(b.cmp(&a)));
        for s in order {
            let others: Vec<usize> = chosen.iter().copied().filter(|&c| c != s).collect();
            let mut union = Bits::new(self.universe);
            for &o in &others {
                union.union_with(&self.sets[o]);
            }
            if union.count() == self.universe {
                chosen = others;
            }
        }
        chosen.sort_unstable();
        chosen
    }

    fn lower_bound(&self, uncovered: &Bits, allowed: &Bits) -> f64 {
        let mut density = 0.0;
        let mut single = 0.0f64;
        for e in uncovered.iter() {
            let mut best_density = f64::INFINITY;
            let mut best_weight = f64::INFINITY;
            for &s in &self.elem_sets[e] {
                if !allowed.contains(s) {
                    continue;
                }
                let gain = self.sets[s].intersection_count(uncovered) as f64;
                best_density = best_density.min(self.weights[s] / gain);
                best_weight = best_weight.min(self.weights[s]);
            }
            if best_weight.is_infinite() {
                return f64::INFINITY;
            }
            density += best_density;
            single = single.max(best_weight);
        }
        density.max(single)
    }

    /// Returns the best cover found and whether the search ran to completion.
    fn branch_and_bound(&self, incumbent: Vec<usize>, node_limit: u64) -> (Vec<usize>, bool) {
        let mut search = CoverSearch {
            r: self,
            best_cost: self.cost(&incumbent),
            best: incumbent,
            nodes: 0,
            node_limit,
            aborted: false,
            path: Vec::new(),
        };
        let allowed = Bits::full(self.sets.len());
        search.descend(Bits::full(self.universe), allowed, 0.0);
        let mut best = search.best;
        best.sort_unstable();
        (best, !search.aborted)
    }
}

struct CoverSearch<'a> {
    r: &'a Residual,
    best: Vec<usize>,
    best_cost: f64,
    nodes: u64,
    node_limit: u64,
    aborted: bool,
    path: Vec<usize>,
}

impl CoverSearch<'_> {
    fn descend(&mut self, uncovered: Bits, mut allowed: Bits, cost: f64) {
        if self.aborted {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.node_limit {
            self.aborted = true;
            return;
        }
        if uncovered.is_empty() {
            let exact_cost = self.r.cost(&self.path);
            if exact_cost < self.best_cost {
                self.best_cost = exact_cost;
                self.best = self.path.clone();
            }
            return;
        }
        if cost + self.r.lower_bound(&uncovered, &allowed) >= self.best_cost {
            return;
        }
        // branch on the uncovered element with fewest admissible sets
        let mut pivot = None;
        let mut fewest = usize::MAX;
        for e in uncovered.iter() {
            let c = self.r.elem_sets[e].iter().filter(|&&s| allowed.contains(s)).count();
            if c < fewest {
                fewest = c;
                pivot = Some(e);
            }
        }
        let e = pivot.unwrap();
        let mut cands: Vec<(f64, usize)> = self.r.elem_sets[e]
            .iter()
            .copied()
            .filter(|&s| allowed.contains(s))
            .map(|s| {
                let gain = self.r.sets[s].intersection_count(&uncovered) as f64;
                (self.r.weights[s] / gain, s)
            })
            .collect();
        cands.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        for (_, s) in cands {
            self.path.push(s);
            self.descend(uncovered.and_not(&self.r.sets[s]), allowed.clone(), cost + self.r.weights[s]);
            self.path.pop();
            // later branches never use s
            allowed.remove(s);
            if self.aborted {
                return;
            }
        }
    }
}

/// Undirected simple graph with positive vertex weights.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedGraph {
    weights: Vec<f64>,
    adjacency: Vec<Vec<u32>>,
}

impl WeightedGraph {
    pub fn new(weights: Vec<f64>, edges: &[(usize, usize)]) -> Result<Self> {
        let n = weights.len();
        let mut adjacency = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(domain(format!("edge ({a},{b}) out of range")));
            }
            if a != b {
                adjacency[a].push(b as u32);
                adjacency[b].push(a as u32);
            }
        }
        Self::from_adjacency(weights, adjacency)
    }

    pub fn from_adjacency(weights: Vec<f64>, mut adjacency: Vec<Vec<u32>>) -> Result<Self> {
        if let Some(i) = weights.iter().position(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(domain(format!("vertex weight {i} must be positive and finite")));
        }
        if adjacency.len() != weights.len() {
            return Err(domain("adjacency and weights differ in length"));
        }
        for (v, a) in adjacency.iter_mut().enumerate() {
            a.retain(|&u| u as usize != v);
            a.sort_unstable();
            a.dedup();
        }
        for (v, a) in adjacency.iter().enumerate() {
            for &u in a {
                if u as usize >= weights.len() || adjacency[u as usize].binary_search(&(v as u32)).is_err() {
                    return Err(domain(format!("adjacency is not symmetric at ({v},{u})")));
                }
            }
        }
        Ok(WeightedGraph { weights, adjacency })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adjacency[v]
    }

    pub fn weight_of(&self, vertices: &[usize]) -> f64 {
        let mut v = vertices.to_vec();
        v.sort_unstable();
        v.iter().map(|&i| self.weights[i]).sum()
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        set.iter()
            .all(|&v| self.adjacency[v].iter().all(|&u| !set.contains(&(u as usize))))
    }

    pub fn is_dominating(&self, set: &[usize]) -> bool {
        let mut hit = vec![false; self.len()];
        for &v in set {
            hit[v] = true;
            for &u in &self.adjacency[v] {
                hit[u as usize] = true;
            }
        }
        hit.iter().all(|&h| h)
    }

    /// Connected components, each ascending, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut comps = Vec::new();
        for s in 0..self.len() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                i += 1;
                for &u in &self.adjacency[v] {
                    if !seen[u as usize] {
                        seen[u as usize] = true;
                        comp.push(u as usize);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GraphSolution {
    pub value: f64,
    /// Chosen vertices, ascending.
    pub vertices: Vec<usize>,
    pub status: SolveStatus,
}

pub fn max_weight_independent_set(g: &WeightedGraph, limits: &SolverLimits) -> Result<GraphSolution> {
    let mut chosen = Vec::new();
    let mut status = SolveStatus::Exact;
    for comp in g.components() {
        let (picked, exact) = if comp.len() == 1 {
            (comp.clone(), true)
        } else if comp.len() <= limits.graph_exact_limit {
            mwis_component(g, &comp, limits.node_limit)
        } else {
            (mwis_greedy(g, &comp), false)
        };
        if !exact {
            status = SolveStatus::GreedyLower;
        }
        chosen.extend(picked);
    }
    chosen.sort_unstable();
    Ok(GraphSolution {
        value: g.weight_of(&chosen),
        vertices: chosen,
        status,
    })
}

fn by_weight_desc(g: &WeightedGraph, comp: &[usize]) -> Vec<usize> {
    let mut order = comp.to_vec();
    order.sort_by(|&a, &b| g.weights[b].total_cmp(&g.weights[a]).then(a.cmp(&b)));
    order
}

fn mwis_greedy(g: &WeightedGraph, comp: &[usize]) -> Vec<usize> {
    let mut blocked = std::collections::HashSet::new();
    let mut picked = Vec::new();
    for v in by_weight_desc(g, comp) {
        if blocked.contains(&v) {
            continue;
        }
        picked.push(v);
        blocked.insert(v);
        blocked.extend(g.adjacency[v].iter().map(|&u| u as usize));
    }
    picked
}

fn mwis_component(g: &WeightedGraph, comp: &[usize], node_limit: u64) -> (Vec<usize>, bool) {
    let order = by_weight_desc(g, comp);
    let s = order.len();
    let mut local = std::collections::HashMap::new();
    for (i, &v) in order.iter().enumerate() {
        local.insert(v, i);
    }
    let adj: Vec<Bits> = order
        .iter()
        .map(|&v| Bits::from_indices(s, g.adjacency[v].iter().filter_map(|u| local.get(&(*u as usize)).copied())))
        .collect();
    let w: Vec<f64> = order.iter().map(|&v| g.weights[v]).collect();
    let greedy: Vec<usize> = mwis_greedy(g, comp).iter().map(|v| local[v]).collect();
    let mut search = IsSearch {
        adj: &adj,
        w: &w,
        best_cost: cost_of(&w, &greedy),
        best: greedy,
        path: Vec::new(),
        nodes: 0,
        node_limit,
        aborted: false,
    };
    search.descend(Bits::full(s), 0.0);
    let mut picked: Vec<usize> = search.best.iter().map(|&i| order[i]).collect();
    picked.sort_unstable();
    (picked, !search.aborted)
}

fn cost_of(w: &[f64], set: &[usize]) -> f64 {
    let mut c = set.to_vec();
    c.sort_unstable();
    c.iter().map(|&i| w[i]).sum()
}

struct IsSearch<'a> {
    adj: &'a [Bits],
    w: &'a [f64],
    best: Vec<usize>,
    best_cost: f64,
    path: Vec<usize>,
    nodes: u64,
    node_limit: u64,
    aborted: bool,
}

impl IsSearch<'_> {
    /// Sum over a greedy clique cover of the largest weight in each clique.
    fn clique_bound(&self, cands: &Bits) -> f64 {
        let mut cliques: Vec<Bits> = Vec::new();
        let mut bound = 0.0;
        for v in cands.iter() {
            match cliques.iter_mut().find(|c| c.is_subset(&self.adj[v])) {
                Some(c) => c.insert(v),
                None => {
                    // vertices arrive in descending weight, so v is its clique's heaviest
                    bound += self.w[v];
                    cliques.push(Bits::from_indices(cands.len(), [v]));
                }
            }
        }
        bound
    }

    fn descend(&mut self, cands: Bits, cur: f64) {
        if self.aborted {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.node_limit {
            self.aborted = true;
            return;
        }
        let Some(v) = cands.first() else {
            let c = cost_of(self.w, &self.path);
            if c > self.best_cost {
                self.best_cost = c;
                self.best = self.path.clone();
            }
            return;
        };
        if cur + self.clique_bound(&cands) <= self.best_cost {
            return;
        }
        let mut with = cands.and_not(&self.adj[v]);
        with.remove(v);
        self.path.push(v);
        self.descend(with, cur + self.w[v]);
        self.path.pop();
        let mut without = cands;
        without.remove(v);
        self.descend(without, cur);
    }
}

pub fn min_weight_dominating_set(g: &WeightedGraph, limits: &SolverLimits) -> Result<GraphSolution> {
    let mut chosen = Vec::new();
    let mut status = SolveStatus::Exact;
    for comp in g.components() {
        if comp.len() == 1 {
            chosen.push(comp[0]);
            continue;
        }
        let mut local = std::collections::HashMap::new();
        for (i, &v) in comp.iter().enumerate() {
            local.insert(v, i as u32);
        }
        let sets: Vec<Vec<u32>> = comp
            .iter()
            .map(|&v| {
                std::iter::once(local[&v])
                    .chain(g.adjacency[v].iter().map(|u| local[&(*u as usize)]))
                    .collect()
            })
            .collect();
        let weights = comp.iter().map(|&v| g.weights[v]).collect();
        let inst = WeightedCoverInstance::new(comp.len(), sets, weights)?;
        let comp_limits = SolverLimits {
            exact_limit: limits.graph_exact_limit,
            ..*limits
        };
        let sol = solve_cover(&inst, &comp_limits);
        status = status.combine(sol.status);
        chosen.extend(sol.certificate.iter().map(|&i| comp[i]));
    }
    chosen.sort_unstable();
    Ok(GraphSolution {
        value: g.weight_of(&chosen),
        vertices: chosen,
        status,
    })
}
