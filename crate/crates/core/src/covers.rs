//! Covers and partitions of the state set: preimages, joins, orbit joins,
//! refinement, admissibility and the closeness relation.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::dynsys::{FiniteSystem, Potential};
use crate::error::{domain, precondition, Error, Result};
use crate::lattice::{enumerate_box, LatticePoint};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    Cover,
    Partition,
}

/// A family of nonempty state sets whose union is every state.
///
/// Members are sorted state lists; the member list itself is sorted and
/// free of duplicates, so equal families compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SetFamily {
    state_count: usize,
    members: Vec<Vec<u32>>,
    kind: FamilyKind,
}

/// Limits on the size of constructed families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct JoinBudget {
    pub max_lambda: u64,
    pub max_members: usize,
}

impl Default for JoinBudget {
    fn default() -> Self {
        JoinBudget {
            max_lambda: 1 << 24,
            max_members: 4096,
        }
    }
}

impl SetFamily {
    pub fn cover(state_count: usize, members: Vec<Vec<usize>>) -> Result<Self> {
        Self::build(state_count, members, FamilyKind::Cover)
    }

    pub fn partition(state_count: usize, members: Vec<Vec<usize>>) -> Result<Self> {
        Self::build(state_count, members, FamilyKind::Partition)
    }

    fn build(state_count: usize, members: Vec<Vec<usize>>, kind: FamilyKind) -> Result<Self> {
        let mut seen = vec![0u32; state_count];
        let mut sets = Vec::with_capacity(members.len());
        for m in members {
            let mut s: Vec<u32> = Vec::with_capacity(m.len());
            for x in m {
                if x >= state_count {
                    return Err(domain(format!("state {x} out of range")));
                }
                s.push(x as u32);
            }
            s.sort_unstable();
            s.dedup();
            if s.is_empty() {
                if kind == FamilyKind::Partition {
                    return Err(domain("partition members must be nonempty"));
                }
                continue;
            }
            for &x in &s {
                seen[x as usize] += 1;
            }
            sets.push(s);
        }
        if let Some(x) = seen.iter().position(|&c| c == 0) {
            return Err(domain(format!("state {x} is not covered")));
        }
        if kind == FamilyKind::Partition {
            if let Some(x) = seen.iter().position(|&c| c > 1) {
                return Err(domain(format!("state {x} lies in two partition members")));
            }
        }
        Ok(Self::from_sets(state_count, sets, kind))
    }

    fn from_sets(state_count: usize, mut members: Vec<Vec<u32>>, kind: FamilyKind) -> Self {
        members.sort_unstable();
        members.dedup();
        SetFamily {
            state_count,
            members,
            kind,
        }
    }

    /// Partition by equal labels.
    pub fn from_labels(labels: &[u32]) -> Self {
        let mut ids: HashMap<u32, usize> = HashMap::new();
        let mut members: Vec<Vec<u32>> = Vec::new();
        for (x, &l) in labels.iter().enumerate() {
            let id = *ids.entry(l).or_insert_with(|| {
                members.push(Vec::new());
                members.len() - 1
            });
            members[id].push(x as u32);
        }
        Self::from_sets(labels.len(), members, FamilyKind::Partition)
    }

    pub fn trivial(state_count: usize) -> Self {
        Self::from_sets(
            state_count,
            vec![(0..state_count as u32).collect()],
            FamilyKind::Partition,
        )
    }

    pub fn singletons(state_count: usize) -> Self {
        Self::from_sets(
            state_count,
            (0..state_count as u32).map(|x| vec![x]).collect(),
            FamilyKind::Partition,
        )
    }

    pub fn state_count(&self) -> usize {
        self.state_count
    }

    pub fn members(&self) -> &[Vec<u32>] {
        &self.members
    }

    pub fn member(&self, i: usize) -> &[u32] {
        &self.members[i]
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn is_partition(&self) -> bool {
        self.kind == FamilyKind::Partition
    }

    /// The same members, viewed as a cover.
    pub fn as_cover(&self) -> SetFamily {
        SetFamily {
            kind: FamilyKind::Cover,
            ..self.clone()
        }
    }

    /// Member indices containing each state, ascending.
    pub fn membership(&self) -> Vec<Vec<u32>> {
        let mut m = vec![Vec::new(); self.state_count];
        for (i, s) in self.members.iter().enumerate() {
            for &x in s {
                m[x as usize].push(i as u32);
            }
        }
        m
    }

    /// Member index of each state; partitions only.
    pub fn labels(&self) -> Option<Vec<u32>> {
        if !self.is_partition() {
            return None;
        }
        let mut l = vec![0u32; self.state_count];
        for (i, s) in self.members.iter().enumerate() {
            for &x in s {
                l[x as usize] = i as u32;
            }
        }
        Some(l)
    }

    /// One member per line, states separated by spaces; a header line names the kind.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let kind = match self.kind {
            FamilyKind::Cover => "cover",
            FamilyKind::Partition => "partition",
        };
        writeln!(out, "{kind} {}", self.state_count).unwrap();
        for m in &self.members {
            let line: Vec<String> = m.iter().map(|x| x.to_string()).collect();
            writeln!(out, "{}", line.join(" ")).unwrap();
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| domain("empty family text"))?;
        let mut parts = header.split_whitespace();
        let kind = match parts.next() {
            Some("cover") => FamilyKind::Cover,
            Some("partition") => FamilyKind::Partition,
            other => return Err(domain(format!("unknown family kind {other:?}"))),
        };
        let count: usize = parts
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| domain("missing state count"))?;
        let members = lines
            .map(|l| {
                l.split_whitespace()
                    .map(|t| t.parse::<usize>().map_err(|e| domain(format!("bad state {t:?}: {e}"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::build(count, members, kind)
    }
}

fn check_same_space(a: &SetFamily, b: &SetFamily) -> Result<()> {
    if a.state_count != b.state_count {
        return Err(domain(format!(
            "families live on {} and {} states",
            a.state_count, b.state_count
        )));
    }
    Ok(())
}

fn check_on_system(sys: &FiniteSystem, f: &SetFamily) -> Result<()> {
    if sys.state_count() != f.state_count {
        return Err(domain(format!(
            "family has {} states, system has {}",
            f.state_count,
            sys.state_count()
        )));
    }
    Ok(())
}

/// `T^{-k} F`, with the number of members whose preimage was empty.
#[derive(Clone, Debug, PartialEq)]
pub struct Preimage {
    pub family: SetFamily,
    pub dropped_empty: usize,
}

pub fn preimage_family(sys: &FiniteSystem, f: &SetFamily, k: &LatticePoint) -> Result<Preimage> {
    check_on_system(sys, f)?;
    let map = sys.power_map(k)?;
    Ok(preimage_by_map(&map, f))
}

fn preimage_by_map(map: &[u32], f: &SetFamily) -> Preimage {
    let membership = f.membership();
    let mut sets = vec![Vec::new(); f.len()];
    for (x, &y) in map.iter().enumerate() {
        for &i in &membership[y as usize] {
            sets[i as usize].push(x as u32);
        }
    }
    let before = sets.len();
    sets.retain(|s| !s.is_empty());
    let dropped_empty = before - sets.len();
    Preimage {
        family: SetFamily::from_sets(f.state_count, sets, f.kind),
        dropped_empty,
    }
}

/// All nonempty pairwise intersections.
pub fn join(f: &SetFamily, g: &SetFamily) -> Result<SetFamily> {
    check_same_space(f, g)?;
    Ok(join_unchecked(f, g))
}

fn join_unchecked(f: &SetFamily, g: &SetFamily) -> SetFamily {
    let kind = if f.is_partition() && g.is_partition() {
        FamilyKind::Partition
    } else {
        FamilyKind::Cover
    };
    let mf = f.membership();
    let mg = g.membership();
    let mut ids: HashMap<(u32, u32), usize> = HashMap::new();
    let mut sets: Vec<Vec<u32>> = Vec::new();
    for x in 0..f.state_count {
        for &a in &mf[x] {
            for &b in &mg[x] {
                let id = *ids.entry((a, b)).or_insert_with(|| {
                    sets.push(Vec::new());
                    sets.len() - 1
                });
                sets[id].push(x as u32);
            }
        }
    }
    SetFamily::from_sets(f.state_count, sets, kind)
}

/// Whether every member of `g` lies inside some member of `f`.
pub fn refines(g: &SetFamily, f: &SetFamily) -> Result<bool> {
    check_same_space(f, g)?;
    let mf = f.membership();
    Ok(g.members.iter().all(|s| {
        let mut cands: Vec<u32> = mf[s[0] as usize].clone();
        for &x in &s[1..] {
            if cands.is_empty() {
                break;
            }
            let mx = &mf[x as usize];
            cands.retain(|c| mx.binary_search(c).is_ok());
        }
        !cands.is_empty()
    }))
}

/// Members not strictly contained in another member.
pub fn maximal_members(f: &SetFamily) -> SetFamily {
    if f.is_partition() {
        return f.clone();
    }
    let membership = f.membership();
    let keep: Vec<bool> = f
        .members
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let start = s
                .iter()
                .min_by_key(|&&x| membership[x as usize].len())
                .copied()
                .unwrap();
            let mut cands: Vec<u32> = membership[start as usize]
                .iter()
                .copied()
                .filter(|&c| c as usize != i && f.members[c as usize].len() > s.len())
                .collect();
            for &x in s {
                if cands.is_empty() {
                    break;
                }
                let mx = &membership[x as usize];
                cands.retain(|c| mx.binary_search(c).is_ok());
            }
            cands.is_empty()
        })
        .collect();
    let sets = f
        .members
        .iter()
        .zip(&keep)
        .filter(|(_, &k)| k)
        .map(|(s, _)| s.clone())
        .collect();
    SetFamily::from_sets(f.state_count, sets, f.kind)
}

/// `F^n`, the join of `T^{-k} F` over the box `[0, n)`.
pub fn orbit_join(sys: &FiniteSystem, f: &SetFamily, n: &LatticePoint, budget: JoinBudget) -> Result<SetFamily> {
    orbit_join_impl(sys, f, n, budget, false)
}

/// Maximal members of `F^n`, which is all that minimal subcovers and the
/// closeness relation depend on.
pub fn orbit_join_maximal(
    sys: &FiniteSystem,
    f: &SetFamily,
    n: &LatticePoint,
    budget: JoinBudget,
) -> Result<SetFamily> {
    orbit_join_impl(sys, f, n, budget, true)
}

fn check_members(f: &SetFamily, budget: JoinBudget) -> Result<()> {
    if f.len() > budget.max_members {
        return Err(Error::Budget {
            what: "family members",
            needed: f.len() as u64,
            limit: budget.max_members as u64,
        });
    }
    Ok(())
}

fn orbit_join_impl(
    sys: &FiniteSystem,
    f: &SetFamily,
    n: &LatticePoint,
    budget: JoinBudget,
    reduce: bool,
) -> Result<SetFamily> {
    check_on_system(sys, f)?;
    if n.dim() != sys.dim() {
        return Err(Error::Dimension {
            expected: sys.dim(),
            got: n.dim(),
        });
    }
    if let Some(axis) = n.coords().iter().position(|&c| c == 0) {
        return Err(Error::EmptyBox { axis });
    }
    let lambda = n.lambda()?;
    if lambda > budget.max_lambda {
        return Err(Error::Budget {
            what: "box cardinality",
            needed: lambda,
            limit: budget.max_lambda,
        });
    }
    let tidy = |g: SetFamily| if reduce { maximal_members(&g) } else { g };
    let mut acc = tidy(f.clone());
    for (axis, &len) in n.coords().iter().enumerate() {
        let map = sys.generator(axis);
        // K_{s+1} = J v T_j^{-1} K_s reaches the join over [0, s+1) along this axis
        let base = acc.clone();
        let mut cur = acc;
        for _ in 1..len {
            let pre = preimage_by_map(map, &cur).family;
            let next = tidy(join_unchecked(&base, &pre));
            check_members(&next, budget)?;
            if next == cur {
                break;
            }
            cur = next;
        }
        acc = cur;
    }
    check_members(&acc, budget)?;
    Ok(acc)
}

/// `F^Q` for an arbitrary finite set `Q` of lattice points.
pub fn orbit_join_over(
    sys: &FiniteSystem,
    f: &SetFamily,
    points: &[LatticePoint],
    budget: JoinBudget,
) -> Result<SetFamily> {
    check_on_system(sys, f)?;
    let mut acc: Option<SetFamily> = None;
    for k in points {
        let pre = preimage_by_map(&sys.power_map(k)?, f).family;
        let next = match acc {
            None => pre,
            Some(a) => join_unchecked(&a, &pre),
        };
        check_members(&next, budget)?;
        acc = Some(next);
    }
    acc.ok_or_else(|| precondition("join over an empty set of points"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AdmissibilityReport {
    pub is_admissible: bool,
    pub is_strongly_admissible: bool,
    pub witness: Option<usize>,
}

pub fn classify_admissible(sys: &FiniteSystem, f: &SetFamily) -> Result<AdmissibilityReport> {
    check_on_system(sys, f)?;
    let marked = sys.marked_flags();
    let need = marked.iter().filter(|&&m| m).count();
    let hits: Vec<bool> = f
        .members
        .iter()
        .map(|s| s.iter().filter(|&&x| marked[x as usize]).count() == need)
        .collect();
    Ok(AdmissibilityReport {
        is_admissible: hits.iter().any(|&h| h),
        is_strongly_admissible: hits.iter().all(|&h| h),
        witness: hits.iter().position(|&h| h),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PartitionAdmissibilityReport {
    pub is_admissible_partition: bool,
    pub noncompact_index: Option<usize>,
}

pub fn classify_admissible_partition(
    sys: &FiniteSystem,
    k: &SetFamily,
) -> Result<PartitionAdmissibilityReport> {
    check_on_system(sys, k)?;
    if !k.is_partition() {
        return Err(precondition("admissible partitions must be partitions"));
    }
    let marked = sys.marked_flags();
    let touching: Vec<usize> = k
        .members
        .iter()
        .enumerate()
        .filter(|(_, s)| s.iter().any(|&x| marked[x as usize]))
        .map(|(i, _)| i)
        .collect();
    Ok(PartitionAdmissibilityReport {
        is_admissible_partition: touching.len() <= 1,
        noncompact_index: touching.first().copied(),
    })
}

/// The two half arcs `[0, m/2)` and `[m/2, m)` of a circle with `m` states.
pub fn half_arc_partition(m: usize) -> SetFamily {
    SetFamily::from_labels(&(0..m).map(|x| u32::from(2 * x >= m)).collect::<Vec<_>>())
}

/// `{K_0 u K_j}` for an admissible partition whose member `K_0` is the one
/// touching the marked set; with no such member, `K_0` is the first member.
pub fn cover_from_partition(sys: &FiniteSystem, k: &SetFamily) -> Result<SetFamily> {
    let report = classify_admissible_partition(sys, k)?;
    if !report.is_admissible_partition {
        return Err(domain("partition has more than one member meeting the marked set"));
    }
    let i0 = report.noncompact_index.unwrap_or(0);
    let k0 = &k.members[i0];
    let mut sets: Vec<Vec<u32>> = k
        .members
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != i0)
        .map(|(_, s)| {
            let mut u: Vec<u32> = k0.iter().chain(s).copied().collect();
            u.sort_unstable();
            u
        })
        .collect();
    if sets.is_empty() {
        sets.push(k0.clone());
    }
    Ok(SetFamily::from_sets(k.state_count, sets, FamilyKind::Cover))
}

/// Preimages under `f` of the open intervals of length `eps` centered on the
/// grid `(eps/2) Z`.
pub fn potential_cover(sys: &FiniteSystem, f: &Potential, eps: f64) -> Result<SetFamily> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(domain(format!("eps must be positive, got {eps}")));
    }
    if f.len() != sys.state_count() {
        return Err(domain("potential does not match the system"));
    }
    let marked = sys.marked_states();
    if let Some(&m0) = marked.first() {
        if marked.iter().any(|&x| f.value(x) != f.value(m0)) {
            return Err(precondition("potential must be constant on the marked states"));
        }
    }
    let h = eps / 2.0;
    let mut by_center: HashMap<i64, Vec<u32>> = HashMap::new();
    for x in 0..sys.state_count() {
        let v = f.value(x);
        // centers a = h t with |v - a| < h, i.e. t strictly between v/h - 1 and v/h + 1
        let lo = (v / h - 1.0).floor() as i64;
        let hi = (v / h + 1.0).ceil() as i64;
        for t in lo..=hi {
            if (v - h * t as f64).abs() < h {
                by_center.entry(t).or_default().push(x as u32);
            }
        }
    }
    let sets = by_center.into_values().collect();
    Ok(SetFamily::from_sets(sys.state_count(), sets, FamilyKind::Cover))
}

/// States grouped by their member signature in `F^n`, with adjacency
/// between groups that share a member.
#[derive(Clone, Debug)]
pub struct ClosenessGraph {
    pub family: SetFamily,
    /// Group of each state.
    pub group_of: Vec<u32>,
    /// States of each group, ascending; groups ordered by smallest state.
    pub groups: Vec<Vec<u32>>,
    /// Sorted neighbor groups, excluding the group itself.
    pub adjacency: Vec<Vec<u32>>,
}

impl ClosenessGraph {
    pub fn from_family(family: SetFamily, max_edges: usize) -> Result<Self> {
        let membership = family.membership();
        let mut ids: HashMap<&[u32], u32> = HashMap::new();
        let mut groups: Vec<Vec<u32>> = Vec::new();
        let mut group_of = vec![0u32; family.state_count];
        for (x, sig) in membership.iter().enumerate() {
            let id = *ids.entry(sig.as_slice()).or_insert_with(|| {
                groups.push(Vec::new());
                (groups.len() - 1) as u32
            });
            groups[id as usize].push(x as u32);
            group_of[x] = id;
        }
        let mut adjacency: Vec<Vec<u32>> = vec![Vec::new(); groups.len()];
        let mut edges = 0usize;
        for s in family.members() {
            let mut gs: Vec<u32> = s.iter().map(|&x| group_of[x as usize]).collect();
            gs.sort_unstable();
            gs.dedup();
            edges += gs.len() * gs.len().saturating_sub(1);
            if edges > max_edges {
                return Err(Error::Budget {
                    what: "closeness graph edges",
                    needed: edges as u64,
                    limit: max_edges as u64,
                });
            }
            for &a in &gs {
                for &b in &gs {
                    if a != b {
                        adjacency[a as usize].push(b);
                    }
                }
            }
        }
        for a in &mut adjacency {
            a.sort_unstable();
            a.dedup();
        }
        Ok(ClosenessGraph {
            family,
            group_of,
            groups,
            adjacency,
        })
    }

    pub fn state_count(&self) -> usize {
        self.group_of.len()
    }

    pub fn are_close(&self, x: usize, y: usize) -> bool {
        let (gx, gy) = (self.group_of[x], self.group_of[y]);
        gx == gy || self.adjacency[gx as usize].binary_search(&gy).is_ok()
    }

    /// Whether no two distinct states of `set` are close.
    pub fn is_separated(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(i, &x)| set[i + 1..].iter().all(|&y| x == y || !self.are_close(x, y)))
    }

    /// Whether every state is close to some state of `set`.
    pub fn is_spanning(&self, set: &[usize]) -> bool {
        let mut hit = vec![false; self.groups.len()];
        for &x in set {
            let g = self.group_of[x] as usize;
            hit[g] = true;
            for &h in &self.adjacency[g] {
                hit[h as usize] = true;
            }
        }
        hit.iter().all(|&h| h)
    }
}

pub fn closeness_graph(
    sys: &FiniteSystem,
    f: &SetFamily,
    n: &LatticePoint,
    budget: JoinBudget,
) -> Result<ClosenessGraph> {
    let family = orbit_join_maximal(sys, f, n, budget)?;
    ClosenessGraph::from_family(family, 1 << 26)
}

/// `F^n` built directly from itineraries over the enumerated box; slow, for checks.
pub fn orbit_join_by_enumeration(
    sys: &FiniteSystem,
    f: &SetFamily,
    n: &LatticePoint,
    budget: JoinBudget,
) -> Result<SetFamily> {
    let pts = enumerate_box(n)?;
    orbit_join_over(sys, f, &pts, budget)
}
