//! Finite systems carrying commuting maps, Birkhoff sums and the
//! circle and disk examples.

use std::f64::consts::PI;

use crate::error::{domain, precondition, Error, Result};
use crate::lattice::{enumerate_box, LatticePoint};

/// A finite state set with `N` commuting maps and a set of marked states.
///
/// Marked states stand for cells touching the point at infinity: a set of
/// states counts as compact exactly when it avoids them.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteSystem {
    generators: Vec<Vec<u32>>,
    marked: Vec<bool>,
    geometry: Option<Vec<[f64; 2]>>,
}

impl FiniteSystem {
    pub fn new(state_count: usize, generators: Vec<Vec<u32>>, marked: &[usize]) -> Result<Self> {
        if state_count == 0 {
            return Err(domain("a system needs at least one state"));
        }
        if state_count > u32::MAX as usize {
            return Err(Error::Overflow("state count"));
        }
        if generators.is_empty() {
            return Err(domain("a system needs at least one generator"));
        }
        for (j, g) in generators.iter().enumerate() {
            if g.len() != state_count {
                return Err(domain(format!(
                    "generator {j} has {} entries for {state_count} states",
                    g.len()
                )));
            }
            if let Some(&y) = g.iter().find(|&&y| y as usize >= state_count) {
                return Err(domain(format!("generator {j} maps to state {y} out of range")));
            }
        }
        for a in 0..generators.len() {
            for b in a + 1..generators.len() {
                let (ga, gb) = (&generators[a], &generators[b]);
                if let Some(x) = (0..state_count)
                    .find(|&x| ga[gb[x] as usize] != gb[ga[x] as usize])
                {
                    return Err(domain(format!(
                        "generators {a} and {b} do not commute at state {x}"
                    )));
                }
            }
        }
        let mut flags = vec![false; state_count];
        for &x in marked {
            if x >= state_count {
                return Err(domain(format!("marked state {x} out of range")));
            }
            flags[x] = true;
        }
        Ok(FiniteSystem {
            generators,
            marked: flags,
            geometry: None,
        })
    }

    pub fn with_geometry(mut self, points: Vec<[f64; 2]>) -> Result<Self> {
        if points.len() != self.state_count() {
            return Err(domain("geometry needs one point per state"));
        }
        self.geometry = Some(points);
        Ok(self)
    }

    pub fn state_count(&self) -> usize {
        self.marked.len()
    }

    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    pub fn generator(&self, axis: usize) -> &[u32] {
        &self.generators[axis]
    }

    pub fn generators(&self) -> &[Vec<u32>] {
        &self.generators
    }

    pub fn is_marked(&self, x: usize) -> bool {
        self.marked[x]
    }

    pub fn marked_flags(&self) -> &[bool] {
        &self.marked
    }

    pub fn marked_states(&self) -> Vec<usize> {
        (0..self.state_count()).filter(|&x| self.marked[x]).collect()
    }

    pub fn geometry(&self) -> Option<&[[f64; 2]]> {
        self.geometry.as_deref()
    }

    fn check_point(&self, k: &LatticePoint) -> Result<()> {
        if k.dim() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                got: k.dim(),
            });
        }
        Ok(())
    }

    pub fn apply_power(&self, k: &LatticePoint, x: usize) -> Result<usize> {
        self.check_point(k)?;
        if x >= self.state_count() {
            return Err(domain(format!("state {x} out of range")));
        }
        let mut y = x;
        for (g, &e) in self.generators.iter().zip(k.coords()) {
            y = iterate_orbit(g, y, e);
        }
        Ok(y)
    }

    /// The table of `T^k` over all states.
    pub fn power_map(&self, k: &LatticePoint) -> Result<Vec<u32>> {
        self.check_point(k)?;
        let mut map: Vec<u32> = (0..self.state_count() as u32).collect();
        for (g, &e) in self.generators.iter().zip(k.coords()) {
            let p = map_power(g, e);
            map = map.iter().map(|&y| p[y as usize]).collect();
        }
        Ok(map)
    }

    /// `sum over k in [0,n) of f(T^k x)` by direct iteration.
    pub fn birkhoff_sum(&self, f: &Potential, n: &LatticePoint, x: usize) -> Result<f64> {
        self.check_potential(f)?;
        let pts = enumerate_box(n)?;
        self.birkhoff_sum_over(f, &pts, x)
    }

    pub fn birkhoff_sum_over(&self, f: &Potential, points: &[LatticePoint], x: usize) -> Result<f64> {
        self.check_potential(f)?;
        let mut s = 0.0;
        for k in points {
            s += f.value(self.apply_power(k, x)?);
        }
        Ok(s)
    }

    /// `f_n` at every state, one axis at a time with binary lifting.
    pub fn birkhoff_sums(&self, f: &Potential, n: &LatticePoint) -> Result<Vec<f64>> {
        self.check_potential(f)?;
        self.check_point(n)?;
        if let Some(axis) = n.coords().iter().position(|&c| c == 0) {
            return Err(Error::EmptyBox { axis });
        }
        let mut g: Vec<f64> = f.values().to_vec();
        for (gen, &len) in self.generators.iter().zip(n.coords()) {
            g = axis_sums(gen, &g, len);
        }
        Ok(g)
    }

    fn check_potential(&self, f: &Potential) -> Result<()> {
        if f.len() != self.state_count() {
            return Err(domain(format!(
                "potential has {} values for {} states",
                f.len(),
                self.state_count()
            )));
        }
        Ok(())
    }

    /// Cycles of a single map, each listed from its smallest state.
    pub fn cycle_structure(&self, f: &Potential) -> Result<Vec<Cycle>> {
        if self.dim() != 1 {
            return Err(precondition("cycle structure needs a single generator"));
        }
        self.check_potential(f)?;
        let g = &self.generators[0];
        let m = self.state_count();
        let on_cycle = cyclic_states(g);
        let mut seen = vec![false; m];
        let mut cycles = Vec::new();
        for x in 0..m {
            if !on_cycle[x] || seen[x] {
                continue;
            }
            let mut states = vec![x];
            seen[x] = true;
            let mut y = g[x] as usize;
            while y != x {
                seen[y] = true;
                states.push(y);
                y = g[y] as usize;
            }
            let mean = states.iter().map(|&s| f.value(s)).sum::<f64>() / states.len() as f64;
            cycles.push(Cycle { states, mean });
        }
        Ok(cycles)
    }

    /// Longest tail before an orbit enters its cycle, and the lcm of cycle lengths.
    pub fn eventual_period(&self) -> Result<(u64, u64)> {
        if self.dim() != 1 {
            return Err(precondition("eventual period needs a single generator"));
        }
        let g = &self.generators[0];
        let on_cycle = cyclic_states(g);
        let mut depth: Vec<Option<u64>> = on_cycle.iter().map(|&c| c.then_some(0)).collect();
        let mut tail = 0;
        for x in 0..g.len() {
            let mut path = Vec::new();
            let mut y = x;
            while depth[y].is_none() {
                path.push(y);
                y = g[y] as usize;
            }
            let mut d = depth[y].unwrap();
            for &s in path.iter().rev() {
                d += 1;
                depth[s] = Some(d);
            }
            tail = tail.max(depth[x].unwrap());
        }
        let dummy = Potential::constant(g.len(), 0.0);
        let mut lcm = 1u64;
        for c in self.cycle_structure(&dummy)? {
            let l = c.states.len() as u64;
            lcm = (lcm / gcd(lcm, l))
                .checked_mul(l)
                .ok_or(Error::Overflow("cycle length lcm"))?;
        }
        Ok((tail, lcm))
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn cyclic_states(g: &[u32]) -> Vec<bool> {
    // a state is cyclic iff it survives repeated removal of states without preimages
    let m = g.len();
    let mut indeg = vec![0u32; m];
    for &y in g {
        indeg[y as usize] += 1;
    }
    let mut alive = vec![true; m];
    let mut stack: Vec<usize> = (0..m).filter(|&x| indeg[x] == 0).collect();
    while let Some(x) = stack.pop() {
        alive[x] = false;
        let y = g[x] as usize;
        indeg[y] -= 1;
        if indeg[y] == 0 {
            stack.push(y);
        }
    }
    alive
}

fn iterate_orbit(g: &[u32], mut x: usize, e: u64) -> usize {
    if e as usize > 4 * g.len() {
        return map_power(g, e)[x] as usize;
    }
    for _ in 0..e {
        x = g[x] as usize;
    }
    x
}

fn map_power(g: &[u32], mut e: u64) -> Vec<u32> {
    let mut result: Vec<u32> = (0..g.len() as u32).collect();
    let mut base = g.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            result = result.iter().map(|&y| base[y as usize]).collect();
        }
        e >>= 1;
        if e > 0 {
            base = base.iter().map(|&y| base[y as usize]).collect();
        }
    }
    result
}

/// `sum over t < len of g(T^t x)` for every x.
fn axis_sums(map: &[u32], g: &[f64], len: u64) -> Vec<f64> {
    let m = map.len();
    if len <= 64 {
        let mut acc = vec![0.0; m];
        let mut pos: Vec<u32> = (0..m as u32).collect();
        for _ in 0..len {
            for x in 0..m {
                acc[x] += g[pos[x] as usize];
                pos[x] = map[pos[x] as usize];
            }
        }
        return acc;
    }
    let mut acc = vec![0.0; m];
    let mut pos: Vec<u32> = (0..m as u32).collect();
    let mut block_sum = g.to_vec();
    let mut jump = map.to_vec();
    let mut rest = len;
    while rest > 0 {
        if rest & 1 == 1 {
            for x in 0..m {
                acc[x] += block_sum[pos[x] as usize];
                pos[x] = jump[pos[x] as usize];
            }
        }
        rest >>= 1;
        if rest > 0 {
            let next_sum: Vec<f64> = (0..m)
                .map(|x| block_sum[x] + block_sum[jump[x] as usize])
                .collect();
            let next_jump: Vec<u32> = (0..m).map(|x| jump[jump[x] as usize]).collect();
            block_sum = next_sum;
            jump = next_jump;
        }
    }
    acc
}

/// A cycle of a single map with the mean of the potential along it.
#[derive(Clone, Debug, PartialEq)]
pub struct Cycle {
    pub states: Vec<usize>,
    pub mean: f64,
}

/// A real function on the states.
#[derive(Clone, Debug, PartialEq)]
pub struct Potential {
    values: Vec<f64>,
    sup_norm: f64,
}

impl Potential {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(domain(format!("potential value at state {i} is not finite")));
        }
        let sup_norm = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        Ok(Potential { values, sup_norm })
    }

    pub fn constant(state_count: usize, c: f64) -> Self {
        Potential::new(vec![c; state_count]).expect("finite constant")
    }

    pub fn zero(state_count: usize) -> Self {
        Self::constant(state_count, 0.0)
    }

    pub fn value(&self, x: usize) -> f64 {
        self.values[x]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sup_norm(&self) -> f64 {
        self.sup_norm
    }

    pub fn shifted(&self, c: f64) -> Result<Self> {
        Potential::new(self.values.iter().map(|v| v + c).collect())
    }
}

/// `x -> 2x mod m` on `m` equally spaced points of the circle.
pub fn make_circle_doubling(m: usize) -> Result<FiniteSystem> {
    if m < 3 || m.is_multiple_of(2) {
        return Err(domain(format!("circle doubling needs an odd m >= 3, got {m}")));
    }
    if m > u32::MAX as usize / 2 {
        return Err(Error::Overflow("circle size"));
    }
    let map: Vec<u32> = (0..m).map(|x| ((2 * x) % m) as u32).collect();
    let geometry = (0..m)
        .map(|x| {
            let a = 2.0 * PI * x as f64 / m as f64;
            [a.cos(), a.sin()]
        })
        .collect();
    FiniteSystem::new(m, vec![map], &[])?.with_geometry(geometry)
}

/// Layout of the disk grid: state 0 is the center cell, cell `(i, j)` of ring
/// `i` and sector `j` is state `1 + i * sectors + j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DiskGrid {
    pub rings: usize,
    pub sectors: usize,
}

impl DiskGrid {
    pub fn new(rings: usize, sectors: usize) -> Result<Self> {
        if rings < 2 || sectors < 2 {
            return Err(domain("disk grid needs at least 2 rings and 2 sectors"));
        }
        let cells = rings
            .checked_mul(sectors)
            .and_then(|c| c.checked_add(1))
            .ok_or(Error::Overflow("disk grid size"))?;
        if cells > u32::MAX as usize {
            return Err(Error::Overflow("disk grid size"));
        }
        Ok(DiskGrid { rings, sectors })
    }

    pub fn state_count(&self) -> usize {
        self.rings * self.sectors + 1
    }

    pub fn cell(&self, ring: usize, sector: usize) -> usize {
        1 + ring * self.sectors + sector
    }

    /// `None` for the center cell.
    pub fn ring_sector(&self, x: usize) -> Option<(usize, usize)> {
        (x > 0).then(|| ((x - 1) / self.sectors, (x - 1) % self.sectors))
    }

    pub fn center_polar(&self, ring: usize, sector: usize) -> (f64, f64) {
        let r = (ring as f64 + 0.5) / self.rings as f64;
        let theta = 2.0 * PI * (sector as f64 + 0.5) / self.sectors as f64;
        (r, theta)
    }

    /// The cell holding the polar point, half-open bins with ties to the lower bin.
    pub fn locate(&self, r: f64, theta: f64) -> usize {
        if r <= 0.0 {
            return 0;
        }
        let ring = ((r * self.rings as f64).ceil() as usize).clamp(1, self.rings) - 1;
        let th = theta.rem_euclid(2.0 * PI);
        let t = th * self.sectors as f64 / (2.0 * PI);
        let nearest = t.round();
        let sector = if (t - nearest).abs() < 1e-9 {
            (nearest as i64 - 1).rem_euclid(self.sectors as i64) as usize
        } else {
            (t.floor() as usize) % self.sectors
        };
        self.cell(ring, sector)
    }

    pub fn system(&self) -> Result<FiniteSystem> {
        let m = self.state_count();
        let mut map = vec![0u32; m];
        let mut geometry = vec![[0.0, 0.0]; m];
        for i in 0..self.rings {
            for j in 0..self.sectors {
                let (r, theta) = self.center_polar(i, j);
                let x = self.cell(i, j);
                geometry[x] = [r * theta.cos(), r * theta.sin()];
                map[x] = self.locate(r * (r + 1.0) / 2.0, 2.0 * theta) as u32;
            }
        }
        let marked: Vec<usize> = (0..self.sectors).map(|j| self.cell(self.rings - 1, j)).collect();
        FiniteSystem::new(m, vec![map], &marked)?.with_geometry(geometry)
    }
}

/// The cell discretization of `r e^{i theta} -> r (r+1)/2 e^{2 i theta}` on the open disk.
pub fn make_disk_system(rings: usize, sectors: usize) -> Result<FiniteSystem> {
    DiskGrid::new(rings, sectors)?.system()
}

/// The action `k -> T^{n k}` (componentwise product), with generator `j`
/// equal to `T^{n_j e_j}`.
pub fn power_system(sys: &FiniteSystem, n: &LatticePoint) -> Result<FiniteSystem> {
    if n.dim() != sys.dim() {
        return Err(Error::Dimension {
            expected: sys.dim(),
            got: n.dim(),
        });
    }
    if n.min_coord() == 0 {
        return Err(domain("power steps must be at least 1"));
    }
    let maps = (0..sys.dim())
        .map(|j| {
            let mut step = vec![0; sys.dim()];
            step[j] = n.coords()[j];
            sys.power_map(&LatticePoint::new(step))
        })
        .collect::<Result<Vec<_>>>()?;
    FiniteSystem::new(sys.state_count(), maps, &sys.marked_states())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn doubling_examples() {
        let s = make_circle_doubling(101).unwrap();
        assert_eq!(s.apply_power(&LatticePoint::new(vec![1]), 60).unwrap(), 19);
        assert_eq!(s.apply_power(&LatticePoint::new(vec![0]), 60).unwrap(), 60);
        assert!(make_circle_doubling(100).is_err());
    }

    #[test]
    fn commuting_check_rejects() {
        let a = vec![1, 0, 2];
        let b = vec![0, 2, 1];
        assert!(matches!(
            FiniteSystem::new(3, vec![a, b], &[]),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn binary_lifting_matches_direct_sums() {
        let s = make_circle_doubling(31).unwrap();
        let f = Potential::new((0..31).map(|x| (x as f64 * 0.37).sin()).collect()).unwrap();
        for len in [1u64, 5, 64, 65, 200, 1023] {
            let n = LatticePoint::new(vec![len]);
            let fast = s.birkhoff_sums(&f, &n).unwrap();
            for x in 0..31 {
                let slow = s.birkhoff_sum(&f, &n, x).unwrap();
                assert!((fast[x] - slow).abs() < 1e-9 * (1.0 + slow.abs()));
            }
        }
    }

    #[test]
    fn disk_center_is_fixed_and_marked_is_outer_ring() {
        let g = DiskGrid::new(4, 8).unwrap();
        let s = g.system().unwrap();
        assert_eq!(s.generator(0)[0], 0);
        assert_eq!(s.marked_states(), (0..8).map(|j| g.cell(3, j)).collect::<Vec<_>>());
    }

    #[test]
    fn eventual_period_of_small_graph() {
        // 0 -> 1 -> 2 -> 1, 3 -> 3
        let s = FiniteSystem::new(4, vec![vec![1, 2, 1, 3]], &[]).unwrap();
        assert_eq!(s.eventual_period().unwrap(), (1, 2));
    }
}
