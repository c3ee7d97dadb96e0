#![allow(dead_code)]

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use topress::covers::SetFamily;
use topress::dynsys::{FiniteSystem, Potential};
use topress::lattice::{enumerate_box, LatticePoint};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_map(rng: &mut impl Rng, m: usize) -> Vec<u32> {
    (0..m).map(|_| rng.gen_range(0..m as u32)).collect()
}

/// One map on `m` states, or a product of two maps on `m1 * m2` states.
pub fn random_system(rng: &mut impl Rng, dims: usize, max_states: usize) -> FiniteSystem {
    if dims == 1 {
        let m = rng.gen_range(2..=max_states);
        let marked: Vec<usize> = (0..m).filter(|_| rng.gen_bool(0.2)).collect();
        return FiniteSystem::new(m, vec![random_map(rng, m)], &marked).unwrap();
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

/// `A^n` straight from itineraries: every choice of one member per box
/// point whose intersection of preimages is nonempty.
pub fn itinerary_join(sys: &FiniteSystem, a: &SetFamily, n: &LatticePoint) -> Vec<Vec<u32>> {
    let pts = enumerate_box(n).unwrap();
    let m = sys.state_count();
    let mut words: std::collections::BTreeMap<Vec<usize>, Vec<u32>> = Default::default();
    for x in 0..m {
        let options: Vec<Vec<usize>> = pts
            .iter()
            .map(|k| {
                let y = sys.apply_power(k, x).unwrap() as u32;
                (0..a.len()).filter(|&i| a.member(i).contains(&y)).collect()
            })
            .collect();
        let mut idx = vec![0usize; options.len()];
        loop {
            let w: Vec<usize> = idx.iter().zip(&options).map(|(&i, o)| o[i]).collect();
            words.entry(w).or_default().push(x as u32);
            let mut d = 0;
            loop {
                if d == idx.len() {
                    break;
                }
                idx[d] += 1;
                if idx[d] < options[d].len() {
                    break;
                }
                idx[d] = 0;
                d += 1;
            }
            if d == idx.len() {
                break;
            }
        }
    }
    let mut sets: Vec<Vec<u32>> = words.into_values().collect();
    sets.sort();
    sets.dedup();
    sets
}

/// Minimum of `sum weights` over covering subfamilies, by enumerating all subsets.
pub fn brute_min_cover(universe: usize, sets: &[Vec<u32>], weights: &[f64]) -> f64 {
    let k = sets.len();
    assert!(k <= 20);
    let mut best = f64::INFINITY;
    for mask in 0u32..(1 << k) {
        let mut hit = vec![false; universe];
        let mut chosen = Vec::new();
        for i in 0..k {
            if mask >> i & 1 == 1 {
                chosen.push(i);
                for &e in &sets[i] {
                    hit[e as usize] = true;
                }
            }
        }
        if hit.iter().all(|&h| h) {
            let w: f64 = chosen.iter().map(|&i| weights[i]).sum();
            best = best.min(w);
        }
    }
    best
}

pub fn brute_mwis(weights: &[f64], edges: &[(usize, usize)]) -> f64 {
    let n = weights.len();
    let mut best = 0.0f64;
    for mask in 0u32..(1 << n) {
        if edges.iter().any(|&(a, b)| a != b && mask >> a & 1 == 1 && mask >> b & 1 == 1) {
            continue;
        }
        let w: f64 = (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| weights[i]).sum();
        best = best.max(w);
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
            let w: f64 = (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| weights[i]).sum();
            best = best.min(w);
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
