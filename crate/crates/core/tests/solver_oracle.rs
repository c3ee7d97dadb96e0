mod common;

use rand::Rng;
use topress::solver::{
    max_weight_independent_set, min_subcover_value, min_weight_dominating_set, SolveStatus, SolverLimits,
    WeightedCoverInstance, WeightedGraph,
};

fn random_instance(rng: &mut impl Rng, integer: bool) -> (usize, Vec<Vec<u32>>, Vec<f64>) {
    let universe = rng.gen_range(1..=10);
    let k = rng.gen_range(1..=12);
    let mut sets: Vec<Vec<u32>> = (0..k)
        .map(|_| (0..universe as u32).filter(|_| rng.gen_bool(0.35)).collect())
        .collect();
    for e in 0..universe as u32 {
        if !sets.iter().any(|s| s.contains(&e)) {
            let i = rng.gen_range(0..k);
            sets[i].push(e);
        }
    }
    let weights = (0..k)
        .map(|_| if integer { rng.gen_range(1..=9) as f64 } else { rng.gen_range(0.01..5.0) })
        .collect();
    (universe, sets, weights)
}

#[test]
fn subcover_matches_exhaustive_search() {
    let mut rng = common::rng(31);
    for trial in 0..1000 {
        let integer = trial % 2 == 0;
        let (u, sets, w) = random_instance(&mut rng, integer);
        let oracle = common::brute_min_cover(u, &sets, &w);
        let inst = WeightedCoverInstance::new(u, sets, w).unwrap();
        let sol = min_subcover_value(&inst, 24).unwrap();
        assert_eq!(sol.status, SolveStatus::Exact);
        assert!(inst.is_cover(&sol.certificate));
        assert_eq!(inst.weight_of(&sol.certificate), sol.value);
        if integer {
            assert_eq!(sol.value, oracle, "trial {trial}");
        } else {
            assert!((sol.value - oracle).abs() <= 1e-12 * oracle, "trial {trial}");
        }
    }
}

#[test]
fn greedy_fallback_is_feasible_and_flagged() {
    let mut rng = common::rng(32);
    for _ in 0..200 {
        let (u, sets, w) = random_instance(&mut rng, false);
        let oracle = common::brute_min_cover(u, &sets, &w);
        let inst = WeightedCoverInstance::new(u, sets, w).unwrap();
        let limits = SolverLimits { exact_limit: 0, small_universe: 0, ..SolverLimits::default() };
        let sol = topress::solver::min_subcover_with(&inst, &limits).unwrap();
        assert!(inst.is_cover(&sol.certificate));
        assert!(sol.value >= oracle - 1e-12);
        if sol.status == SolveStatus::Exact {
            // reductions alone settled it
            assert!((sol.value - oracle).abs() <= 1e-12 * oracle);
        } else {
            assert_eq!(sol.status, SolveStatus::GreedyUpper);
        }
    }
}

#[test]
fn independent_and_dominating_sets_match_exhaustive_search() {
    let mut rng = common::rng(33);
    let limits = SolverLimits::default();
    for trial in 0..1000 {
        let n = rng.gen_range(1..=12);
        let integer = trial % 2 == 0;
        let w: Vec<f64> = (0..n)
            .map(|_| if integer { rng.gen_range(1..=9) as f64 } else { rng.gen_range(0.01..5.0) })
            .collect();
        let p = rng.gen_range(0.05..0.7);
        let edges = common::random_graph(&mut rng, n, p);
        let g = WeightedGraph::new(w.clone(), &edges).unwrap();
        let is = max_weight_independent_set(&g, &limits).unwrap();
        let ds = min_weight_dominating_set(&g, &limits).unwrap();
        assert!(g.is_independent(&is.vertices));
        assert!(g.is_dominating(&ds.vertices));
        assert_eq!(is.status, SolveStatus::Exact);
        assert_eq!(ds.status, SolveStatus::Exact);
        let (bi, bd) = (common::brute_mwis(&w, &edges), common::brute_mwds(&w, &edges));
        if integer {
            assert_eq!(is.value, bi, "trial {trial}");
            assert_eq!(ds.value, bd, "trial {trial}");
        } else {
            assert!((is.value - bi).abs() <= 1e-12 * bi);
            assert!((ds.value - bd).abs() <= 1e-12 * bd);
        }
    }
}

#[test]
fn larger_instances_stay_consistent_with_their_certificates() {
    let mut rng = common::rng(34);
    for _ in 0..30 {
        let u = 40;
        let k = 60;
        let mut sets: Vec<Vec<u32>> = (0..k)
            .map(|_| (0..u as u32).filter(|_| rng.gen_bool(0.1)).collect())
            .collect();
        for e in 0..u as u32 {
            if !sets.iter().any(|s| s.contains(&e)) {
                sets[rng.gen_range(0..k)].push(e);
            }
        }
        let w: Vec<f64> = (0..k).map(|_| rng.gen_range(0.5..2.0)).collect();
        let inst = WeightedCoverInstance::new(u, sets, w).unwrap();
        let exact = min_subcover_value(&inst, 1000).unwrap();
        let greedy = topress::solver::min_subcover_with(
            &inst,
            &SolverLimits { exact_limit: 0, small_universe: 0, ..SolverLimits::default() },
        )
        .unwrap();
        assert!(inst.is_cover(&exact.certificate));
        if exact.status.is_exact() {
            assert!(exact.value <= greedy.value + 1e-12);
        }
    }
}
