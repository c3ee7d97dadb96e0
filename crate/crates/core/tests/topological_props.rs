mod common;

use rand::Rng;
use topress::covers::{join, SetFamily};
use topress::dynsys::{make_circle_doubling, FiniteSystem, Potential};
use topress::lattice::{decompose, LatticePoint};
use topress::topological::{
    cover_pressure_value, p_mode_log_bound, separated_value, spanning_value, Mode, PressureOptions,
};

fn n1(t: u64) -> LatticePoint {
    LatticePoint::new(vec![t])
}

struct Values {
    q: f64,
    p: f64,
    s: f64,
    g: f64,
    exact: bool,
}

fn all_values(sys: &FiniteSystem, f: &Potential, a: &SetFamily, n: &LatticePoint) -> Values {
    let o = PressureOptions::default();
    let q = cover_pressure_value(sys, f, a, n, Mode::Q, &o).unwrap();
    let p = cover_pressure_value(sys, f, a, n, Mode::P, &o).unwrap();
    let s = separated_value(sys, f, a, n, &o).unwrap();
    let g = spanning_value(sys, f, a, n, &o).unwrap();
    let exact = [q.sample.status, p.sample.status, s.sample.status, g.sample.status]
        .iter()
        .all(|st| st.is_exact());
    Values { q: q.sample.log_value, p: p.sample.log_value, s: s.sample.log_value, g: g.sample.log_value, exact }
}

/// Q, P, S and G from the itinerary family by exhaustive search.
fn brute_values(sys: &FiniteSystem, f: &Potential, a: &SetFamily, n: &LatticePoint) -> Option<(f64, f64, f64, f64)> {
    let fam = common::itinerary_join(sys, a, n);
    if fam.len() > 16 || sys.state_count() > 12 {
        return None;
    }
    let fs: Vec<f64> = (0..sys.state_count()).map(|x| sys.birkhoff_sum(f, n, x).unwrap()).collect();
    let m = sys.state_count();
    let inf: Vec<f64> = fam.iter().map(|s| s.iter().map(|&x| fs[x as usize].exp()).fold(f64::INFINITY, f64::min)).collect();
    let sup: Vec<f64> = fam.iter().map(|s| s.iter().map(|&x| fs[x as usize].exp()).fold(0.0, f64::max)).collect();
    let q = common::brute_min_cover(m, &fam, &inf);
    let p = common::brute_min_cover(m, &fam, &sup);
    let mut edges = Vec::new();
    for x in 0..m {
        for y in x + 1..m {
            if fam.iter().any(|s| s.contains(&(x as u32)) && s.contains(&(y as u32))) {
                edges.push((x, y));
            }
        }
    }
    let w: Vec<f64> = fs.iter().map(|v| v.exp()).collect();
    Some((q.ln(), p.ln(), common::brute_mwis(&w, &edges).ln(), common::brute_mwds(&w, &edges).ln()))
}

#[test]
fn values_match_exhaustive_oracles() {
    let mut rng = common::rng(41);
    let mut compared = 0;
    for trial in 0..400 {
        let dims = 1 + trial % 2;
        let sys = common::random_system(&mut rng, dims, 8);
        let m = sys.state_count();
        let a = if trial % 3 == 0 { common::random_partition(&mut rng, m, 3) } else { common::random_cover(&mut rng, m, 3) };
        let f = common::random_potential(&mut rng, m);
        let n = LatticePoint::new((0..dims).map(|_| rng.gen_range(1..=3)).collect::<Vec<_>>());
        let Some((q, p, s, g)) = brute_values(&sys, &f, &a, &n) else { continue };
        let v = all_values(&sys, &f, &a, &n);
        assert!(v.exact);
        for (got, want, name) in [(v.q, q, "Q"), (v.p, p, "P"), (v.s, s, "S"), (v.g, g, "G")] {
            assert!((got - want).abs() < 1e-9, "trial {trial} {name}: {got} vs {want}");
        }
        compared += 1;
    }
    assert!(compared > 200);
}

#[test]
fn g_s_p_chain_for_covers() {
    let mut rng = common::rng(42);
    for trial in 0..300 {
        let dims = 1 + trial % 2;
        let sys = common::random_system(&mut rng, dims, 10);
        let m = sys.state_count();
        let k = rng.gen_range(1..=4);
        let a = common::random_cover(&mut rng, m, k);
        let f = common::random_potential(&mut rng, m);
        let n = LatticePoint::new((0..dims).map(|_| rng.gen_range(1..=4)).collect::<Vec<_>>());
        let v = all_values(&sys, &f, &a, &n);
        assert!(v.exact);
        let tol = 1e-12 * (1.0 + v.p.abs());
        assert!(v.q <= v.p + tol && v.g <= v.s + tol && v.s <= v.p + tol, "trial {trial}");
    }
}

#[test]
fn refinement_raises_q() {
    let mut rng = common::rng(43);
    for _ in 0..100 {
        let sys = common::random_system(&mut rng, 1, 10);
        let m = sys.state_count();
        let a = common::random_cover(&mut rng, m, 3);
        let b = join(&a, &common::random_cover(&mut rng, m, 3)).unwrap();
        let f = common::random_potential(&mut rng, m);
        let n = n1(rng.gen_range(1..=4));
        let o = PressureOptions::default();
        let qa = cover_pressure_value(&sys, &f, &a, &n, Mode::Q, &o).unwrap();
        let qb = cover_pressure_value(&sys, &f, &b, &n, Mode::Q, &o).unwrap();
        assert!(qa.sample.status.is_exact() && qb.sample.status.is_exact());
        assert!(qa.sample.log_value <= qb.sample.log_value + 1e-12);
    }
}

#[test]
fn adding_a_constant_scales_every_value() {
    let mut rng = common::rng(44);
    for trial in 0..100 {
        let dims = 1 + trial % 2;
        let sys = common::random_system(&mut rng, dims, 9);
        let m = sys.state_count();
        let a = common::random_cover(&mut rng, m, 3);
        let f = common::random_potential(&mut rng, m);
        let c = rng.gen_range(-2.0..2.0);
        let n = LatticePoint::new((0..dims).map(|_| rng.gen_range(1..=3)).collect::<Vec<_>>());
        let lambda = n.lambda().unwrap() as f64;
        let base = all_values(&sys, &f, &a, &n);
        let shifted = all_values(&sys, &f.shifted(c).unwrap(), &a, &n);
        for (x, y) in [(base.q, shifted.q), (base.p, shifted.p), (base.s, shifted.s), (base.g, shifted.g)] {
            assert!((y - (x + lambda * c)).abs() < 1e-9, "trial {trial}");
            assert!((y / lambda - (x / lambda + c)).abs() < 1e-9);
        }
    }
}

#[test]
fn constant_potentials_count_minimal_subcovers() {
    let mut rng = common::rng(45);
    for _ in 0..50 {
        let sys = common::random_system(&mut rng, 1, 8);
        let m = sys.state_count();
        let a = common::random_cover(&mut rng, m, 3);
        let n = n1(rng.gen_range(1..=3));
        let o = PressureOptions::default();
        let zero = cover_pressure_value(&sys, &Potential::zero(m), &a, &n, Mode::Q, &o).unwrap();
        let fam = common::itinerary_join(&sys, &a, &n);
        if fam.len() <= 16 {
            let count = common::brute_min_cover(m, &fam, &vec![1.0; fam.len()]);
            assert!((zero.sample.raw_value() - count).abs() < 1e-9);
        }
        let c = 0.7;
        let cv = cover_pressure_value(&sys, &Potential::constant(m, c), &a, &n, Mode::Q, &o).unwrap();
        assert!((cv.sample.log_value - (zero.sample.log_value + n.lambda().unwrap() as f64 * c)).abs() < 1e-12);
    }
}

#[test]
fn point_set_examples() {
    let o = PressureOptions::default();
    // path-shaped closeness on five states
    let sys = FiniteSystem::new(5, vec![(0..5).collect()], &[]).unwrap();
    let path = SetFamily::cover(5, vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 4]]).unwrap();
    let zero = Potential::zero(5);
    let n = n1(1);
    assert!((separated_value(&sys, &zero, &path, &n, &o).unwrap().sample.raw_value() - 3.0).abs() < 1e-12);
    assert!((spanning_value(&sys, &zero, &path, &n, &o).unwrap().sample.raw_value() - 2.0).abs() < 1e-12);

    let mut rng = common::rng(46);
    let sys = common::random_system(&mut rng, 1, 9);
    let m = sys.state_count();
    let f = common::random_potential(&mut rng, m);
    let n = n1(3);
    let fs = sys.birkhoff_sums(&f, &n).unwrap();
    let max = fs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = fs.iter().copied().fold(f64::INFINITY, f64::min);
    let one = SetFamily::trivial(m);
    assert!((separated_value(&sys, &f, &one, &n, &o).unwrap().sample.log_value - max).abs() < 1e-12);
    assert!((spanning_value(&sys, &f, &one, &n, &o).unwrap().sample.log_value - min).abs() < 1e-12);
    let singles = SetFamily::singletons(m);
    let zero = Potential::zero(m);
    assert!((separated_value(&sys, &zero, &singles, &n, &o).unwrap().sample.raw_value() - m as f64).abs() < 1e-9);
    assert!((spanning_value(&sys, &zero, &singles, &n, &o).unwrap().sample.raw_value() - m as f64).abs() < 1e-9);
}

#[test]
fn arc_potential_matches_binomial_sum() {
    let m = 1001;
    let sys = make_circle_doubling(m).unwrap();
    let labels: Vec<u32> = (0..m).map(|x| u32::from(2 * x >= m)).collect();
    let arc = SetFamily::from_labels(&labels);
    for a in [0.0, 1.0, -0.5] {
        let f = Potential::new(labels.iter().map(|&l| a * l as f64).collect()).unwrap();
        for t in 1..=8u64 {
            let v = cover_pressure_value(&sys, &f, &arc, &n1(t), Mode::Q, &PressureOptions::default()).unwrap();
            let mut binom = 1.0f64;
            let mut oracle = 0.0;
            for j in 0..=t {
                oracle += binom * (a * j as f64).exp();
                binom = binom * (t - j) as f64 / (j + 1) as f64;
            }
            assert!((v.sample.log_value - oracle.ln()).abs() < 1e-9, "a={a} t={t}");
        }
    }
}

#[test]
fn p_values_respect_the_tiling_bound() {
    let mut rng = common::rng(47);
    let o = PressureOptions::default();
    for trial in 0..120 {
        let dims = 1 + trial % 2;
        let sys = common::random_system(&mut rng, dims, 8);
        let m = sys.state_count();
        let a = common::random_cover(&mut rng, m, 3);
        let f = common::random_potential(&mut rng, m);
        let n = LatticePoint::new((0..dims).map(|_| rng.gen_range(1..=5)).collect::<Vec<_>>());
        let p = LatticePoint::new(n.coords().iter().map(|&c| rng.gen_range(1..=c)).collect::<Vec<_>>());
        let pv = |b: &LatticePoint| cover_pressure_value(&sys, &f, &a, b, Mode::P, &o).unwrap().sample;
        let (pn, pp, p1) = (pv(&n), pv(&p), pv(&LatticePoint::ones(dims)));
        assert!(pn.status.is_exact() && pp.status.is_exact() && p1.status.is_exact());
        let bound = p_mode_log_bound(p1.log_value, pp.log_value, &n, &p).unwrap();
        assert!(pn.log_value <= bound + 1e-9, "trial {trial}");
        // P_1 <= |A| e^{sup |f|} bounds the residue factor
        assert!(p1.log_value <= (a.len() as f64).ln() + f.sup_norm() + 1e-12);
    }
}

#[test]
fn residue_needs_more_than_the_sup_norm() {
    // with f = 0 the residue factor cannot be e^{|residue| sup|f|} = 1:
    // the binary arc partition under doubling has P_5 = 32 but P_2^2 = 16
    let m = 101;
    let sys = make_circle_doubling(m).unwrap();
    let arc = SetFamily::from_labels(&(0..m).map(|x| u32::from(2 * x >= m)).collect::<Vec<_>>());
    let f = Potential::zero(m);
    let o = PressureOptions::default();
    let p5 = cover_pressure_value(&sys, &f, &arc, &n1(5), Mode::P, &o).unwrap().sample;
    let p2 = cover_pressure_value(&sys, &f, &arc, &n1(2), Mode::P, &o).unwrap().sample;
    let p1 = cover_pressure_value(&sys, &f, &arc, &n1(1), Mode::P, &o).unwrap().sample;
    let d = decompose(&n1(5), &n1(2), &n1(0)).unwrap();
    assert_eq!((d.tile_count(), d.residue.len()), (2, 1));
    let sup_norm_form = d.tile_count() as f64 * p2.log_value + d.residue.len() as f64 * f.sup_norm();
    assert!(p5.log_value > sup_norm_form + 0.5);
    assert!(p5.log_value <= p_mode_log_bound(p1.log_value, p2.log_value, &n1(5), &n1(2)).unwrap() + 1e-12);
}

#[test]
fn spanning_sums_can_undercut_q_for_overlapping_covers() {
    // a spanning point x only covers the members through x, not every state close to x
    let sys = FiniteSystem::new(8, vec![vec![4, 4, 3, 7, 6, 7, 2, 1]], &[]).unwrap();
    let a = SetFamily::cover(8, vec![vec![0, 1, 4], vec![0, 2, 3, 4, 5, 6, 7], vec![0, 6, 7]]).unwrap();
    let f = Potential::new(vec![
        0.6641923474565017, 0.8742008162402137, 0.41804260789968817, -0.09399611276257946,
        0.7298762990993786, 0.16757677673452331, 0.9288781521175387, -0.5383403896680936,
    ])
    .unwrap();
    let n = n1(3);
    let (q, p, s, g) = brute_values(&sys, &f, &a, &n).unwrap();
    let v = all_values(&sys, &f, &a, &n);
    assert!((v.q - q).abs() < 1e-9 && (v.g - g).abs() < 1e-9);
    assert!(q > g + 0.1);
    assert!(g <= s && s <= p);
}

#[test]
fn chain_holds_for_partitions() {
    let mut rng = common::rng(48);
    for trial in 0..300 {
        let dims = 1 + trial % 2;
        let sys = common::random_system(&mut rng, dims, 10);
        let m = sys.state_count();
        let k = rng.gen_range(1..=4);
        let a = common::random_partition(&mut rng, m, k);
        let f = common::random_potential(&mut rng, m);
        let n = LatticePoint::new((0..dims).map(|_| rng.gen_range(1..=4)).collect::<Vec<_>>());
        let v = all_values(&sys, &f, &a, &n);
        let tol = 1e-12 * (1.0 + v.p.abs());
        assert!(v.q <= v.g + tol && v.g <= v.s + tol && v.s <= v.p + tol, "trial {trial}");
    }
}
