mod common;

use common::{glue_targets, random_graph, random_step, rng};
use molspace::budget::Budget;
use molspace::canon::is_isomorphic;
use molspace::charfn::{apply_basic, base_copies, basic_moves, coefficients_from_base, join_expansion};
use molspace::construct::{join, strong_product};
use molspace::euler::{euler, euler_local};
use molspace::homology::homology;
use molspace::lattice::{coords_from_space, merge_pair, space_from_coords, split_pair};
use molspace::{MolecularSpace, VertexId};
use num_rational::BigRational;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn contractible_moves_keep_euler_and_homology(seed in any::<u64>()) {
        let budget = Budget::default();
        let mut r = rng(seed);
        let mut g = random_graph(&mut r, 12);
        let e0 = euler(&g).unwrap();
        let h0 = homology(&g, None).unwrap();
        for _ in 0..10 {
            let Some((step, next)) = random_step(&mut r, &g, 12, &budget) else { break };
            prop_assert_eq!(euler(&next).unwrap(), e0, "{:?}", step.mv);
            prop_assert!(homology(&next, None).unwrap().same_as(&h0), "{:?}", step.mv);
            g = next;
        }
    }

    #[test]
    fn coordinates_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, 12);
        let m = coords_from_space(&g);
        prop_assert_eq!(space_from_coords(&m).unwrap(), g.clone());
        prop_assert!(m.width() <= 2.max(g.volume().saturating_sub(2)));
        prop_assert!(m.rows.iter().flatten().all(|&x| (0..=2).contains(&x)));
    }

    #[test]
    fn split_and_merge_toggle_one_pair(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, 10);
        prop_assume!(g.volume() >= 2);
        let m = coords_from_space(&g);
        let a = r.gen_range(0..g.volume());
        let b = (a + r.gen_range(1..g.volume())) % g.volume();
        let (u, v) = (g.id(a), g.id(b));
        let (out, want) = if g.adj(a, b) {
            (split_pair(&m, a, b).unwrap(), g.delete_edge(u, v).unwrap())
        } else {
            (merge_pair(&m, a, b).unwrap(), g.add_edge(u, v).unwrap())
        };
        prop_assert_eq!(space_from_coords(&out).unwrap(), want);
    }

    #[test]
    fn product_balls_multiply(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, 5);
        let h = random_graph(&mut r, 5);
        let p = strong_product(&g, &h);
        let m = h.volume();
        for x in 0..p.volume() {
            let (i, j) = (x / m, x % m);
            let bg = g.ball(g.id(i)).unwrap().indices();
            let bh = h.ball(h.id(j)).unwrap().indices();
            let mut want: Vec<usize> = bg.iter().flat_map(|&a| bh.iter().map(move |&b| a * m + b)).collect();
            want.sort_unstable();
            prop_assert_eq!(p.ball(p.id(x)).unwrap().indices(), want);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn local_formula_matches_euler(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, 15);
        prop_assert_eq!(euler_local(&g).unwrap(), euler(&g).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn basic_moves_keep_characteristic_values(seed in any::<u64>()) {
        let budget = Budget::default();
        let mut r = rng(seed);
        let k2 = MolecularSpace::complete(2);
        let s0 = MolecularSpace::isolated(2);
        let cases = [
            (s0.clone(), vec![q(1)], q(2)),
            (k2.clone(), vec![q(1), q(1)], q(3)),
            (k2.clone(), vec![q(1), q(-2)], q(0)),
        ];
        for (base, seeds, value) in cases {
            let f = coefficients_from_base(&base, &seeds).unwrap();
            let mut g = base.clone();
            for _ in 0..8 {
                let mut targets = if g.volume() < 10 { base_copies(&g, &base, 6).unwrap() } else { Vec::new() };
                if g.volume() < 10 {
                    targets.extend(glue_targets(&mut r, &g));
                }
                let moves = basic_moves(&g, &base, &targets, &budget).unwrap();
                let Some(step) = moves.choose(&mut r) else { break };
                g = apply_basic(&g, &base, &step.mv, &budget).unwrap();
                prop_assert_eq!(f.evaluate(&g).unwrap(), value.clone(), "{:?}", step.mv);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn join_expansion_matches_direct_evaluation(seed in any::<u64>(), a in -3i64..4, b in -3i64..4) {
        let mut r = rng(seed);
        let (g, h) = (random_graph(&mut r, 6), random_graph(&mut r, 6));
        let f = coefficients_from_base(&MolecularSpace::complete(2), &[q(a), q(b)]).unwrap();
        prop_assert_eq!(f.evaluate(&join(&g, &h)).unwrap(), join_expansion(&f, &g, &h).unwrap());
    }

    #[test]
    fn shifts_compose(seed in any::<u64>(), n in 1usize..6, m in 1usize..6) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, 9);
        let f = coefficients_from_base(&MolecularSpace::isolated(2), &[q(3)]).unwrap();
        let direct = f.shift(n + m - 1);
        prop_assert_eq!(f.shift(n).shift(m).coeffs(10), direct.coeffs(10));
        prop_assert_eq!(f.shift(n).shift(m).evaluate(&g).unwrap(), direct.evaluate(&g).unwrap());
    }
}

#[test]
fn round_trip_of_sparse_labels_is_isomorphic() {
    let g = MolecularSpace::new([2, 5, 9], [(2, 5)]).unwrap();
    let back = space_from_coords(&coords_from_space(&g)).unwrap();
    assert_eq!(is_isomorphic(&back, &g), Some(true));
    assert_eq!(back.vertices(), &[VertexId(0), VertexId(1), VertexId(2)]);
}
