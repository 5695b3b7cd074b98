use proptest::prelude::*;

use homgibbs::classify::{dismantle, is_fertile};
use homgibbs::graphs::{
    double, is_bipartite, tree_site_count, weak_square, weak_square_projection, Board, ConstraintGraph, WeightVector,
};
use homgibbs::homspace::{
    enumerate_maps, lambda_measure, site_marginals, tree_marginal, EnumOptions, HomMap, HomSpace,
};
use homgibbs::mcmc::{Chain, Init};
use homgibbs::scalar::ratio;
use homgibbs::treegibbs::{weights_to_activities, BranchingWalk};
use homgibbs::Rational;
use num_traits::{One, Zero};

fn graph(q: usize, bits: u64) -> ConstraintGraph {
    let pairs: Vec<(usize, usize)> = (0..q).flat_map(|i| (i..q).map(move |j| (i, j))).collect();
    let edges = pairs.iter().enumerate().filter(|&(b, _)| bits >> b & 1 == 1).map(|(_, &e)| e);
    ConstraintGraph::new(q, edges).unwrap()
}

/// Any constraint graph on 1..=max_q nodes, loops allowed.
fn any_graph(max_q: usize) -> impl Strategy<Value = ConstraintGraph> {
    (1..=max_q).prop_flat_map(|q| (Just(q), any::<u64>())).prop_map(|(q, bits)| graph(q, bits))
}

fn connected_graph(max_q: usize) -> impl Strategy<Value = ConstraintGraph> {
    any_graph(max_q).prop_filter("connected with an edge", |h| h.has_edge() && h.is_connected())
}

fn small_board(max_n: usize) -> impl Strategy<Value = Board> {
    (1..=max_n).prop_flat_map(|n| (Just(n), any::<u64>())).prop_map(|(n, bits)| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let edges: Vec<(usize, usize)> =
            pairs.iter().enumerate().filter(|&(b, _)| bits >> b & 1 == 1).map(|(_, &e)| e).collect();
        Board::new(n, edges).unwrap()
    })
}

fn rationals(n: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((1i64..40, 1i64..40), n).prop_map(|v| v.into_iter().map(|(a, b)| ratio(a, b)).collect())
}

fn z(h: &ConstraintGraph, w: &[Rational], i: usize) -> Rational {
    (0..h.q()).filter(|&j| h.adj(i, j)).fold(Rational::zero(), |a, j| a + &w[j])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adjacency_is_symmetric(h in any_graph(8), g in small_board(8)) {
        for i in 0..h.q() {
            for j in 0..h.q() {
                prop_assert_eq!(h.adj(i, j), h.adj(j, i));
            }
        }
        for a in 0..g.n_sites() {
            prop_assert!(!g.adj(a, a));
            for &b in g.neighbors(a) {
                prop_assert!(g.adj(b as usize, a));
            }
        }
    }

    #[test]
    fn double_is_bipartite_of_twice_the_size(h in any_graph(8)) {
        let d = double(&h).unwrap();
        prop_assert_eq!(d.q(), 2 * h.q());
        prop_assert!(is_bipartite(&d).is_some());
        prop_assert!(d.loops().next().is_none());
    }

    #[test]
    fn weak_square_projections_are_homomorphisms(h in any_graph(5)) {
        let g = weak_square(&h);
        prop_assert_eq!(g.n_sites(), h.q() * h.q());
        for which in 0..2 {
            prop_assert!(weak_square_projection(h.q(), which).is_valid(&g, &h));
        }
    }

    #[test]
    fn tree_size_matches_closed_form(r in 2usize..5, depth in 0usize..6) {
        let built = Board::tree(r, depth).unwrap().n_sites() as u128;
        let closed = 1 + (r as u128 + 1) * ((r as u128).pow(depth as u32) - 1) / (r as u128 - 1);
        prop_assert_eq!(built, closed);
        prop_assert_eq!(tree_site_count(r, depth), closed);
    }

    #[test]
    fn fold_sequences_replay(h in connected_graph(6)) {
        if let Some(seq) = dismantle(&h) {
            let last = seq.replay(&h).unwrap();
            prop_assert!(h.is_looped(last));
            prop_assert_eq!(seq.steps.len(), h.q() - 1);
        }
    }

    #[test]
    fn fertility_ignores_labels(h in connected_graph(6), seed in any::<u64>()) {
        let q = h.q();
        let mut perm: Vec<usize> = (0..q).collect();
        let mut s = seed;
        for i in (1..q).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let p = h.permuted(&perm);
        prop_assert_eq!(is_fertile(&h).unwrap().fertile, is_fertile(&p).unwrap().fertile);
        prop_assert_eq!(dismantle(&h).is_some(), dismantle(&p).is_some());
    }

    #[test]
    fn walks_are_exactly_reversible(h in connected_graph(6), r in 1usize..4, seed in rationals(6)) {
        let w: Vec<Rational> = seed[..h.q()].to_vec();
        let bw = BranchingWalk::new(&h, r, WeightVector::new(w.clone()).unwrap()).unwrap();
        let pi = bw.stationary();
        prop_assert!(pi.iter().fold(Rational::zero(), |a, b| a + b).is_one());
        for i in 0..h.q() {
            let row = (0..h.q()).fold(Rational::zero(), |a, j| a + bw.transition(i, j));
            prop_assert!(row.is_one());
            for j in 0..h.q() {
                prop_assert_eq!(&pi[i] * bw.transition(i, j), &pi[j] * bw.transition(j, i));
            }
        }
    }

    #[test]
    fn activities_scale_by_c_to_the_one_minus_r(
        h in connected_graph(6), r in 1usize..4, w in rationals(6), (a, b) in (1i64..50, 1i64..50)
    ) {
        let w = &w[..h.q()];
        let c = ratio(a, b);
        let cw: Vec<Rational> = w.iter().map(|x| x * &c).collect();
        let base = weights_to_activities(&h, r, w).unwrap();
        let scaled = weights_to_activities(&h, r, &cw).unwrap();
        let gauge = (1..r).fold(Rational::one(), |acc, _| acc / &c);
        for i in 0..h.q() {
            prop_assert_eq!(&base.raw[i] * &gauge, scaled.raw[i].clone());
            let hand = &w[i] / (0..r).fold(Rational::one(), |acc, _| acc * z(&h, w, i));
            prop_assert_eq!(&base.raw[i], &hand);
        }
        prop_assert_eq!(base.normalized, scaled.normalized);
    }

    #[test]
    fn backtracking_matches_brute_force(g in small_board(6), h in any_graph(4)) {
        let found = enumerate_maps(&g, &h, &EnumOptions::default()).unwrap();
        let (n, q) = (g.n_sites(), h.q());
        let mut brute = Vec::new();
        for code in 0..q.pow(n as u32) {
            let spins: Vec<u8> = (0..n).map(|s| (code / q.pow(s as u32) % q) as u8).collect();
            if g.edges().iter().all(|&(a, b)| h.adj(spins[a as usize] as usize, spins[b as usize] as usize)) {
                brute.push(HomMap::new(spins));
            }
        }
        let mut found = found;
        found.sort();
        brute.sort();
        prop_assert_eq!(found, brute);
    }

    #[test]
    fn tree_dp_matches_enumeration(depth in 1usize..3, h in connected_graph(3), lam in prop::collection::vec(0.2f64..5.0, 3)) {
        let g = Board::tree(2, depth).unwrap();
        let lambda = &lam[..h.q()];
        let hs = HomSpace::enumerate(&g, &h).unwrap();
        if hs.is_empty() {
            return Ok(());
        }
        let marg = site_marginals(&hs, &lambda_measure(&hs, lambda).unwrap());
        for site in [0, g.n_sites() - 1] {
            let dp = tree_marginal(&g, &h, lambda, &[], site).unwrap();
            for c in 0..h.q() {
                prop_assert!((dp[c] - marg[site][c]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn chain_steps_stay_valid(g in small_board(7), h in connected_graph(4), seed in any::<u64>()) {
        let lambda = vec![1.5; h.q()];
        let Ok(mut chain) = Chain::new(&g, &h, &lambda, &Init::RandomGreedy, &[], seed, 0) else {
            // No homomorphism was found greedily; nothing to check.
            return Ok(());
        };
        for _ in 0..30 {
            chain.sweep();
            prop_assert!(chain.map().is_valid(&g, &h));
        }
    }
}
