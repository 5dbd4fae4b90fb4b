mod common;

use common::Gen;
use lambdatree::ball_tree::distance;
use lambdatree::graph::WeightedGraph;
use lambdatree::graph_synthesis::{nilpotent_cotree, place_subballs, round_trip, synthesize};
use lambdatree::{Ball, Field, Val};
use proptest::prelude::*;
use rand::Rng;

fn w(x: &[i64]) -> Val {
    Val::from_ints(x)
}

fn graph(n: usize, edges: &[(usize, usize, Val)]) -> WeightedGraph {
    let mut g = WeightedGraph::new();
    for i in 0..n {
        g.add_vertex(format!("v{i}"));
    }
    for (u, v, x) in edges {
        g.add_edge(*u, *v, x.clone());
    }
    g
}

fn theta(a: Val, b: Val, c: Val) -> WeightedGraph {
    graph(2, &[(0, 1, a), (0, 1, b), (0, 1, c)])
}

fn dumbbell(a: Val, b: Val, c: Val) -> WeightedGraph {
    graph(2, &[(0, 0, a), (0, 1, b), (1, 1, c)])
}

fn k4(x: [Val; 6]) -> WeightedGraph {
    let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    graph(
        4,
        &pairs
            .iter()
            .zip(x)
            .map(|(&(u, v), x)| (u, v, x))
            .collect::<Vec<_>>(),
    )
}

fn assert_round_trip(name: &str, g: &WeightedGraph, k: &Field, extended: bool) {
    let rt = round_trip(g, k, 2, 4).unwrap();
    assert!(rt.isomorphic(), "{name}: {:?}", rt.mismatch());
    assert_eq!(rt.synthesis.extended, extended, "{name}");
    assert_eq!(rt.quotient.genus, g.genus(), "{name}");
}

#[test]
fn round_trip_corpus_rank_one() {
    let (q3, q5) = (Field::padic(3), Field::padic(5));
    assert_round_trip("theta", &theta(w(&[2]), w(&[2]), w(&[2])), &q3, false);
    assert_round_trip("theta mixed", &theta(w(&[2]), w(&[3]), w(&[5])), &q3, false);
    assert_round_trip("dumbbell", &dumbbell(w(&[2]), w(&[1]), w(&[4])), &q3, false);
    assert_round_trip("k4", &k4([2, 3, 2, 4, 2, 3].map(|x| w(&[x]))), &q5, false);
    assert_round_trip("odd theta", &theta(w(&[1]), w(&[1]), w(&[1])), &q3, true);
    assert_round_trip(
        "theta funcfield",
        &theta(w(&[2]), w(&[3]), w(&[2])),
        &Field::funcfield_q(),
        false,
    );
}

#[test]
fn round_trip_corpus_rank_two() {
    let k = Field::rank2(3);
    assert_round_trip(
        "theta",
        &theta(w(&[0, 2]), w(&[2, 1]), w(&[2, -1])),
        &k,
        false,
    );
    assert_round_trip(
        "dumbbell",
        &dumbbell(w(&[2, 0]), w(&[0, 3]), w(&[3, -2])),
        &k,
        false,
    );
}

#[test]
fn synthesis_rejects_bad_graphs() {
    let k = Field::padic(3);
    let line = graph(2, &[(0, 1, w(&[2]))]);
    assert!(synthesize(&line, &k).is_err());
    let wide = graph(1, &[(0, 0, w(&[2])), (0, 0, w(&[2]))]);
    assert!(synthesize(&wide, &k).is_err());
    assert!(synthesize(&wide, &Field::padic(5)).is_ok());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cotree_is_complementary_to_a_spanning_tree(seed in any::<u64>(), n in 1usize..8, extra in 0usize..6) {
        let mut g = Gen::new(&Field::rank2(3), seed);
        let weight = |g: &mut Gen| w(&[g.rng.gen_range(0..3), g.rng.gen_range(1..4)]);
        let mut edges = Vec::new();
        for v in 1..n {
            let u = g.rng.gen_range(0..v);
            edges.push((u, v, weight(&mut g)));
        }
        for _ in 0..extra {
            let (u, v) = (g.rng.gen_range(0..n), g.rng.gen_range(0..n));
            edges.push((u, v, w(&[g.rng.gen_range(1..3), g.rng.gen_range(-2..3)])));
        }
        let gr = graph(n, &edges);
        let c = nilpotent_cotree(&gr).unwrap();
        prop_assert_eq!(c.tree.len(), n - 1);
        prop_assert_eq!(c.cotree.len(), gr.genus());
        prop_assert!(c.cotree.iter().all(|&i| gr.edges[i].weight.lead() > 0.into()));
        let tree = graph(n, &c.tree.iter().map(|&i| { let e = &gr.edges[i]; (e.u, e.v, e.weight.clone()) }).collect::<Vec<_>>());
        prop_assert!(tree.is_connected());
    }

    #[test]
    fn subballs_are_disjoint_at_the_requested_depth(seed in any::<u64>(), i in 0usize..3, m in 1usize..=3) {
        let k = common::instances()[i].1.clone();
        let mut g = Gen::new(&k, seed);
        let b = g.ball();
        let depths: Vec<Val> = (0..m).map(|_| {
            let mut c = vec![0; k.rank()];
            c[0] = g.rng.gen_range(1..5);
            if k.rank() > 1 { c[1] = g.rng.gen_range(-3..4); }
            w(&c)
        }).collect();
        let subs: Vec<Ball> = place_subballs(&k, &b, &depths).unwrap();
        for (s, d) in subs.iter().zip(&depths) {
            prop_assert!(s.is_subset(&k, &b));
            prop_assert_eq!(&distance(&k, &b, s), d);
        }
        for x in 0..m {
            for y in x + 1..m {
                prop_assert!(subs[x].is_disjoint(&k, &subs[y]));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn random_weights_round_trip(a in 2i64..6, b in 2i64..6, c in 1i64..6, shape in 0usize..2) {
        let k = Field::padic(5);
        let g = if shape == 0 { theta(w(&[a]), w(&[b]), w(&[c])) } else { dumbbell(w(&[a]), w(&[c]), w(&[b])) };
        let s = synthesize(&g, &k).unwrap();
        prop_assert_eq!(s.schottky.genus(), 2);
        let rt = round_trip(&g, &k, 2, 4).unwrap();
        prop_assert!(rt.isomorphic(), "{:?}", rt.mismatch());
    }
}
