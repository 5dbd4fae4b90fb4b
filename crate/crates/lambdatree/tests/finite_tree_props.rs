mod common;

use common::{instances, Gen};
use lambdatree::ball_tree::segment_vertices;
use lambdatree::finite_tree::{build_tree, insert_point, PointSet};
use lambdatree::Field;
use proptest::prelude::*;
use rand::seq::SliceRandom;

fn instance(i: usize) -> Field {
    instances()[i].1.clone()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn size_bounds_and_shape(seed in any::<u64>(), i in 0usize..3, n in 3usize..=24) {
        let k = instance(i);
        let mut g = Gen::new(&k, seed);
        let l = PointSet::new(g.clustered_points(n));
        let t = build_tree(&k, &l).unwrap();
        prop_assert!(t.vertices().len() <= n - 2);
        prop_assert!(t.edges().len() <= n - 3);
        prop_assert!(t.is_connected());
        prop_assert!(t.is_tree());
    }

    #[test]
    fn insertion_in_any_order_matches_batch(seed in any::<u64>(), i in 0usize..3, n in 4usize..=16) {
        let k = instance(i);
        let mut g = Gen::new(&k, seed);
        let mut pts = g.clustered_points(n);
        pts.shuffle(&mut g.rng);
        let mut l = PointSet::new(pts[..3].to_vec());
        let mut t = build_tree(&k, &l).unwrap();
        for p in &pts[3..] {
            let (t2, l2) = insert_point(&k, &t, &l, p).unwrap();
            t = t2;
            l = l2;
        }
        prop_assert_eq!(t, build_tree(&k, &l).unwrap());
    }

    #[test]
    fn segments_follow_tree_edges(seed in any::<u64>(), i in 0usize..3, n in 3usize..=14) {
        let k = instance(i);
        let mut g = Gen::new(&k, seed);
        let l = PointSet::new(g.clustered_points(n));
        let t = build_tree(&k, &l).unwrap();
        let v: Vec<_> = t.vertices().iter().cloned().collect();
        for a in &v {
            for b in &v {
                if a >= b {
                    continue;
                }
                let chain = segment_vertices(&k, a, b, l.points());
                prop_assert_eq!(chain.first(), Some(a));
                prop_assert_eq!(chain.last(), Some(b));
                for w in chain.windows(2) {
                    prop_assert!(t.has_edge(&w[0], &w[1]));
                }
            }
        }
    }

    #[test]
    fn stars_are_disjoint_except_outwards(seed in any::<u64>(), i in 0usize..3, n in 3usize..=14) {
        let k = instance(i);
        let mut g = Gen::new(&k, seed);
        let l = PointSet::new(g.clustered_points(n));
        let t = build_tree(&k, &l).unwrap();
        for v in t.vertices() {
            let star = t.star(&k, v).unwrap();
            let inner: Vec<_> = star.iter().map(|(w, _)| w).filter(|w| w.is_subset(&k, v)).collect();
            prop_assert!(star.len() - inner.len() <= 1);
            for x in 0..inner.len() {
                for y in x + 1..inner.len() {
                    prop_assert!(inner[x].is_disjoint(&k, inner[y]));
                }
            }
        }
    }
}
