mod common;

use std::collections::BTreeSet;

use common::Gen;
use lambdatree::graph_synthesis::nilpotent_cotree;
use lambdatree::schottky::{alphabet, examples, reduced_words, verify_ping_pong, Schottky, Word};
use lambdatree::{Ball, ProjPoint};
use proptest::prelude::*;
use rand::Rng;

fn rank1() -> Schottky {
    verify_ping_pong(examples::rank1()).unwrap()
}

/// Random point of the fundamental domain.
fn point_in_f(s: &Schottky, g: &mut Gen) -> ProjPoint {
    loop {
        let z = g.point();
        if s.in_fundamental_domain(&z) {
            return z;
        }
    }
}

/// The primitive root of a reduced word, up to inversion.
fn root(w: &Word) -> Word {
    let x = w.letters();
    let n = x.len();
    let mut i = 0;
    while 2 * i + 1 < n && x[i] == -x[n - 1 - i] {
        i += 1;
    }
    let (u, c) = (&x[..i], &x[i..n - i]);
    let p = (1..=c.len())
        .find(|&p| c.len() % p == 0 && (0..c.len()).all(|j| c[j] == c[j % p]))
        .unwrap();
    let r = Word::reduce(&[u, &c[..p], Word::reduce(u).inverse().letters()].concat());
    std::cmp::min(r.clone(), r.inverse())
}

#[test]
fn words_up_to_length_six_give_distinct_matrices() {
    let s = rank1();
    let k = s.field();
    let words = s.words_with_matrices(6);
    let keys: BTreeSet<Vec<String>> = words
        .iter()
        .map(|(_, m)| m.entries().iter().map(|e| k.format(e)).collect())
        .collect();
    assert_eq!(keys.len(), words.len());
    assert!(words.iter().all(|(_, m)| !m.is_identity(k)));
}

#[test]
fn ping_pong_containment() {
    for data in [examples::rank1(), examples::far(), examples::rank2()] {
        let s = verify_ping_pong(data).unwrap();
        let k = s.field();
        for &psi in &alphabet(s.genus()) {
            for &phi in &alphabet(s.genus()) {
                if psi == -phi {
                    continue;
                }
                let image = s.letter_matrix(psi).act_on_tree(k, s.letter_ball(phi));
                assert!(image.is_subset(k, s.letter_ball(psi)) && &image != s.letter_ball(psi));
            }
        }
    }
}

#[test]
fn quotient_vertices_are_not_fixed_and_cycles_are_nilpotent() {
    for data in [examples::rank1(), examples::far()] {
        let s = verify_ping_pong(data).unwrap();
        let k = s.field();
        let q = s.quotient_graph(None, 2, 6).unwrap();
        assert_eq!(q.genus, 2);
        assert!(nilpotent_cotree(&q.graph).is_ok());
        for v in &q.representatives {
            for (_, m) in s.words_with_matrices(3) {
                assert_ne!(&m.act_on_tree(k, v), v);
            }
        }
    }
}

#[test]
fn sample_points_have_deeper_neighbours() {
    let s = rank1();
    let k = s.field();
    let (l2, l4) = (
        s.limit_set_sample(2).unwrap(),
        s.limit_set_sample(4).unwrap(),
    );
    let prec = s.sample_precision(2);
    for w in reduced_words(2, 2) {
        let p = ProjPoint::Fin(s.attracting_point(&w, &prec).unwrap());
        assert!(l2.contains(&p));
        let b: Ball = s.ball_of_word(&w).unwrap();
        let p4 = l4
            .points()
            .iter()
            .filter(|x| b.contains_point(k, x))
            .count();
        assert!(p4 >= 2, "{}", w.label());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn orbit_of_the_fundamental_domain(seed in any::<u64>()) {
        let s = rank1();
        let k = s.field();
        let mut g = Gen::new(k, seed);
        let z = point_in_f(&s, &mut g);
        for w in reduced_words(2, 4) {
            let wz = s.word_matrix(&w).apply(k, &z);
            prop_assert!(s.ball_of_word(&w).unwrap().contains_point(k, &wz));
            if w.len() >= 2 {
                prop_assert!(!s.in_fundamental_domain(&wz));
            }
        }
    }

    #[test]
    fn fixed_sets_are_equal_or_disjoint(seed in any::<u64>()) {
        let s = rank1();
        let mut g = Gen::new(s.field(), seed);
        let words = reduced_words(2, 4);
        let u = &words[g.rng.gen_range(0..words.len())];
        let w = &words[g.rng.gen_range(0..words.len())];
        let prec = s.sample_precision(4);
        let fix = |x: &Word| -> BTreeSet<_> {
            [s.attracting_point(x, &prec).unwrap(), s.attracting_point(&x.inverse(), &prec).unwrap()].into_iter().collect()
        };
        let (fu, fw) = (fix(u), fix(w));
        let same = root(u) == root(w);
        prop_assert_eq!(fu == fw, same);
        if !same {
            prop_assert!(fu.is_disjoint(&fw));
        }
    }
}
