mod common;

use common::{instances, Gen};
use lambdatree::valued_field::is_top_nilpotent;
use lambdatree::{Field, Val};
use proptest::prelude::*;
use rand::Rng;

fn instance(i: usize) -> Field {
    instances()[i].1.clone()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn valuation_is_multiplicative_and_ultrametric(seed in any::<u64>(), i in 0usize..3) {
        let k = instance(i);
        let mut g = Gen::new(&k, seed);
        let (x, y) = (g.elem(), g.elem());
        let (vx, vy) = (k.valuation(&x), k.valuation(&y));
        let vxy = k.valuation(&k.mul(&x, &y));
        if k.is_zero(&x) || k.is_zero(&y) {
            prop_assert!(vxy.is_bottom());
        } else {
            prop_assert_eq!(vxy, &vx + &vy);
        }
        let vs = k.valuation(&k.add(&x, &y));
        prop_assert!(vs >= Val::min(&vx, &vy));
        if vx != vy {
            prop_assert_eq!(vs, Val::min(&vx, &vy));
        }
    }

    #[test]
    fn canonical_center_is_constant_on_balls(seed in any::<u64>(), i in 0usize..3) {
        let k = instance(i);
        let mut g = Gen::new(&k, seed);
        let (p, r) = (g.elem(), g.radius());
        let c = k.canonical_center(&p, &r);
        prop_assert_eq!(&k.canonical_center(&c, &r), &c);
        prop_assert!(k.valuation(&k.sub(&p, &c)) >= r);
        let deeper = &r + &Val::from_ints(&vec![g.rng.gen_range(0..3); k.rank()]);
        let z = k.mul(&g.integral(), &k.monomial(&deeper).unwrap());
        prop_assert_eq!(k.canonical_center(&k.add(&p, &z), &r), c);
    }

    #[test]
    fn microbes_are_closed_under_sums_and_multiples(seed in any::<u64>(), i in 0usize..3, n in 1i64..20) {
        let k = instance(i);
        let mut g = Gen::new(&k, seed);
        let (a, b) = (g.radius(), g.radius());
        if is_top_nilpotent(&a).unwrap() && is_top_nilpotent(&b).unwrap() {
            prop_assert!(is_top_nilpotent(&(&a + &b)).unwrap());
        }
        if is_top_nilpotent(&a).unwrap() {
            prop_assert!(is_top_nilpotent(&a.scale(n)).unwrap());
        }
    }

    #[test]
    fn quadratic_norm_has_twice_the_valuation(seed in any::<u64>(), i in 0usize..3) {
        let base = instance(i);
        let ramifier = base.format(&base.uniformizer());
        let k = base.quad_ext(&ramifier).unwrap();
        let mut g = Gen::new(&base, seed);
        let (a, b) = (g.elem(), g.elem());
        prop_assume!(!base.is_zero(&a) || !base.is_zero(&b));
        let s = k.sqrt_ramifier().unwrap();
        let x = k.add(&k.embed(a.clone()), &k.mul(&k.embed(b.clone()), &s));
        let pi = base.uniformizer();
        let norm = base.sub(&base.mul(&a, &a), &base.mul(&pi, &base.mul(&b, &b)));
        prop_assert_eq!(base.valuation(&norm), k.valuation(&x).scale(2));
        let half = base.valuation(&pi).halve();
        let expect = Val::min(&base.valuation(&a), &(&base.valuation(&b) + &half));
        prop_assert_eq!(k.valuation(&x), expect);
    }

    #[test]
    fn residue_representatives_are_pairwise_units(i in 0usize..3, n in 1usize..=3) {
        let k = instance(i);
        let reps = k.residue_representatives(n).unwrap();
        for a in 0..n {
            for b in a + 1..n {
                prop_assert!(k.valuation(&k.sub(&reps[a], &reps[b])).is_zero());
            }
        }
    }

    #[test]
    fn text_round_trip(seed in any::<u64>(), i in 0usize..3) {
        let k = instance(i);
        let mut g = Gen::new(&k, seed);
        let x = g.elem();
        prop_assert_eq!(k.parse(&k.format(&x)).unwrap(), x);
    }
}
