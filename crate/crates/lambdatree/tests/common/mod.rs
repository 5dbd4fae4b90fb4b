//! Seeded random instances shared by the integration tests.
#![allow(dead_code)]

use lambdatree::ball_tree::Ball;
use lambdatree::{Elem, Field, Moebius, ProjPoint, Val};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The three base instances every suite runs over.
pub fn instances() -> Vec<(&'static str, Field)> {
    vec![
        ("rational-padic(3)", Field::padic(3)),
        ("funcfield-tadic(Q)", Field::funcfield_q()),
        ("rank2-composite(3)", Field::rank2(3)),
    ]
}

pub struct Gen {
    pub rng: ChaCha8Rng,
    pub k: Field,
}

impl Gen {
    pub fn new(k: &Field, seed: u64) -> Gen {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            k: k.clone(),
        }
    }

    fn coefficient(&mut self) -> Elem {
        let k = &self.k;
        let n = self.rng.gen_range(-40..=40);
        let d = self.rng.gen_range(1..=12);
        k.ratio(n, d)
    }

    /// Sparse element: a few monomials `c·π^e` with small rational `c`.
    pub fn elem(&mut self) -> Elem {
        let terms = self.rng.gen_range(1..=3);
        let mut x = self.k.zero();
        for _ in 0..terms {
            let c = self.coefficient();
            let e = self.rng.gen_range(-2..=4);
            let m = self.k.pow(&self.k.uniformizer(), e);
            x = self.k.add(&x, &self.k.mul(&c, &m));
        }
        x
    }

    pub fn nonzero(&mut self) -> Elem {
        loop {
            let x = self.elem();
            if !self.k.is_zero(&x) {
                return x;
            }
        }
    }

    /// Element of valuation `>= 0`: a few integral monomials.
    pub fn integral(&mut self) -> Elem {
        let k = self.k.clone();
        let terms = self.rng.gen_range(1..=3);
        let mut x = k.zero();
        for _ in 0..terms {
            let c = self.unit_coefficient();
            let e = self.rng.gen_range(0..=4);
            x = k.add(&x, &k.mul(&c, &k.pow(&k.uniformizer(), e)));
        }
        x
    }

    /// Rational coefficient of valuation zero.
    fn unit_coefficient(&mut self) -> Elem {
        loop {
            let c = self.coefficient();
            if self.k.valuation(&c).is_zero() {
                return c;
            }
        }
    }

    /// Element of valuation exactly zero.
    pub fn unit(&mut self) -> Elem {
        let k = self.k.clone();
        let c = self.unit_coefficient();
        let rest = self.integral();
        k.add(&c, &k.mul(&rest, &k.uniformizer()))
    }

    pub fn point(&mut self) -> ProjPoint {
        if self.rng.gen_ratio(1, 12) {
            ProjPoint::Inf
        } else {
            ProjPoint::Fin(self.elem())
        }
    }

    /// A value of the valuation with small coordinates.
    pub fn radius(&mut self) -> Val {
        let coords: Vec<i64> = (0..self.k.rank())
            .map(|i| {
                if i == 0 {
                    self.rng.gen_range(-2..=5)
                } else {
                    self.rng.gen_range(-3..=3)
                }
            })
            .collect();
        Val::from_ints(&coords)
    }

    /// Positive lead coordinate.
    pub fn microbe_value(&mut self) -> Val {
        let mut v = self.radius();
        while !(v.lead() > 0.into()) {
            v = self.radius();
        }
        v
    }

    pub fn ball(&mut self) -> Ball {
        let c = self.elem();
        let r = self.radius();
        Ball::new(&self.k, &c, r)
    }

    /// A ball near `b`: a sub- or super-ball, or one branching off nearby.
    pub fn ball_near(&mut self, b: &Ball) -> Ball {
        let k = self.k.clone();
        let r = self.radius();
        let shift = k.mul(&self.elem(), &k.monomial(b.radius()).unwrap());
        Ball::new(&k, &k.add(b.center(), &shift), r)
    }

    pub fn moebius(&mut self) -> Moebius {
        loop {
            let (a, b, c, d) = (self.elem(), self.elem(), self.elem(), self.elem());
            if let Ok(g) = Moebius::new(&self.k, a, b, c, d) {
                return g;
            }
        }
    }

    /// A product of elementary matrices over `O`: translations by integral
    /// elements, unit scalings and the inversion `z ↦ 1/z`.
    pub fn integral_moebius(&mut self) -> Moebius {
        let k = self.k.clone();
        let mut m = Moebius::identity(&k);
        for _ in 0..4 {
            let f = match self.rng.gen_range(0..4) {
                0 => Moebius::translation(&k, &self.integral()),
                1 => Moebius::new(&k, k.one(), k.zero(), self.integral(), k.one()).unwrap(),
                2 => Moebius::scaling(&k, &self.unit()).unwrap(),
                _ => Moebius::new(&k, k.zero(), k.one(), k.one(), k.zero()).unwrap(),
            };
            m = m.compose(&k, &f);
        }
        m
    }

    /// Points clustered around a few centres so that the spanned tree branches.
    pub fn clustered_points(&mut self, n: usize) -> Vec<ProjPoint> {
        let k = self.k.clone();
        let hubs: Vec<Elem> = (0..3).map(|_| self.elem()).collect();
        let mut out = Vec::new();
        while out.len() < n {
            let p = if self.rng.gen_ratio(1, 20) {
                ProjPoint::Inf
            } else {
                let h = &hubs[self.rng.gen_range(0..hubs.len())];
                let depth = self.radius();
                let x = k.add(h, &k.mul(&self.unit(), &k.monomial(&depth).unwrap()));
                ProjPoint::Fin(x)
            };
            if !out.contains(&p) {
                out.push(p);
            }
        }
        out
    }
}
