//! Dense univariate polynomials and reduced rational functions over `Q` or
//! `F_p`. Coefficients are always `BigRational`; in `F_p` they are kept as
//! integers in `0..p`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Coefficient field of a polynomial ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Coef {
    Q,
    Fp(u64),
}

impl Coef {
    pub fn reduce(self, x: BigRational) -> BigRational {
        match self {
            Coef::Q => x,
            Coef::Fp(p) => {
                let p = BigInt::from(p);
                let n = x.numer().mod_floor(&p);
                if x.is_integer() {
                    return BigRational::from_integer(n);
                }
                let d = x.denom().mod_floor(&p);
                assert!(!d.is_zero(), "denominator divisible by the characteristic");
                let inv = mod_inverse(&d, &p);
                BigRational::from_integer((n * inv).mod_floor(&p))
            }
        }
    }

    pub fn add(self, a: &BigRational, b: &BigRational) -> BigRational {
        self.reduce(a + b)
    }

    pub fn sub(self, a: &BigRational, b: &BigRational) -> BigRational {
        self.reduce(a - b)
    }

    pub fn mul(self, a: &BigRational, b: &BigRational) -> BigRational {
        self.reduce(a * b)
    }

    pub fn neg(self, a: &BigRational) -> BigRational {
        self.reduce(-a)
    }

    pub fn inv(self, a: &BigRational) -> BigRational {
        assert!(!a.is_zero(), "inverse of zero coefficient");
        match self {
            Coef::Q => a.recip(),
            Coef::Fp(p) => {
                let p = BigInt::from(p);
                BigRational::from_integer(mod_inverse(&a.to_integer(), &p))
            }
        }
    }

    /// Square root in the coefficient field, if one exists.
    pub fn sqrt(self, a: &BigRational) -> Option<BigRational> {
        match self {
            Coef::Q => rational_sqrt(a),
            Coef::Fp(p) => {
                let a = a.to_integer();
                (0..p)
                    .map(BigInt::from)
                    .find(|s| (s * s - &a).mod_floor(&BigInt::from(p)).is_zero())
                    .map(BigRational::from_integer)
            }
        }
    }

    pub fn characteristic(self) -> u64 {
        match self {
            Coef::Q => 0,
            Coef::Fp(p) => p,
        }
    }
}

/// Inverse of `a` modulo `m` (`a` must be a unit).
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.mod_floor(m).extended_gcd(m);
    assert!(e.gcd.is_one(), "{a} is not invertible modulo {m}");
    e.x.mod_floor(m)
}

/// Exact square root of a non-negative rational, if it is a square.
pub fn rational_sqrt(a: &BigRational) -> Option<BigRational> {
    if a.is_negative() {
        return None;
    }
    let n = a.numer().sqrt();
    let d = a.denom().sqrt();
    (&n * &n == *a.numer() && &d * &d == *a.denom()).then(|| BigRational::new(n, d))
}

/// Polynomial with coefficients listed from degree 0 upwards, without
/// trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly(pub Vec<BigRational>);

impl Poly {
    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn constant(c: BigRational) -> Self {
        Poly(vec![c]).trimmed()
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    /// `c·t^k`.
    pub fn monomial(c: BigRational, k: usize) -> Self {
        let mut v = vec![BigRational::zero(); k];
        v.push(c);
        Poly(v).trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.0.last().is_some_and(Zero::is_zero) {
            self.0.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lc(&self) -> BigRational {
        self.0.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.0.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Order of vanishing at `t = 0`.
    pub fn ord(&self) -> Option<usize> {
        self.0.iter().position(|c| !c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.0.len() == 1 && self.0[0].is_one()
    }

    pub fn reduce(self, k: Coef) -> Self {
        Poly(self.0.into_iter().map(|c| k.reduce(c)).collect()).trimmed()
    }

    pub fn add(&self, o: &Poly, k: Coef) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly((0..n).map(|i| k.add(&self.coeff(i), &o.coeff(i))).collect()).trimmed()
    }

    pub fn sub(&self, o: &Poly, k: Coef) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly((0..n).map(|i| k.sub(&self.coeff(i), &o.coeff(i))).collect()).trimmed()
    }

    pub fn neg(&self, k: Coef) -> Poly {
        Poly(self.0.iter().map(|c| k.neg(c)).collect())
    }

    pub fn scale(&self, c: &BigRational, k: Coef) -> Poly {
        Poly(self.0.iter().map(|x| k.mul(x, c)).collect()).trimmed()
    }

    pub fn mul(&self, o: &Poly, k: Coef) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigRational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out).reduce(k)
    }

    /// Multiply by `t^s`.
    pub fn shift(&self, s: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![BigRational::zero(); s];
        v.extend(self.0.iter().cloned());
        Poly(v)
    }

    /// Divide by `t^s`, assuming `t^s` divides `self`.
    pub fn unshift(&self, s: usize) -> Poly {
        debug_assert!(self.0.iter().take(s).all(Zero::is_zero));
        Poly(self.0.iter().skip(s).cloned().collect())
    }

    pub fn monic(&self, k: Coef) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(&k.inv(&self.lc()), k)
    }

    pub fn divrem(&self, d: &Poly, k: Coef) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.degree().unwrap();
        let inv = k.inv(&d.lc());
        let mut r = self.clone();
        let mut q = vec![BigRational::zero(); self.0.len().saturating_sub(dd)];
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let c = k.mul(&r.lc(), &inv);
            let s = rd - dd;
            q[s] = c.clone();
            r = r.sub(&Poly::monomial(c, s).mul(d, k), k);
        }
        (Poly(q).trimmed(), r)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &Poly, k: Coef) -> Poly {
        if k != Coef::Q {
            return self.euclid(o, k);
        }
        if self.is_zero() || o.is_zero() {
            return self.add(o, k).monic(k);
        }
        // Powers of `t` split off exactly; the rest goes through a primitive
        // remainder sequence over `Z`, which keeps coefficients small.
        let (i, j) = (self.ord().unwrap(), o.ord().unwrap());
        let (a, b) = (self.unshift(i), o.unshift(j));
        let g = if coprime_mod_prime(&a, &b) {
            Poly::one()
        } else {
            primitive_gcd(&a, &b)
        };
        g.shift(i.min(j))
    }

    fn euclid(&self, o: &Poly, k: Coef) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b, k).1;
            a = b;
            b = r;
        }
        a.monic(k)
    }

    /// Monic square root, if `self` is a square of a monic polynomial.
    pub fn monic_sqrt(&self, k: Coef) -> Option<Poly> {
        let d = self.degree()?;
        if d % 2 == 1 || !self.lc().is_one() {
            return None;
        }
        if k == Coef::Fp(2) {
            return None;
        }
        let m = d / 2;
        // Match coefficients from the top: s_m = 1, then s_{m-j} from degree 2m-j.
        let mut s = vec![BigRational::zero(); m + 1];
        s[m] = BigRational::one();
        let two_inv = k.inv(&k.reduce(BigRational::from_integer(2.into())));
        for j in 1..=m {
            let deg = 2 * m - j;
            let mut acc = self.coeff(deg);
            for i in (m - j + 1)..=m {
                let o = deg as isize - i as isize;
                if o > (m - j) as isize && o <= m as isize {
                    acc = k.sub(&acc, &k.mul(&s[i], &s[o as usize]));
                }
            }
            s[m - j] = k.mul(&acc, &two_inv);
        }
        let root = Poly(s).trimmed();
        (root.mul(&root, k) == *self).then_some(root)
    }
}

/// Integer coefficients with content 1 and positive leading coefficient.
fn primitive(v: Vec<BigInt>) -> Vec<BigInt> {
    let mut v = v;
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    let c = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if c.is_zero() {
        return v;
    }
    let c = if v.last().unwrap().is_negative() {
        -c
    } else {
        c
    };
    v.into_iter().map(|x| x / &c).collect()
}

fn integer_primitive(p: &Poly) -> Vec<BigInt> {
    let l = p.0.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    primitive(
        p.0.iter()
            .map(|x| (x * BigRational::from_integer(l.clone())).to_integer())
            .collect(),
    )
}

/// Monic gcd over `Q` by pseudo-division of primitive integer polynomials.
fn primitive_gcd(a: &Poly, b: &Poly) -> Poly {
    let (mut a, mut b) = (integer_primitive(a), integer_primitive(b));
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        let mut r = a;
        while r.len() >= b.len() {
            let (lr, lb) = (r.last().unwrap().clone(), b.last().unwrap().clone());
            let s = r.len() - b.len();
            let mut next: Vec<BigInt> = r.iter().map(|x| x * &lb).collect();
            for (i, y) in b.iter().enumerate() {
                next[i + s] -= &lr * y;
            }
            r = primitive(next);
        }
        a = b;
        b = r;
    }
    Poly(a.into_iter().map(BigRational::from_integer).collect()).monic(Coef::Q)
}

/// Sufficient test for coprimality over `Q`: the images modulo a large prime
/// not dividing either leading coefficient are coprime.
fn coprime_mod_prime(a: &Poly, b: &Poly) -> bool {
    const P: u64 = (1 << 61) - 1;
    if a.degree().is_none_or(|d| d == 0) || b.degree().is_none_or(|d| d == 0) {
        return false;
    }
    let p = BigInt::from(P);
    let residue = |x: &BigRational| -> Option<u64> {
        let d = u64::try_from(x.denom().mod_floor(&p)).unwrap();
        let n = u64::try_from(x.numer().mod_floor(&p)).unwrap();
        (d != 0).then(|| mul_mod(n, pow_mod(d, P - 2, P), P))
    };
    let image = |f: &Poly| -> Option<Vec<u64>> { f.0.iter().map(residue).collect() };
    let (Some(mut x), Some(mut y)) = (image(a), image(b)) else {
        return false;
    };
    if *x.last().unwrap() == 0 || *y.last().unwrap() == 0 {
        return false;
    }
    // Euclid over `F_P` on machine words.
    while !y.is_empty() {
        let inv = pow_mod(*y.last().unwrap(), P - 2, P);
        while x.len() >= y.len() {
            let c = mul_mod(*x.last().unwrap(), inv, P);
            let s = x.len() - y.len();
            for (i, &yi) in y.iter().enumerate() {
                x[i + s] = (x[i + s] + P - mul_mod(c, yi, P)) % P;
            }
            while x.last() == Some(&0) {
                x.pop();
            }
        }
        std::mem::swap(&mut x, &mut y);
    }
    x.len() == 1
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

/// Reduced rational function `num/den` with `den` monic and coprime to `num`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatFn {
    pub num: Poly,
    pub den: Poly,
}

impl RatFn {
    pub fn new(num: Poly, den: Poly, k: Coef) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        let num = num.reduce(k);
        let den = den.reduce(k);
        if num.is_zero() {
            return RatFn {
                num,
                den: Poly::one(),
            };
        }
        let g = num.gcd(&den, k);
        let (mut n, mut d) = if g.is_one() {
            (num, den)
        } else {
            (num.divrem(&g, k).0, den.divrem(&g, k).0)
        };
        let lc = d.lc();
        if !lc.is_one() {
            let inv = k.inv(&lc);
            n = n.scale(&inv, k);
            d = d.scale(&inv, k);
        }
        RatFn { num: n, den: d }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFn {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &RatFn, k: Coef) -> RatFn {
        if self.den == o.den {
            return RatFn::new(self.num.add(&o.num, k), self.den.clone(), k);
        }
        RatFn::new(
            self.num.mul(&o.den, k).add(&o.num.mul(&self.den, k), k),
            self.den.mul(&o.den, k),
            k,
        )
    }

    pub fn neg(&self, k: Coef) -> RatFn {
        RatFn {
            num: self.num.neg(k),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &RatFn, k: Coef) -> RatFn {
        self.add(&o.neg(k), k)
    }

    pub fn mul(&self, o: &RatFn, k: Coef) -> RatFn {
        RatFn::new(self.num.mul(&o.num, k), self.den.mul(&o.den, k), k)
    }

    pub fn inv(&self, k: Coef) -> RatFn {
        assert!(!self.is_zero(), "inverse of zero");
        // Already coprime: only the new denominator needs to be made monic.
        let inv = k.inv(&self.num.lc());
        RatFn {
            num: self.den.scale(&inv, k),
            den: self.num.scale(&inv, k),
        }
    }

    /// `t`-adic order.
    pub fn ord(&self) -> Option<i64> {
        let a = self.num.ord()? as i64;
        let b = self.den.ord().expect("non-zero denominator") as i64;
        Some(a - b)
    }

    /// Power-series coefficients of `self·t^{-ord}` up to (and including)
    /// degree `n`.
    pub fn series(&self, n: usize, k: Coef) -> Vec<BigRational> {
        let a = self.num.unshift(self.num.ord().unwrap_or(0));
        let b = self.den.unshift(self.den.ord().unwrap_or(0));
        let b0inv = k.inv(&b.coeff(0));
        let mut out: Vec<BigRational> = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let mut acc = a.coeff(i);
            for j in 1..=i.min(b.0.len().saturating_sub(1)) {
                acc = k.sub(&acc, &k.mul(&b.coeff(j), &out[i - j]));
            }
            out.push(k.mul(&acc, &b0inv));
        }
        out
    }
}
