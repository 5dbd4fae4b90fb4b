//! Value groups and concrete valued fields.
//!
//! A [`Field`] is a runtime context: every element operation goes through it,
//! so the same code runs over `Q` with a `p`-adic valuation, `Q(t)` or
//! `F_p(t)` with the `t`-adic order, the rank-2 composite valuation on `Q(t)`,
//! and ramified quadratic extensions of any of these.

mod digits;
mod hensel;
mod poly;
mod text;
mod value;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use hensel::{hensel_approximate_root, hensel_fixed_root, HenselRoot};
pub use poly::{Coef, Poly, RatFn};
pub use value::{is_top_nilpotent, Coord, Val};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("residue field has {available} elements, {requested} requested")]
    TooFewResidues { requested: usize, available: u64 },
    #[error("Hensel condition fails: |f(0)|/|f'(0)|^2 is not topologically nilpotent")]
    HenselFails,
    #[error("the bottom element has no leading coordinate")]
    BottomValue,
    #[error("invalid field description: {0}")]
    InvalidSpec(String),
    #[error("cannot parse element {0:?}")]
    Parse(String),
    #[error("value {0} is not attained by the valuation")]
    NotInLattice(String),
}

/// Serializable description of a field instance.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FieldSpec {
    RationalPadic {
        p: u64,
    },
    FuncfieldTadic {
        base: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        p: Option<u64>,
    },
    Rank2Composite {
        p: u64,
    },
    QuadExt {
        base: Box<FieldSpec>,
        ramifier: String,
    },
}

/// Field element. Which variants occur depends on the owning [`Field`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Q(BigRational),
    F(RatFn),
    /// `a + b·√π`.
    Quad(Box<Elem>, Box<Elem>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Kind {
    Padic(u64),
    Func(Coef),
    Rank2(u64),
    Quad {
        base: Box<Field>,
        pi: Elem,
        half: Val,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Field {
    spec: FieldSpec,
    kind: Kind,
}

fn is_prime(p: u64) -> bool {
    p >= 2
        && (2..)
            .take_while(|d| d * d <= p)
            .all(|d| !p.is_multiple_of(d))
}

fn check_prime(p: u64) -> Result<u64, FieldError> {
    if is_prime(p) {
        Ok(p)
    } else {
        Err(FieldError::InvalidSpec(format!("{p} is not prime")))
    }
}

impl Field {
    pub fn new(spec: FieldSpec) -> Result<Field, FieldError> {
        let kind = match &spec {
            FieldSpec::RationalPadic { p } => Kind::Padic(check_prime(*p)?),
            FieldSpec::Rank2Composite { p } => Kind::Rank2(check_prime(*p)?),
            FieldSpec::FuncfieldTadic { base, p } => {
                let coef = match (base.as_str(), p) {
                    ("Q", None) => Coef::Q,
                    ("F_p", Some(p)) => Coef::Fp(check_prime(*p)?),
                    (b, None) if b.starts_with("F_") => {
                        let p = b[2..]
                            .parse::<u64>()
                            .map_err(|_| FieldError::InvalidSpec(format!("unknown base {b}")))?;
                        Coef::Fp(check_prime(p)?)
                    }
                    _ => return Err(FieldError::InvalidSpec(format!("unknown base {base}"))),
                };
                Kind::Func(coef)
            }
            FieldSpec::QuadExt { base, ramifier } => {
                let base = Field::new((**base).clone())?;
                if matches!(base.kind, Kind::Quad { .. }) {
                    return Err(FieldError::InvalidSpec(
                        "nested quadratic extensions".into(),
                    ));
                }
                let pi = base.parse(ramifier)?;
                let v = base.valuation(&pi);
                if v.is_bottom() || v.lead().to_integer() % 2 == 0 || !v.lead().is_integer() {
                    return Err(FieldError::InvalidSpec(format!(
                        "ramifier {ramifier} must have odd leading valuation, got {v}"
                    )));
                }
                let half = v.halve();
                Kind::Quad {
                    base: Box::new(base),
                    pi,
                    half,
                }
            }
        };
        Ok(Field { spec, kind })
    }

    pub fn padic(p: u64) -> Field {
        Field::new(FieldSpec::RationalPadic { p }).expect("valid prime")
    }

    pub fn funcfield_q() -> Field {
        Field::new(FieldSpec::FuncfieldTadic {
            base: "Q".into(),
            p: None,
        })
        .unwrap()
    }

    pub fn funcfield_fp(p: u64) -> Field {
        Field::new(FieldSpec::FuncfieldTadic {
            base: "F_p".into(),
            p: Some(p),
        })
        .expect("valid prime")
    }

    pub fn rank2(p: u64) -> Field {
        Field::new(FieldSpec::Rank2Composite { p }).expect("valid prime")
    }

    /// `self(√π)` where `π` is given in the syntax of [`Field::parse`].
    pub fn quad_ext(&self, ramifier: &str) -> Result<Field, FieldError> {
        Field::new(FieldSpec::QuadExt {
            base: Box::new(self.spec.clone()),
            ramifier: ramifier.into(),
        })
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn is_quad(&self) -> bool {
        matches!(self.kind, Kind::Quad { .. })
    }

    /// The base field of a quadratic extension.
    pub fn base(&self) -> Option<&Field> {
        match &self.kind {
            Kind::Quad { base, .. } => Some(base),
            _ => None,
        }
    }

    pub fn rank(&self) -> usize {
        match &self.kind {
            Kind::Padic(_) | Kind::Func(_) => 1,
            Kind::Rank2(_) => 2,
            Kind::Quad { base, .. } => base.rank(),
        }
    }

    pub fn characteristic(&self) -> u64 {
        match &self.kind {
            Kind::Func(c) => c.characteristic(),
            Kind::Quad { base, .. } => base.characteristic(),
            _ => 0,
        }
    }

    /// Number of residue classes, `None` when the residue field is infinite.
    pub fn residue_size(&self) -> Option<u64> {
        match &self.kind {
            Kind::Padic(p) | Kind::Rank2(p) => Some(*p),
            Kind::Func(Coef::Q) => None,
            Kind::Func(Coef::Fp(p)) => Some(*p),
            Kind::Quad { base, .. } => base.residue_size(),
        }
    }

    fn coef(&self) -> Coef {
        match &self.kind {
            Kind::Func(c) => *c,
            _ => Coef::Q,
        }
    }

    // ----- constructors -----

    pub fn from_rational(&self, q: BigRational) -> Elem {
        match &self.kind {
            Kind::Padic(_) => Elem::Q(q),
            Kind::Func(c) => Elem::F(RatFn::from_poly(Poly::constant(q).reduce(*c))),
            Kind::Rank2(_) => Elem::F(RatFn::from_poly(Poly::constant(q))),
            Kind::Quad { base, .. } => self.embed(base.from_rational(q)),
        }
    }

    pub fn int(&self, n: i64) -> Elem {
        self.from_rational(BigRational::from_integer(n.into()))
    }

    pub fn ratio(&self, n: i64, d: i64) -> Elem {
        self.from_rational(BigRational::new(n.into(), d.into()))
    }

    pub fn zero(&self) -> Elem {
        self.int(0)
    }

    pub fn one(&self) -> Elem {
        self.int(1)
    }

    /// The variable `t` of a function field.
    pub fn t(&self) -> Option<Elem> {
        match &self.kind {
            Kind::Func(_) | Kind::Rank2(_) => Some(Elem::F(RatFn::from_poly(Poly::monomial(
                BigRational::one(),
                1,
            )))),
            Kind::Quad { base, .. } => base.t().map(|t| self.embed(t)),
            Kind::Padic(_) => None,
        }
    }

    /// `√π` in a quadratic extension.
    pub fn sqrt_ramifier(&self) -> Option<Elem> {
        match &self.kind {
            Kind::Quad { base, .. } => {
                Some(Elem::Quad(Box::new(base.zero()), Box::new(base.one())))
            }
            _ => None,
        }
    }

    /// Embed an element of the base field into a quadratic extension.
    pub fn embed(&self, a: Elem) -> Elem {
        match &self.kind {
            Kind::Quad { base, .. } => Elem::Quad(Box::new(a), Box::new(base.zero())),
            _ => a,
        }
    }

    /// Lift an element of `base` into `self` when `self` extends it, or return
    /// it unchanged when the two fields coincide.
    pub fn lift_from(&self, from: &Field, a: &Elem) -> Elem {
        if from == self {
            a.clone()
        } else if self.base() == Some(from) {
            self.embed(a.clone())
        } else {
            panic!("cannot lift elements between unrelated fields")
        }
    }

    // ----- arithmetic -----

    pub fn is_zero(&self, a: &Elem) -> bool {
        match a {
            Elem::Q(q) => q.is_zero(),
            Elem::F(f) => f.is_zero(),
            Elem::Quad(x, y) => {
                let b = self.base().expect("quadratic element in base field");
                b.is_zero(x) && b.is_zero(y)
            }
        }
    }

    pub fn is_one(&self, a: &Elem) -> bool {
        *a == self.one()
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        match (&self.kind, a, b) {
            (Kind::Padic(_), Elem::Q(x), Elem::Q(y)) => Elem::Q(x + y),
            (Kind::Func(_) | Kind::Rank2(_), Elem::F(x), Elem::F(y)) => {
                Elem::F(x.add(y, self.coef()))
            }
            (Kind::Quad { base, .. }, Elem::Quad(a0, a1), Elem::Quad(b0, b1)) => {
                Elem::Quad(Box::new(base.add(a0, b0)), Box::new(base.add(a1, b1)))
            }
            _ => panic!("element does not belong to this field"),
        }
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        match (&self.kind, a) {
            (Kind::Padic(_), Elem::Q(x)) => Elem::Q(-x),
            (Kind::Func(_) | Kind::Rank2(_), Elem::F(x)) => Elem::F(x.neg(self.coef())),
            (Kind::Quad { base, .. }, Elem::Quad(a0, a1)) => {
                Elem::Quad(Box::new(base.neg(a0)), Box::new(base.neg(a1)))
            }
            _ => panic!("element does not belong to this field"),
        }
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        match (&self.kind, a, b) {
            (Kind::Padic(_), Elem::Q(x), Elem::Q(y)) => Elem::Q(x * y),
            (Kind::Func(_) | Kind::Rank2(_), Elem::F(x), Elem::F(y)) => {
                Elem::F(x.mul(y, self.coef()))
            }
            (Kind::Quad { base, pi, .. }, Elem::Quad(a0, a1), Elem::Quad(b0, b1)) => {
                let re = base.add(&base.mul(a0, b0), &base.mul(pi, &base.mul(a1, b1)));
                let im = base.add(&base.mul(a0, b1), &base.mul(a1, b0));
                Elem::Quad(Box::new(re), Box::new(im))
            }
            _ => panic!("element does not belong to this field"),
        }
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self, a: &Elem) -> Elem {
        match (&self.kind, a) {
            (Kind::Padic(_), Elem::Q(x)) => {
                assert!(!x.is_zero(), "inverse of zero");
                Elem::Q(x.recip())
            }
            (Kind::Func(_) | Kind::Rank2(_), Elem::F(x)) => Elem::F(x.inv(self.coef())),
            (Kind::Quad { base, pi, .. }, Elem::Quad(a0, a1)) => {
                let norm = base.sub(&base.mul(a0, a0), &base.mul(pi, &base.mul(a1, a1)));
                let ni = base.inv(&norm);
                Elem::Quad(
                    Box::new(base.mul(a0, &ni)),
                    Box::new(base.neg(&base.mul(a1, &ni))),
                )
            }
            _ => panic!("element does not belong to this field"),
        }
    }

    pub fn div(&self, a: &Elem, b: &Elem) -> Elem {
        self.mul(a, &self.inv(b))
    }

    pub fn pow(&self, a: &Elem, n: i64) -> Elem {
        let base = if n < 0 { self.inv(a) } else { a.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = self.one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &sq);
            }
            e >>= 1;
            if e > 0 {
                sq = self.mul(&sq, &sq);
            }
        }
        acc
    }

    /// Canonical representative of `[a:b:c:d]` up to `K^*`: all entries in `O`
    /// and one of them `1`. Over function fields the entries become coprime
    /// polynomials, which keeps later products free of denominators.
    pub fn normalize_projective(&self, entries: [Elem; 4]) -> [Elem; 4] {
        if let Kind::Func(_) | Kind::Rank2(_) = &self.kind {
            let k = self.coef();
            let fs: Vec<&RatFn> = entries
                .iter()
                .map(|e| match e {
                    Elem::F(f) => f,
                    _ => panic!("element does not belong to this field"),
                })
                .collect();
            let mut l = Poly::one();
            for f in fs.iter().filter(|f| !f.is_zero() && !f.den.is_one()) {
                let g = l.gcd(&f.den, k);
                l = l.mul(&f.den.divrem(&g, k).0, k);
            }
            let nums: Vec<Poly> = fs
                .iter()
                .map(|f| {
                    if f.den.is_one() {
                        f.num.mul(&l, k)
                    } else {
                        f.num.mul(&l.divrem(&f.den, k).0, k)
                    }
                })
                .collect();
            let mut g = Poly::zero();
            for n in &nums {
                if g.degree() == Some(0) {
                    break;
                }
                g = g.gcd(n, k);
            }
            let nums: Vec<Poly> = if g.is_one() {
                nums
            } else {
                nums.iter().map(|n| n.divrem(&g, k).0).collect()
            };
            let elems: Vec<Elem> = nums
                .into_iter()
                .map(|n| Elem::F(RatFn::from_poly(n)))
                .collect();
            let vals: Vec<Val> = elems.iter().map(|x| self.valuation(x)).collect();
            let i = (0..4).min_by(|&x, &y| vals[x].cmp(&vals[y])).unwrap();
            let c = match &elems[i] {
                Elem::F(f) => f.num.coeff(f.num.ord().unwrap()),
                _ => unreachable!(),
            };
            let ci = k.inv(&c);
            let scaled: Vec<Elem> = elems
                .into_iter()
                .map(|e| match e {
                    Elem::F(f) => Elem::F(RatFn::from_poly(f.num.scale(&ci, k))),
                    _ => unreachable!(),
                })
                .collect();
            return scaled.try_into().unwrap();
        }
        let vals: Vec<Val> = entries.iter().map(|x| self.valuation(x)).collect();
        let i = (0..4).min_by(|&x, &y| vals[x].cmp(&vals[y])).unwrap();
        let s = self.inv(&entries[i]);
        entries.map(|x| self.mul(&x, &s))
    }

    // ----- valuation -----

    /// Additive valuation `v(x)`; `v(0)` is the bottom element.
    pub fn valuation(&self, a: &Elem) -> Val {
        if self.is_zero(a) {
            return Val::bottom(self.rank());
        }
        match (&self.kind, a) {
            (Kind::Padic(p), Elem::Q(x)) => Val::from_ints(&[digits::vp_rational(x, *p)]),
            (Kind::Func(_) | Kind::Rank2(_), Elem::F(f)) => self.fraction_valuation(&f.num, &f.den),
            (Kind::Quad { base, half, .. }, Elem::Quad(a0, a1)) => {
                let va = base.valuation(a0);
                let vb = &base.valuation(a1) + half;
                Val::min(&va, &vb)
            }
            _ => panic!("element does not belong to this field"),
        }
    }

    /// `v(a - b)`.
    pub fn dist(&self, a: &Elem, b: &Elem) -> Val {
        if let (Kind::Func(_) | Kind::Rank2(_), Elem::F(x), Elem::F(y)) = (&self.kind, a, b) {
            if x.den.is_one() && y.den.is_one() {
                // Polynomials: the first differing coefficient decides.
                let n = x.num.0.len().max(y.num.0.len());
                let Some(i) = (0..n).find(|&i| x.num.coeff(i) != y.num.coeff(i)) else {
                    return Val::bottom(self.rank());
                };
                return match &self.kind {
                    Kind::Rank2(p) => {
                        let c = x.num.coeff(i) - y.num.coeff(i);
                        Val::from_ints(&[i as i64, digits::vp_rational(&c, *p)])
                    }
                    _ => Val::from_ints(&[i as i64]),
                };
            }
        }
        if let (Kind::Func(_) | Kind::Rank2(_), Elem::F(x), Elem::F(y)) = (&self.kind, a, b) {
            // `v` only sees the lowest terms, so the difference need not be reduced.
            let k = self.coef();
            let num = x.num.mul(&y.den, k).sub(&y.num.mul(&x.den, k), k);
            if num.is_zero() {
                return Val::bottom(self.rank());
            }
            return self.fraction_valuation(&num, &x.den.mul(&y.den, k));
        }
        self.valuation(&self.sub(a, b))
    }

    /// `v(num/den)` for non-zero polynomials, not necessarily coprime.
    fn fraction_valuation(&self, num: &Poly, den: &Poly) -> Val {
        let (i, j) = (num.ord().unwrap(), den.ord().unwrap());
        let first = i as i64 - j as i64;
        match &self.kind {
            Kind::Rank2(p) => {
                let second =
                    digits::vp_rational(&num.coeff(i), *p) - digits::vp_rational(&den.coeff(j), *p);
                Val::from_ints(&[first, second])
            }
            _ => Val::from_ints(&[first]),
        }
    }

    /// Whether `v` is a value of the valuation.
    pub fn in_lattice(&self, v: &Val) -> bool {
        if v.is_bottom() || v.rank() != self.rank() {
            return false;
        }
        match &self.kind {
            Kind::Quad { base, half, .. } => base.in_lattice(v) || base.in_lattice(&(v - half)),
            _ => v.all_integral(),
        }
    }

    /// A monomial element of valuation exactly `v`.
    pub fn monomial(&self, v: &Val) -> Result<Elem, FieldError> {
        if !self.in_lattice(v) {
            return Err(FieldError::NotInLattice(v.to_string()));
        }
        Ok(match &self.kind {
            Kind::Padic(p) => {
                let k = v.int_coords()[0];
                self.pow(&self.int(*p as i64), k)
            }
            Kind::Func(_) => self.pow(&self.t().unwrap(), v.int_coords()[0]),
            Kind::Rank2(p) => {
                let c = v.int_coords();
                self.mul(
                    &self.pow(&self.t().unwrap(), c[0]),
                    &self.pow(&self.int(*p as i64), c[1]),
                )
            }
            Kind::Quad { base, half, .. } => {
                if base.in_lattice(v) {
                    self.embed(base.monomial(v)?)
                } else {
                    Elem::Quad(Box::new(base.zero()), Box::new(base.monomial(&(v - half))?))
                }
            }
        })
    }

    /// Valuation of the uniformizer of the first coordinate (`p` or `t`).
    pub fn uniformizer_value(&self) -> Val {
        Val::unit(self.rank(), 0)
    }

    /// The uniformizer of the base instance as an element (`p` for the
    /// `p`-adic field, `t` otherwise).
    pub fn uniformizer(&self) -> Elem {
        match &self.kind {
            Kind::Padic(p) => self.int(*p as i64),
            Kind::Quad { base, .. } => self.embed(base.uniformizer()),
            _ => self.t().unwrap(),
        }
    }

    // ----- residue data -----

    /// `n` elements of `O` with pairwise differences of valuation zero.
    pub fn residue_representatives(&self, n: usize) -> Result<Vec<Elem>, FieldError> {
        if let Some(size) = self.residue_size() {
            if n as u64 > size {
                return Err(FieldError::TooFewResidues {
                    requested: n,
                    available: size,
                });
            }
        }
        Ok((0..n as i64).map(|i| self.int(i)).collect())
    }

    /// Truncation of the digit expansion of `a` keeping the digits of
    /// valuation strictly below `r`. Two elements give the same output iff
    /// `v(a - b) >= r`.
    pub fn canonical_center(&self, a: &Elem, r: &Val) -> Elem {
        if self.is_zero(a) || r.is_bottom() {
            return a.clone();
        }
        match (&self.kind, a) {
            (Kind::Padic(p), Elem::Q(x)) => Elem::Q(digits::truncate_padic(x, *p, r.lead())),
            (Kind::Func(c), Elem::F(f)) => Elem::F(digits::truncate_series(f, *c, r, None)),
            (Kind::Rank2(p), Elem::F(f)) => {
                Elem::F(digits::truncate_series(f, Coef::Q, r, Some(*p)))
            }
            (Kind::Quad { base, half, .. }, Elem::Quad(a0, a1)) => Elem::Quad(
                Box::new(base.canonical_center(a0, r)),
                Box::new(base.canonical_center(a1, &(r - half))),
            ),
            _ => panic!("element does not belong to this field"),
        }
    }

    /// `canonical_center(a / b, r)`; over function fields the quotient is
    /// expanded directly without reducing the fraction.
    pub fn truncated_quotient(&self, a: &Elem, b: &Elem, r: &Val) -> Elem {
        match (&self.kind, a, b) {
            (Kind::Func(_) | Kind::Rank2(_), Elem::F(_), Elem::F(_)) => {
                self.canonical_center(&self.unreduced_quotient(a, b), r)
            }
            _ => self.canonical_center(&self.div(a, b), r),
        }
    }

    /// `a / b` for use as an intermediate value only: over function fields
    /// the fraction is left unreduced, so equality with other elements is not
    /// meaningful, but valuations, expansions and truncations are.
    pub(crate) fn unreduced_quotient(&self, a: &Elem, b: &Elem) -> Elem {
        match (&self.kind, a, b) {
            (Kind::Func(_) | Kind::Rank2(_), Elem::F(x), Elem::F(y)) if !x.is_zero() => {
                let c = self.coef();
                Elem::F(RatFn {
                    num: x.num.mul(&y.den, c),
                    den: x.den.mul(&y.num, c),
                })
            }
            _ => self.div(a, b),
        }
    }

    /// Exact square root when `a` is a square in this field. Quadratic
    /// extensions only detect squares of pure elements `x` and `x·√π`.
    pub fn sqrt(&self, a: &Elem) -> Option<Elem> {
        if self.is_zero(a) {
            return Some(a.clone());
        }
        match (&self.kind, a) {
            (Kind::Padic(_), Elem::Q(x)) => poly::rational_sqrt(x).map(Elem::Q),
            (Kind::Func(_) | Kind::Rank2(_), Elem::F(f)) => {
                let k = self.coef();
                let prod = f.num.mul(&f.den, k);
                let lc = prod.lc();
                let s = k.sqrt(&lc)?;
                let root = prod.monic(k).monic_sqrt(k)?;
                Some(Elem::F(RatFn::new(root.scale(&s, k), f.den.clone(), k)))
            }
            (Kind::Quad { base, pi, .. }, Elem::Quad(a0, a1)) => {
                if !base.is_zero(a1) {
                    return None;
                }
                if let Some(s) = base.sqrt(a0) {
                    return Some(self.embed(s));
                }
                let s = base.sqrt(&base.div(a0, pi))?;
                Some(Elem::Quad(Box::new(base.zero()), Box::new(s)))
            }
            _ => panic!("element does not belong to this field"),
        }
    }

    // ----- text -----

    /// Parse an element from the string syntax (`"3/4"`, `"2+t^1+t^3"`,
    /// `"1+2*s"` with `s = √π` in a quadratic extension).
    pub fn parse(&self, s: &str) -> Result<Elem, FieldError> {
        text::parse(self, s)
    }

    pub fn format(&self, a: &Elem) -> String {
        text::format(self, a)
    }

    /// JSON form: a string, or an `["a","b"]` pair in a quadratic extension.
    pub fn to_json(&self, a: &Elem) -> serde_json::Value {
        match (&self.kind, a) {
            (Kind::Quad { base, .. }, Elem::Quad(a0, a1)) => {
                serde_json::json!([base.format(a0), base.format(a1)])
            }
            _ => serde_json::Value::String(self.format(a)),
        }
    }

    pub fn from_json(&self, v: &serde_json::Value) -> Result<Elem, FieldError> {
        match (v, &self.kind) {
            (serde_json::Value::String(s), _) => self.parse(s),
            (serde_json::Value::Number(n), _) => self.parse(&n.to_string()),
            (serde_json::Value::Array(items), Kind::Quad { base, .. }) if items.len() == 2 => {
                let a = base.from_json(&items[0])?;
                let b = base.from_json(&items[1])?;
                Ok(Elem::Quad(Box::new(a), Box::new(b)))
            }
            _ => Err(FieldError::Parse(v.to_string())),
        }
    }

    pub(crate) fn integer_elem(&self, n: BigInt) -> Elem {
        self.from_rational(BigRational::from_integer(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuation_examples() {
        let k = Field::padic(2);
        assert_eq!(k.valuation(&k.int(12)), Val::from_ints(&[2]));
        for f in [Field::padic(3), Field::funcfield_q(), Field::rank2(3)] {
            assert_eq!(f.valuation(&f.one()), Val::zero(f.rank()));
        }
        let r2 = Field::rank2(3);
        let t = r2.t().unwrap();
        let x = r2.mul(&r2.mul(&t, &t), &r2.ratio(6, 5));
        assert_eq!(r2.valuation(&x), Val::from_ints(&[2, 1]));
    }

    #[test]
    fn residue_representatives_examples() {
        let k = Field::padic(3);
        assert_eq!(
            k.residue_representatives(3).unwrap(),
            vec![k.int(0), k.int(1), k.int(2)]
        );
        assert_eq!(
            k.residue_representatives(4),
            Err(FieldError::TooFewResidues {
                requested: 4,
                available: 3
            })
        );
        let f = Field::funcfield_q();
        assert_eq!(f.residue_representatives(5).unwrap().len(), 5);
    }

    #[test]
    fn canonical_center_examples() {
        let k = Field::padic(3);
        assert_eq!(
            k.canonical_center(&k.int(10), &Val::from_ints(&[1])),
            k.int(1)
        );
        assert_eq!(
            k.canonical_center(&k.zero(), &Val::from_ints(&[4])),
            k.zero()
        );
        let f = Field::funcfield_q();
        let p = f.parse("2+t^1+t^3").unwrap();
        assert_eq!(
            f.canonical_center(&p, &Val::from_ints(&[2])),
            f.parse("2+t").unwrap()
        );
    }

    #[test]
    fn quad_valuation_is_half_integral() {
        let k = Field::padic(3).quad_ext("3").unwrap();
        let s = k.sqrt_ramifier().unwrap();
        assert_eq!(k.valuation(&s), Val::new(vec![Coord::new(1, 2)]));
        assert_eq!(k.mul(&s, &s), k.int(3));
        let x = k.add(&k.int(1), &s);
        assert_eq!(k.mul(&x, &k.inv(&x)), k.one());
        assert!(k.in_lattice(&Val::new(vec![Coord::new(3, 2)])));
        assert!(!Field::padic(3).in_lattice(&Val::new(vec![Coord::new(3, 2)])));
    }

    #[test]
    fn ramifier_must_be_odd() {
        assert!(Field::padic(3).quad_ext("9").is_err());
        assert!(Field::rank2(3).quad_ext("t").is_ok());
    }

    #[test]
    fn monomials_have_requested_valuation() {
        let k = Field::rank2(5);
        let v = Val::from_ints(&[-2, 3]);
        assert_eq!(k.valuation(&k.monomial(&v).unwrap()), v);
        let q = Field::padic(3).quad_ext("3").unwrap();
        let v = Val::new(vec![Coord::new(-5, 2)]);
        assert_eq!(q.valuation(&q.monomial(&v).unwrap()), v);
    }

    #[test]
    fn square_roots() {
        let k = Field::funcfield_q();
        let x = k.parse("(4+4*t+t^2)/(9)").unwrap();
        let s = k.sqrt(&x).unwrap();
        assert_eq!(k.mul(&s, &s), x);
        assert!(k.sqrt(&k.parse("1+t").unwrap()).is_none());
        let p = Field::padic(5);
        assert_eq!(p.sqrt(&p.ratio(16, 9)), Some(p.ratio(4, 3)));
        assert!(p.sqrt(&p.int(2)).is_none());
    }

    #[test]
    fn spec_json_round_trip() {
        let s: FieldSpec = serde_json::from_str(r#"{"kind":"rational-padic","p":3}"#).unwrap();
        assert_eq!(s, FieldSpec::RationalPadic { p: 3 });
        let s: FieldSpec = serde_json::from_str(
            r#"{"kind":"quad-ext","base":{"kind":"rational-padic","p":3},"ramifier":"3"}"#,
        )
        .unwrap();
        assert!(Field::new(s).unwrap().is_quad());
        let s: FieldSpec =
            serde_json::from_str(r#"{"kind":"funcfield-tadic","base":"F_5"}"#).unwrap();
        assert_eq!(Field::new(s).unwrap().residue_size(), Some(5));
        assert!(Field::new(FieldSpec::RationalPadic { p: 4 }).is_err());
    }
}
