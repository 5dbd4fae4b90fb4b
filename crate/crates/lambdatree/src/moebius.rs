//! Möbius transformations: the action of `PGL_2(K)` on `P^1(K)` and on the
//! tree of balls, hyperbolicity and fixed points.

use serde_json::{json, Value};
use thiserror::Error;

use crate::ball_tree::{distance, Ball, ProjPoint, Region};
use crate::valued_field::{
    hensel_approximate_root, hensel_fixed_root, is_top_nilpotent, Elem, Field, FieldError, Val,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MoebiusError {
    #[error("matrix is singular")]
    Singular,
    #[error("point is the pole of the transformation")]
    PoleInput,
    #[error("the identity has no classification")]
    IdentityInput,
    #[error("inverse ball distance {0} is not topologically nilpotent")]
    NotNilpotentDistance(String),
    #[error("multiplier has valuation {got}, expected {expected}")]
    WrongMultiplier { got: String, expected: String },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Invertible `2×2` matrix modulo scalars, stored in the canonical form of
/// [`Field::normalize_projective`]: all entries lie in `O`, one of them is a
/// unit, and structural equality is projective equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Moebius {
    a: Elem,
    b: Elem,
    c: Elem,
    d: Elem,
}

impl Moebius {
    pub fn new(k: &Field, a: Elem, b: Elem, c: Elem, d: Elem) -> Result<Moebius, MoebiusError> {
        let det = k.sub(&k.mul(&a, &d), &k.mul(&b, &c));
        if k.is_zero(&det) {
            return Err(MoebiusError::Singular);
        }
        let [a, b, c, d] = k.normalize_projective([a, b, c, d]);
        Ok(Moebius { a, b, c, d })
    }

    pub fn from_ints(k: &Field, a: i64, b: i64, c: i64, d: i64) -> Result<Moebius, MoebiusError> {
        Moebius::new(k, k.int(a), k.int(b), k.int(c), k.int(d))
    }

    pub fn identity(k: &Field) -> Moebius {
        Moebius::from_ints(k, 1, 0, 0, 1).unwrap()
    }

    /// `μ_q(z) = qz`.
    pub fn scaling(k: &Field, q: &Elem) -> Result<Moebius, MoebiusError> {
        Moebius::new(k, q.clone(), k.zero(), k.zero(), k.one())
    }

    /// `z ↦ z + s`.
    pub fn translation(k: &Field, s: &Elem) -> Moebius {
        Moebius::new(k, k.one(), s.clone(), k.zero(), k.one()).unwrap()
    }

    pub fn entries(&self) -> [&Elem; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn det(&self, k: &Field) -> Elem {
        k.sub(&k.mul(&self.a, &self.d), &k.mul(&self.b, &self.c))
    }

    pub fn trace(&self, k: &Field) -> Elem {
        k.add(&self.a, &self.d)
    }

    pub fn is_identity(&self, k: &Field) -> bool {
        k.is_zero(&self.b) && k.is_zero(&self.c) && self.a == self.d
    }

    /// Matrix product `self · other`, i.e. `z ↦ self(other(z))`.
    pub fn compose(&self, k: &Field, o: &Moebius) -> Moebius {
        let m = |x: &Elem, y: &Elem, z: &Elem, w: &Elem| k.add(&k.mul(x, y), &k.mul(z, w));
        Moebius::new(
            k,
            m(&self.a, &o.a, &self.b, &o.c),
            m(&self.a, &o.b, &self.b, &o.d),
            m(&self.c, &o.a, &self.d, &o.c),
            m(&self.c, &o.b, &self.d, &o.d),
        )
        .expect("product of invertible matrices")
    }

    pub fn inverse(&self, k: &Field) -> Moebius {
        Moebius::new(
            k,
            self.d.clone(),
            k.neg(&self.b),
            k.neg(&self.c),
            self.a.clone(),
        )
        .unwrap()
    }

    pub fn pow(&self, k: &Field, n: i64) -> Moebius {
        let base = if n < 0 { self.inverse(k) } else { self.clone() };
        (0..n.unsigned_abs()).fold(Moebius::identity(k), |acc, _| acc.compose(k, &base))
    }

    /// `τ γ τ^{-1}`.
    pub fn conjugate_by(&self, k: &Field, tau: &Moebius) -> Moebius {
        tau.compose(k, self).compose(k, &tau.inverse(k))
    }

    pub fn apply(&self, k: &Field, z: &ProjPoint) -> ProjPoint {
        match z {
            ProjPoint::Inf => {
                if k.is_zero(&self.c) {
                    ProjPoint::Inf
                } else {
                    ProjPoint::Fin(k.div(&self.a, &self.c))
                }
            }
            ProjPoint::Fin(z) => {
                let den = k.add(&k.mul(&self.c, z), &self.d);
                if k.is_zero(&den) {
                    ProjPoint::Inf
                } else {
                    ProjPoint::Fin(k.div(&k.add(&k.mul(&self.a, z), &self.b), &den))
                }
            }
        }
    }

    pub fn apply_elem(&self, k: &Field, z: &Elem) -> ProjPoint {
        self.apply(k, &ProjPoint::Fin(z.clone()))
    }

    /// The point sent to `∞`.
    pub fn pole(&self, k: &Field) -> ProjPoint {
        if k.is_zero(&self.c) {
            ProjPoint::Inf
        } else {
            ProjPoint::Fin(k.neg(&k.div(&self.d, &self.c)))
        }
    }

    /// `v(γ'(p))` with `γ'(p) = (bc - ad)(cp + d)^{-2}` and
    /// `γ'(∞) = (bc - ad)c^{-2}`.
    pub fn derivative_valuation(&self, k: &Field, p: &ProjPoint) -> Result<Val, MoebiusError> {
        let den = match p {
            ProjPoint::Fin(p) => k.add(&k.mul(&self.c, p), &self.d),
            ProjPoint::Inf => self.c.clone(),
        };
        if k.is_zero(&den) {
            return Err(MoebiusError::PoleInput);
        }
        Ok(&k.valuation(&self.det(k)) - &k.valuation(&den).scale(2))
    }

    /// Image of a ball: a ball when the pole lies outside it, otherwise the
    /// complement `B^c(γ(∞), |γ'(∞)|δ^{-1})`.
    pub fn act_on_region(&self, k: &Field, b: &Ball) -> Region {
        let p = b.center();
        let delta = b.radius();
        let cpd = k.add(&k.mul(&self.c, p), &self.d);
        let pole_outside =
            k.is_zero(&self.c) || &k.valuation(&cpd) - &k.valuation(&self.c) < *delta;
        if pole_outside {
            let gp = self
                .apply_elem(k, p)
                .finite()
                .cloned()
                .expect("pole outside the ball");
            let r = &self
                .derivative_valuation(k, &ProjPoint::Fin(p.clone()))
                .unwrap()
                + delta;
            Region::Ball(Ball::new(k, &gp, r))
        } else {
            let ginf = k.div(&self.a, &self.c);
            let r = &self.derivative_valuation(k, &ProjPoint::Inf).unwrap() - delta;
            Region::Complement(Ball::new(k, &ginf, r), ginf)
        }
    }

    /// The action `γ[B]` on the tree of balls.
    pub fn act_on_tree(&self, k: &Field, b: &Ball) -> Ball {
        self.act_on_region(k, b).ball().clone()
    }

    /// `ϖ = tr^2 / det`.
    pub fn varpi(&self, k: &Field) -> Elem {
        let t = self.trace(k);
        k.div(&k.mul(&t, &t), &self.det(k))
    }

    /// Whether `γ` fixes `t_0 = B(0, 1)`: entries in `O` with unit determinant.
    pub fn stabilizes_t0(&self, k: &Field) -> bool {
        k.valuation(&self.det(k)).is_zero()
    }

    pub fn to_json(&self, k: &Field) -> Value {
        json!({ "a": k.to_json(&self.a), "b": k.to_json(&self.b), "c": k.to_json(&self.c), "d": k.to_json(&self.d) })
    }

    pub fn from_json(k: &Field, v: &Value) -> Result<Moebius, MoebiusError> {
        let get = |key: &str| -> Result<Elem, MoebiusError> {
            let x = v
                .get(key)
                .ok_or_else(|| FieldError::Parse(format!("missing entry {key}")))?;
            Ok(k.from_json(x)?)
        };
        Moebius::new(k, get("a")?, get("b")?, get("c")?, get("d")?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MoebiusKind {
    Hyperbolic,
    FiniteOrderCandidate,
    NonHyperbolicInfinite,
}

impl MoebiusKind {
    pub fn name(self) -> &'static str {
        match self {
            MoebiusKind::Hyperbolic => "hyperbolic",
            MoebiusKind::FiniteOrderCandidate => "finite-order-candidate",
            MoebiusKind::NonHyperbolicInfinite => "non-hyperbolic-infinite",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPoint {
    pub point: ProjPoint,
    /// `None` when exact, otherwise a lower bound for `v(point - true point)`.
    pub precision: Option<Val>,
}

impl FixedPoint {
    pub fn is_exact(&self) -> bool {
        self.precision.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub kind: MoebiusKind,
    pub varpi: Elem,
    /// Additive `ϱ(γ) = |ϖ|^{-1}` for hyperbolic elements.
    pub multiplier_valuation: Option<Val>,
    /// Attracting fixed point first for hyperbolic elements.
    pub fixed: Vec<FixedPoint>,
}

impl Classification {
    pub fn is_hyperbolic(&self) -> bool {
        self.kind == MoebiusKind::Hyperbolic
    }

    pub fn attracting(&self) -> Option<&FixedPoint> {
        self.is_hyperbolic().then(|| &self.fixed[0])
    }

    pub fn to_json(&self, k: &Field) -> Value {
        let mut out = json!({
            "kind": self.kind.name(),
            "fixed": self.fixed.iter().map(|f| f.point.to_json(k)).collect::<Vec<_>>(),
        });
        if let Some(m) = &self.multiplier_valuation {
            out["multiplier_valuation"] = crate::io::val_to_json(m);
        }
        if self.fixed.iter().any(|f| !f.is_exact()) {
            out["fixed_precision"] = self
                .fixed
                .iter()
                .map(|f| {
                    f.precision
                        .as_ref()
                        .map_or(Value::Null, crate::io::val_to_json)
                })
                .collect();
        }
        out
    }
}

/// Exact fixed points of a non-hyperbolic element, when defined over `K`.
fn exact_fixed_points(k: &Field, g: &Moebius) -> Vec<FixedPoint> {
    let [a, b, c, d] = g.entries();
    let exact = |p: ProjPoint| FixedPoint {
        point: p,
        precision: None,
    };
    if k.is_zero(c) {
        let mut out = vec![exact(ProjPoint::Inf)];
        let dm = k.sub(d, a);
        if !k.is_zero(&dm) {
            out.push(exact(ProjPoint::Fin(k.div(b, &dm))));
        }
        return out;
    }
    // c x^2 + (d - a) x - b = 0
    let dm = k.sub(d, a);
    let disc = k.add(&k.mul(&dm, &dm), &k.mul(&k.int(4), &k.mul(b, c)));
    if k.characteristic() == 2 {
        return Vec::new();
    }
    let Some(s) = k.sqrt(&disc) else {
        return Vec::new();
    };
    let two_c = k.add(c, c);
    let mut roots = vec![
        exact(ProjPoint::Fin(k.div(&k.sub(&s, &dm), &two_c))),
        exact(ProjPoint::Fin(k.div(&k.sub(&k.neg(&s), &dm), &two_c))),
    ];
    roots.dedup();
    roots
}

/// Fixed points of a hyperbolic element, attracting first.
fn hyperbolic_fixed_points(
    k: &Field,
    g: &Moebius,
    b0: &Elem,
    exact_first: bool,
    precision: &Val,
) -> Result<Vec<FixedPoint>, MoebiusError> {
    let [a, b, c, d] = g.entries();
    let exact = |p: ProjPoint| FixedPoint {
        point: p,
        precision: None,
    };
    if k.is_zero(c) || k.is_zero(b) {
        // Triangular: eigenvalues a, d lie in K.
        let (x_a, x_d) = if k.is_zero(c) {
            (ProjPoint::Inf, ProjPoint::Fin(k.div(b, &k.sub(d, a))))
        } else {
            (
                ProjPoint::Fin(k.div(&k.sub(a, d), c)),
                ProjPoint::Fin(k.zero()),
            )
        };
        // The eigenvector of eigenvalue e is attracting iff e is the larger one.
        let a_big = k.valuation(a) < k.valuation(d);
        return Ok(if a_big {
            vec![exact(x_a), exact(x_d)]
        } else {
            vec![exact(x_d), exact(x_a)]
        });
    }
    // Eigenvalues of γ/tr are the roots of x^2 - x + 1/ϖ; the eigenvector of
    // eigenvalue E of γ is (x, 1) with x = (E - d)/c = b/(E - a), and it is
    // attracting for the larger eigenvalue.
    let tr = g.trace(k);
    let v_tr = k.valuation(&tr);
    let minus_one = k.int(-1);
    let mut target = precision.clone();
    for _ in 0..6 {
        let root = if exact_first {
            hensel_fixed_root(k, &minus_one, b0, &target)?
        } else {
            hensel_approximate_root(k, &minus_one, b0, &target)?
        };
        let mut out = Vec::new();
        let mut worst: Option<Val> = None;
        for e in [&root.cofactor, &root.root] {
            let big_e = k.mul(e, &tr);
            let emd = k.sub(&big_e, d);
            if root.exact {
                out.push(exact(ProjPoint::Fin(k.div(&emd, c))));
                continue;
            }
            let err_e = &root.achieved + &v_tr;
            let ema = k.sub(&big_e, a);
            let err_c = &err_e - &k.valuation(c);
            let err_b = (!k.is_zero(&ema) && err_e > k.valuation(&ema))
                .then(|| &(&err_e + &k.valuation(b)) - &k.valuation(&ema).scale(2));
            let (x, err) = match err_b {
                Some(eb) if eb > err_c => (k.truncated_quotient(b, &ema, &eb), eb),
                _ => (k.truncated_quotient(&emd, c, &err_c), err_c),
            };
            worst = Some(worst.map_or(err.clone(), |w| Val::min(&w, &err)));
            out.push(FixedPoint {
                point: ProjPoint::Fin(x),
                precision: Some(err),
            });
        }
        match worst {
            Some(w) if w < *precision => target = &target + &(precision - &w),
            _ => return Ok(out),
        }
    }
    Err(MoebiusError::Field(FieldError::HenselFails))
}

/// Classify `γ`: hyperbolic iff `ϖ ≠ 0` and `v(ϖ^{-1})` is topologically
/// nilpotent. Approximate fixed points are accurate to `precision`.
pub fn classify(k: &Field, g: &Moebius, precision: &Val) -> Result<Classification, MoebiusError> {
    if g.is_identity(k) {
        return Err(MoebiusError::IdentityInput);
    }
    let varpi = g.varpi(k);
    if !k.is_zero(&varpi) {
        let inv_val = -&k.valuation(&varpi);
        if is_top_nilpotent(&inv_val)? {
            let fixed = hyperbolic_fixed_points(k, g, &k.inv(&varpi), true, precision)?;
            return Ok(Classification {
                kind: MoebiusKind::Hyperbolic,
                varpi,
                multiplier_valuation: Some(inv_val),
                fixed,
            });
        }
    }
    let kind = if has_finite_order(k, g, 24) {
        MoebiusKind::FiniteOrderCandidate
    } else {
        MoebiusKind::NonHyperbolicInfinite
    };
    Ok(Classification {
        kind,
        varpi,
        multiplier_valuation: None,
        fixed: exact_fixed_points(k, g),
    })
}

/// The attracting fixed point of an element already known to be hyperbolic,
/// to within `precision`; cheaper than [`classify`] as it never looks for
/// exact roots.
pub fn attracting_fixed_point(
    k: &Field,
    g: &Moebius,
    precision: &Val,
) -> Result<FixedPoint, MoebiusError> {
    let t = g.trace(k);
    let b0 = k.unreduced_quotient(&g.det(k), &k.mul(&t, &t));
    let mut fixed = hyperbolic_fixed_points(k, g, &b0, false, precision)?;
    Ok(fixed.swap_remove(0))
}

/// Whether `γ^n = 1` for some `n <= bound`. With eigenvalue ratio `ζ`,
/// `ϖ - 2 = ζ + ζ^{-1}` and `r_n = ζ^n + ζ^{-n}` obeys
/// `r_{n+1} = (ϖ - 2) r_n - r_{n-1}`; `γ^n = 1` iff `r_n = 2` unless `ζ = 1`
/// (`ϖ = 4`), where the powers themselves are compared.
fn has_finite_order(k: &Field, g: &Moebius, bound: u32) -> bool {
    let two = k.int(2);
    let s = k.sub(&g.varpi(k), &two);
    if s == two {
        let mut p = g.clone();
        for _ in 1..bound {
            if p.is_identity(k) {
                return true;
            }
            p = p.compose(k, g);
        }
        return p.is_identity(k);
    }
    let (mut prev, mut r) = (two.clone(), s.clone());
    for _ in 1..=bound {
        if r == two {
            return true;
        }
        (prev, r) = (r.clone(), k.sub(&k.mul(&s, &r), &prev));
    }
    false
}

/// `γ = τ^{-1} μ_q τ` with `γ[B] = B'` and translation length `d(B, B')`;
/// when the balls are disjoint the pole of `γ` lies in `B`.
pub fn hyperbolic_from_balls(k: &Field, b: &Ball, b2: &Ball) -> Result<Moebius, MoebiusError> {
    let dist = distance(k, b, b2);
    if !is_top_nilpotent(&dist)? {
        return Err(MoebiusError::NotNilpotentDistance(dist.to_string()));
    }
    let q = k.monomial(&dist)?;
    hyperbolic_from_balls_with(k, b, b2, &q)
}

/// As [`hyperbolic_from_balls`] with a prescribed multiplier `q`, which must
/// satisfy `|q| = d(B, B')^{-1}`.
pub fn hyperbolic_from_balls_with(
    k: &Field,
    b: &Ball,
    b2: &Ball,
    q: &Elem,
) -> Result<Moebius, MoebiusError> {
    let dist = distance(k, b, b2);
    if !is_top_nilpotent(&dist)? {
        return Err(MoebiusError::NotNilpotentDistance(dist.to_string()));
    }
    let vq = k.valuation(q);
    if vq != dist {
        return Err(MoebiusError::WrongMultiplier {
            got: vq.to_string(),
            expected: dist.to_string(),
        });
    }
    let one = k.one();
    if b2.is_subset(k, b) {
        // Contraction towards the center of the smaller ball.
        let c = b2.center();
        return Moebius::new(k, q.clone(), k.mul(c, &k.sub(&one, q)), k.zero(), one);
    }
    if b.is_subset(k, b2) {
        let c = b.center();
        let qi = k.inv(q);
        return Moebius::new(k, qi.clone(), k.mul(c, &k.sub(&one, &qi)), k.zero(), one);
    }
    let (c, c2) = (b.center(), b2.center());
    let tau = Moebius::new(k, one.clone(), k.neg(c2), one.clone(), k.neg(c))?;
    Ok(Moebius::scaling(k, q)?.conjugate_by(k, &tau.inverse(k)))
}

/// Orbit sample `{γ^j(p) : |j| <= n}` with pairwise distance statistics.
#[derive(Clone, Debug)]
pub struct OrbitReport {
    pub points: Vec<(i64, ProjPoint)>,
    /// Smallest and largest `v(x - y)` over distinct finite orbit points.
    pub closest: Option<Val>,
    pub farthest: Option<Val>,
}

impl OrbitReport {
    /// All pairwise distances equal: the uniform separation witness.
    pub fn uniformly_separated(&self) -> bool {
        self.closest.is_some() && self.closest == self.farthest
    }

    /// Some `λ` with every pairwise `v(x - y)` strictly below it, i.e. the
    /// multiplicative distances all exceed `|x|` for `v(x) = λ`.
    pub fn separation_bound(&self) -> Option<Val> {
        self.closest
            .as_ref()
            .map(|c| &Val::max(c, self.farthest.as_ref().unwrap()) + &Val::unit(c.rank(), 0))
    }
}

pub fn orbit_report(k: &Field, g: &Moebius, p: &ProjPoint, n: u32) -> OrbitReport {
    let n = n as i64;
    let gi = g.inverse(k);
    let mut points = vec![(0, p.clone())];
    let (mut fwd, mut bwd) = (p.clone(), p.clone());
    for j in 1..=n {
        fwd = g.apply(k, &fwd);
        bwd = gi.apply(k, &bwd);
        points.push((j, fwd.clone()));
        points.push((-j, bwd.clone()));
    }
    points.sort_by_key(|(j, _)| *j);
    let fin: Vec<&Elem> = points.iter().filter_map(|(_, x)| x.finite()).collect();
    let (mut closest, mut farthest): (Option<Val>, Option<Val>) = (None, None);
    for i in 0..fin.len() {
        for j in i + 1..fin.len() {
            if fin[i] == fin[j] {
                continue;
            }
            let v = k.dist(fin[i], fin[j]);
            closest = Some(closest.map_or(v.clone(), |c| Val::min(&c, &v)));
            farthest = Some(farthest.map_or(v.clone(), |f| Val::max(&f, &v)));
        }
    }
    OrbitReport {
        points,
        closest,
        farthest,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: i64) -> Val {
        Val::from_ints(&[x])
    }

    fn pt(k: &Field, n: i64) -> ProjPoint {
        ProjPoint::Fin(k.int(n))
    }

    #[test]
    fn apply_examples() {
        let k = Field::padic(3);
        let mu3 = Moebius::scaling(&k, &k.int(3)).unwrap();
        assert_eq!(mu3.apply(&k, &pt(&k, 2)), pt(&k, 6));
        let g = Moebius::from_ints(&k, 3, 0, 2, 1).unwrap();
        assert_eq!(g.apply(&k, &pt(&k, 1)), pt(&k, 1));
        let inv = Moebius::from_ints(&k, 0, -1, 1, 0).unwrap();
        assert_eq!(inv.apply(&k, &pt(&k, 0)), ProjPoint::Inf);
        assert_eq!(inv.apply(&k, &ProjPoint::Inf), pt(&k, 0));
    }

    #[test]
    fn normalization_is_projective() {
        let k = Field::padic(3);
        let g = Moebius::from_ints(&k, 3, 0, 2, 1).unwrap();
        assert_eq!(g, Moebius::from_ints(&k, 6, 0, 4, 2).unwrap());
        assert_eq!(
            Moebius::from_ints(&k, 1, 2, 2, 4),
            Err(MoebiusError::Singular)
        );
    }

    #[test]
    fn derivative_examples() {
        let k = Field::padic(3);
        let mu3 = Moebius::scaling(&k, &k.int(3)).unwrap();
        assert_eq!(mu3.derivative_valuation(&k, &pt(&k, 0)).unwrap(), v(1));
        let g = Moebius::from_ints(&k, 3, 0, 2, 1).unwrap();
        assert_eq!(g.derivative_valuation(&k, &pt(&k, 0)).unwrap(), v(1));
        assert_eq!(g.derivative_valuation(&k, &ProjPoint::Inf).unwrap(), v(1));
        assert_eq!(
            g.derivative_valuation(&k, &ProjPoint::Fin(k.ratio(-1, 2))),
            Err(MoebiusError::PoleInput)
        );
    }

    #[test]
    fn region_examples() {
        let k = Field::padic(3);
        let unit = Ball::unit(&k);
        let mu3 = Moebius::scaling(&k, &k.int(3)).unwrap();
        assert_eq!(
            mu3.act_on_region(&k, &unit),
            Region::Ball(Ball::new(&k, &k.zero(), v(1)))
        );
        let inv = Moebius::from_ints(&k, 0, 1, 1, 0).unwrap();
        assert_eq!(
            inv.act_on_region(&k, &unit),
            Region::Complement(unit.clone(), k.zero())
        );
        assert_eq!(inv.act_on_tree(&k, &unit), unit);
        let tr = Moebius::translation(&k, &k.one());
        assert_eq!(tr.act_on_region(&k, &unit), Region::Ball(unit.clone()));
        assert_eq!(Moebius::identity(&k).act_on_tree(&k, &unit), unit);
    }

    #[test]
    fn varpi_examples() {
        let k = Field::padic(3);
        let q = k.int(9);
        let w = Moebius::scaling(&k, &q).unwrap().varpi(&k);
        assert_eq!(w, k.ratio(100, 9));
        assert_eq!(k.valuation(&w), v(-2));
        assert!(k.is_zero(&Moebius::from_ints(&k, 0, -1, 1, 0).unwrap().varpi(&k)));
        assert_eq!(
            Moebius::from_ints(&k, 2, 1, 1, 2).unwrap().varpi(&k),
            k.ratio(16, 3)
        );
    }

    #[test]
    fn classify_examples() {
        let k = Field::padic(3);
        let p = v(20);
        let c = classify(&k, &Moebius::from_ints(&k, 3, 0, 0, 1).unwrap(), &p).unwrap();
        assert!(c.is_hyperbolic());
        assert_eq!(c.multiplier_valuation, Some(v(1)));
        assert_eq!(
            c.fixed.iter().map(|f| f.point.clone()).collect::<Vec<_>>(),
            vec![pt(&k, 0), ProjPoint::Inf]
        );
        let c = classify(&k, &Moebius::from_ints(&k, 1, 1, 0, 1).unwrap(), &p).unwrap();
        assert_eq!(c.kind, MoebiusKind::NonHyperbolicInfinite);
        let c = classify(&k, &Moebius::from_ints(&k, 0, -1, 1, 0).unwrap(), &p).unwrap();
        assert_eq!(c.kind, MoebiusKind::FiniteOrderCandidate);
        // Orders 3, 4 and 6 agree with the powers; a unit scaling by 2 has infinite order.
        for (m, n) in [((0, -1, 1, 1), 3), ((1, -1, 1, 1), 4), ((1, -1, 1, 0), 6)] {
            let g = Moebius::from_ints(&k, m.0, m.1, m.2, m.3).unwrap();
            assert!(g.pow(&k, n).is_identity(&k) && !g.pow(&k, n - 1).is_identity(&k));
            assert_eq!(
                classify(&k, &g, &p).unwrap().kind,
                MoebiusKind::FiniteOrderCandidate
            );
        }
        let c = classify(&k, &Moebius::from_ints(&k, 2, 0, 0, 1).unwrap(), &p).unwrap();
        assert_eq!(c.kind, MoebiusKind::NonHyperbolicInfinite);
        let f5 = Field::funcfield_fp(5);
        let c = classify(&f5, &Moebius::translation(&f5, &f5.one()), &p).unwrap();
        assert_eq!(c.kind, MoebiusKind::FiniteOrderCandidate);
        assert_eq!(
            classify(&k, &Moebius::identity(&k), &p),
            Err(MoebiusError::IdentityInput)
        );

        let r2 = Field::rank2(3);
        let p2 = Val::from_ints(&[10, 0]);
        let d3 = Moebius::new(&r2, r2.int(3), r2.zero(), r2.zero(), r2.one()).unwrap();
        assert!(!classify(&r2, &d3, &p2).unwrap().is_hyperbolic());
        let dt = Moebius::new(&r2, r2.t().unwrap(), r2.zero(), r2.zero(), r2.one()).unwrap();
        assert!(classify(&r2, &dt, &p2).unwrap().is_hyperbolic());
    }

    #[test]
    fn approximate_fixed_points() {
        // [[1,1],[1,-8]]: ϖ = 49/(-9), hyperbolic over Q_3 with irrational fixed points.
        let k = Field::padic(3);
        let g = Moebius::from_ints(&k, 1, 1, 1, -8).unwrap();
        let c = classify(&k, &g, &v(15)).unwrap();
        assert!(c.is_hyperbolic());
        for f in &c.fixed {
            assert!(f.precision.as_ref().unwrap() >= &v(15));
            let x = f.point.finite().unwrap();
            let gx = g.apply_elem(&k, x);
            assert!(k.dist(gx.finite().unwrap(), x) >= v(14));
        }
        let att = c.fixed[0].point.clone();
        let rep = c.fixed[1].point.clone();
        assert!(g.derivative_valuation(&k, &att).unwrap() > Val::zero(1));
        assert!(g.derivative_valuation(&k, &rep).unwrap() < Val::zero(1));
    }

    #[test]
    fn two_ball_construction() {
        let k = Field::padic(3);
        let b = Ball::new(&k, &k.int(1), v(1));
        let b2 = Ball::new(&k, &k.zero(), v(1));
        let g = hyperbolic_from_balls(&k, &b, &b2).unwrap();
        assert_eq!(g.act_on_tree(&k, &b), b2);
        assert!(b.contains_point(&k, &g.pole(&k)));
        assert!(classify(&k, &g, &v(10)).unwrap().is_hyperbolic());
        let g9 = hyperbolic_from_balls_with(&k, &b, &b2, &k.int(9)).unwrap();
        assert_eq!(g9.act_on_tree(&k, &b), b2);
        assert!(matches!(
            hyperbolic_from_balls_with(&k, &b, &b2, &k.ratio(1, 9)),
            Err(MoebiusError::WrongMultiplier { .. })
        ));
        let big = Ball::unit(&k);
        let small = Ball::new(&k, &k.int(4), v(3));
        let g = hyperbolic_from_balls(&k, &big, &small).unwrap();
        assert_eq!(g.act_on_tree(&k, &big), small);
        let g = hyperbolic_from_balls(&k, &small, &big).unwrap();
        assert_eq!(g.act_on_tree(&k, &small), big);
        assert!(matches!(
            hyperbolic_from_balls(&k, &b, &b),
            Err(MoebiusError::NotNilpotentDistance(_))
        ));
    }

    #[test]
    fn stabilizer_examples() {
        let k = Field::padic(3);
        assert!(Moebius::from_ints(&k, 1, 1, 0, 1)
            .unwrap()
            .stabilizes_t0(&k));
        assert!(!Moebius::from_ints(&k, 3, 0, 0, 1)
            .unwrap()
            .stabilizes_t0(&k));
        assert!(Moebius::from_ints(&k, 0, -1, 1, 0)
            .unwrap()
            .stabilizes_t0(&k));
    }

    #[test]
    fn orbit_examples() {
        let k = Field::padic(3);
        let mu3 = Moebius::scaling(&k, &k.int(3)).unwrap();
        let r = orbit_report(&k, &mu3, &pt(&k, 1), 5);
        for (j, x) in &r.points {
            assert_eq!(k.valuation(x.finite().unwrap()), v(*j));
        }
        let f = Field::funcfield_q();
        let mu2 = Moebius::scaling(&f, &f.int(2)).unwrap();
        assert!(orbit_report(&f, &mu2, &ProjPoint::Fin(f.one()), 10).uniformly_separated());
    }
}
