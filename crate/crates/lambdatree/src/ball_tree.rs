//! Closed balls of `K` as points of the Λ-tree: join, distance, the t-map and
//! paths between points of the projective line.

use thiserror::Error;

use crate::valued_field::{Elem, Field, Val};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("the three points are not pairwise distinct")]
    DegenerateTriple,
    #[error("the two points coincide")]
    DegeneratePair,
}

/// A point of `P^1(K)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProjPoint {
    Fin(Elem),
    Inf,
}

impl ProjPoint {
    pub fn finite(&self) -> Option<&Elem> {
        match self {
            ProjPoint::Fin(x) => Some(x),
            ProjPoint::Inf => None,
        }
    }

    pub fn is_inf(&self) -> bool {
        matches!(self, ProjPoint::Inf)
    }

    pub fn format(&self, k: &Field) -> String {
        match self {
            ProjPoint::Fin(x) => k.format(x),
            ProjPoint::Inf => "inf".into(),
        }
    }

    pub fn parse(k: &Field, s: &str) -> Result<ProjPoint, crate::FieldError> {
        if s.trim() == "inf" {
            Ok(ProjPoint::Inf)
        } else {
            k.parse(s).map(ProjPoint::Fin)
        }
    }

    pub fn to_json(&self, k: &Field) -> serde_json::Value {
        match self {
            ProjPoint::Fin(x) => k.to_json(x),
            ProjPoint::Inf => serde_json::Value::String("inf".into()),
        }
    }

    pub fn from_json(k: &Field, v: &serde_json::Value) -> Result<ProjPoint, crate::FieldError> {
        match v {
            serde_json::Value::String(s) if s.trim() == "inf" => Ok(ProjPoint::Inf),
            _ => k.from_json(v).map(ProjPoint::Fin),
        }
    }
}

/// Closed ball `B(c, ρ) = {z : v(z - c) >= ρ}` with canonical center.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ball {
    center: Elem,
    radius: Val,
}

impl Ball {
    pub fn new(k: &Field, center: &Elem, radius: Val) -> Ball {
        assert!(!radius.is_bottom(), "balls have a non-zero radius");
        Ball {
            center: k.canonical_center(center, &radius),
            radius,
        }
    }

    /// `B(0, 1)`, the ball `O`.
    pub fn unit(k: &Field) -> Ball {
        Ball::new(k, &k.zero(), Val::zero(k.rank()))
    }

    pub fn center(&self) -> &Elem {
        &self.center
    }

    /// Additive radius: the multiplicative radius `ϱ(B)` is `|x|` for any `x` with this
    /// valuation.
    pub fn radius(&self) -> &Val {
        &self.radius
    }

    pub fn contains(&self, k: &Field, z: &Elem) -> bool {
        k.dist(z, &self.center) >= self.radius
    }

    pub fn contains_point(&self, k: &Field, z: &ProjPoint) -> bool {
        z.finite().is_some_and(|z| self.contains(k, z))
    }

    /// `self ⊆ other`.
    pub fn is_subset(&self, k: &Field, other: &Ball) -> bool {
        self.radius >= other.radius && other.contains(k, &self.center)
    }

    pub fn is_disjoint(&self, k: &Field, other: &Ball) -> bool {
        !self.is_subset(k, other) && !other.is_subset(k, self)
    }

    /// The ball with the same center and radius `r`.
    pub fn with_radius(&self, k: &Field, r: Val) -> Ball {
        Ball::new(k, &self.center, r)
    }

    pub fn label(&self, k: &Field) -> String {
        format!("B({};{})", k.format(&self.center), self.radius)
    }

    pub fn to_json(&self, k: &Field) -> serde_json::Value {
        serde_json::json!({ "center": k.to_json(&self.center), "radius": crate::io::val_to_json(&self.radius) })
    }

    pub fn from_json(k: &Field, v: &serde_json::Value) -> Result<Ball, crate::FieldError> {
        let bad = || crate::FieldError::Parse(format!("expected a ball, got {v}"));
        let center = k.from_json(v.get("center").ok_or_else(bad)?)?;
        let radius = crate::io::val_from_json(v.get("radius").ok_or_else(bad)?, k.rank())?;
        if radius.is_bottom() {
            return Err(bad());
        }
        Ok(Ball::new(k, &center, radius))
    }
}

/// A ball, or the complement `B^c(p, ρ) = {z : |z - p| >= ρ} ∪ {∞}` of the
/// open ball of radius `ρ` around `p`, stored as the closed ball `B(p, ρ)`
/// (the vertex of the tree) together with `p` itself, since the closed ball
/// alone does not determine which open ball is removed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Region {
    Ball(Ball),
    Complement(Ball, Elem),
}

impl Region {
    pub fn contains(&self, k: &Field, z: &ProjPoint) -> bool {
        match (self, z) {
            (Region::Ball(b), _) => b.contains_point(k, z),
            (Region::Complement(..), ProjPoint::Inf) => true,
            (Region::Complement(b, p), ProjPoint::Fin(z)) => k.dist(z, p) <= *b.radius(),
        }
    }

    pub fn ball(&self) -> &Ball {
        match self {
            Region::Ball(b) | Region::Complement(b, _) => b,
        }
    }

    pub fn is_complement(&self) -> bool {
        matches!(self, Region::Complement(..))
    }

    /// Ball JSON; a complement carries its exact centre and `"complement": true`.
    pub fn to_json(&self, k: &Field) -> serde_json::Value {
        match self {
            Region::Ball(b) => b.to_json(k),
            Region::Complement(b, p) => serde_json::json!({
                "center": k.to_json(p),
                "radius": crate::io::val_to_json(b.radius()),
                "complement": true,
            }),
        }
    }
}

/// Smallest ball containing both: `B(c1, min(v(c1 - c2), ρ1, ρ2))`.
pub fn join(k: &Field, b1: &Ball, b2: &Ball) -> Ball {
    let r = Val::min(
        &k.dist(b1.center(), b2.center()),
        &Val::min(b1.radius(), b2.radius()),
    );
    b1.with_radius(k, r)
}

/// Λ-distance, returned additively: `d(B1, B2) = |x|^{-1}` with
/// `v(x) = distance(B1, B2)`, i.e. the sum of the two radius drops to the join.
pub fn distance(k: &Field, b1: &Ball, b2: &Ball) -> Val {
    let j = join(k, b1, b2);
    &(b1.radius() - j.radius()) + &(b2.radius() - j.radius())
}

fn check_distinct3(p1: &ProjPoint, p2: &ProjPoint, p3: &ProjPoint) -> Result<(), TreeError> {
    if p1 == p2 || p1 == p3 || p2 == p3 {
        Err(TreeError::DegenerateTriple)
    } else {
        Ok(())
    }
}

/// The unique ball on all three paths between `p1`, `p2` and `p3`.
pub fn t_map(k: &Field, p1: &ProjPoint, p2: &ProjPoint, p3: &ProjPoint) -> Result<Ball, TreeError> {
    check_distinct3(p1, p2, p3)?;
    let fin: Vec<&Elem> = [p1, p2, p3]
        .into_iter()
        .filter_map(ProjPoint::finite)
        .collect();
    if fin.len() == 2 {
        return Ok(Ball::new(k, fin[0], k.dist(fin[0], fin[1])));
    }
    let pairs = [(0, 1), (0, 2), (1, 2)];
    let (i, _, v) = pairs
        .iter()
        .map(|&(i, j)| (i, j, k.dist(fin[i], fin[j])))
        .max_by(|a, b| a.2.cmp(&b.2))
        .unwrap();
    Ok(Ball::new(k, fin[i], v))
}

/// The set `{B(anchor, δ) : outer <= δ <= inner}` (additive radii); `None`
/// bounds are open towards `∞` (outer) or towards the anchor point (inner).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathSegment {
    pub anchor: Elem,
    pub outer: Option<Val>,
    pub inner: Option<Val>,
}

impl PathSegment {
    pub fn contains(&self, k: &Field, b: &Ball) -> bool {
        let r = b.radius();
        self.outer.as_ref().is_none_or(|o| r >= o)
            && self.inner.as_ref().is_none_or(|i| r <= i)
            && b.contains(k, &self.anchor)
    }
}

/// `π(p, q)`: two segments meeting at `B(p, |p - q|)`, or one unbounded
/// segment when one of the points is `∞`.
pub fn path_between(
    k: &Field,
    p: &ProjPoint,
    q: &ProjPoint,
) -> Result<Vec<PathSegment>, TreeError> {
    if p == q {
        return Err(TreeError::DegeneratePair);
    }
    Ok(match (p, q) {
        (ProjPoint::Fin(a), ProjPoint::Inf) | (ProjPoint::Inf, ProjPoint::Fin(a)) => {
            vec![PathSegment {
                anchor: a.clone(),
                outer: None,
                inner: None,
            }]
        }
        (ProjPoint::Fin(a), ProjPoint::Fin(b)) => {
            let m = k.dist(a, b);
            vec![
                PathSegment {
                    anchor: a.clone(),
                    outer: Some(m.clone()),
                    inner: None,
                },
                PathSegment {
                    anchor: b.clone(),
                    outer: Some(m),
                    inner: None,
                },
            ]
        }
        (ProjPoint::Inf, ProjPoint::Inf) => unreachable!(),
    })
}

/// Whether the ball lies on the path between two distinct points.
pub fn on_path(k: &Field, p: &ProjPoint, q: &ProjPoint, b: &Ball) -> bool {
    path_between(k, p, q).is_ok_and(|segs| segs.iter().any(|s| s.contains(k, b)))
}

/// Coordinate of `t(p1, p2, q)` on `π(p1, p2)`: additively
/// `v(q - p1) - v(q - p2)`, with `|q - ∞| := 1`.
pub fn path_coordinate(
    k: &Field,
    p1: &ProjPoint,
    p2: &ProjPoint,
    q: &ProjPoint,
) -> Result<Val, TreeError> {
    check_distinct3(p1, p2, q)?;
    let zero = Val::zero(k.rank());
    let v = |a: &ProjPoint| match (q, a) {
        (ProjPoint::Fin(q), ProjPoint::Fin(a)) => k.dist(q, a),
        _ => zero.clone(),
    };
    Ok(&v(p1) - &v(p2))
}

/// Number of directions at `b` containing points of `l`: one for everything
/// outside `b` (including `∞`) and one per residue disc of `b` that meets `l`.
pub fn direction_count(k: &Field, b: &Ball, l: &[ProjPoint]) -> usize {
    let mut outward = false;
    let mut reps: Vec<&Elem> = Vec::new();
    for z in l {
        match z {
            ProjPoint::Fin(z) if b.contains(k, z) => {
                if !reps.iter().any(|r| k.dist(z, r) > *b.radius()) {
                    reps.push(z);
                }
            }
            _ => outward = true,
        }
    }
    reps.len() + usize::from(outward)
}

/// Whether `b = t(p, q, r)` for some distinct `p, q, r ∈ l`.
pub fn is_t_value(k: &Field, b: &Ball, l: &[ProjPoint]) -> bool {
    direction_count(k, b, l) >= 3
}

fn side_candidates(k: &Field, from: &Ball, top: &Ball, l: &[ProjPoint], out: &mut Vec<Ball>) {
    out.push(from.clone());
    for q in l.iter().filter_map(ProjPoint::finite) {
        let r = Val::min(&k.dist(q, from.center()), from.radius());
        if r >= *top.radius() {
            out.push(from.with_radius(k, r));
        }
    }
}

/// All t-values of `l` on the segment `[b1, b2]`, ordered from `b1` to `b2`.
pub fn segment_vertices(k: &Field, b1: &Ball, b2: &Ball, l: &[ProjPoint]) -> Vec<Ball> {
    let j = join(k, b1, b2);
    let mut cands = vec![j.clone()];
    side_candidates(k, b1, &j, l, &mut cands);
    side_candidates(k, b2, &j, l, &mut cands);
    cands.sort();
    cands.dedup();
    let mut out: Vec<(Val, Ball)> = cands
        .into_iter()
        .filter(|b| is_t_value(k, b, l))
        .map(|b| (distance(k, b1, &b), b))
        .collect();
    out.sort();
    out.into_iter().map(|(_, b)| b).collect()
}
