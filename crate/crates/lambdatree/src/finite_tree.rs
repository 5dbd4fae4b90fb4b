//! The finite simplicial tree `T(L)` spanned by a finite set `L ⊂ P^1(K)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde_json::{json, Value};
use thiserror::Error;

use crate::ball_tree::{distance, t_map, Ball, ProjPoint};
use crate::io::val_to_json;
use crate::valued_field::{Field, FieldError, Val};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FiniteTreeError {
    #[error("need at least three points, got {0}")]
    TooFewPoints(usize),
    #[error("point {0} is already in the set")]
    DuplicatePoint(String),
    #[error("{0} is not a vertex of the tree")]
    UnknownVertex(String),
    #[error("ray balls are not strictly nested")]
    NotNested,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A finite, deduplicated, sorted set of points.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PointSet {
    points: Vec<ProjPoint>,
}

impl PointSet {
    pub fn new(mut points: Vec<ProjPoint>) -> PointSet {
        points.sort();
        points.dedup();
        PointSet { points }
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.points.binary_search(p).is_ok()
    }

    pub fn with(&self, p: ProjPoint) -> PointSet {
        let mut pts = self.points.clone();
        pts.push(p);
        PointSet::new(pts)
    }

    pub fn to_json(&self, k: &Field) -> Value {
        json!({ "points": self.points.iter().map(|p| p.to_json(k)).collect::<Vec<_>>() })
    }

    pub fn from_json(k: &Field, v: &Value) -> Result<PointSet, FieldError> {
        let arr = v
            .get("points")
            .and_then(Value::as_array)
            .ok_or_else(|| FieldError::Parse("expected {\"points\": [...]}".into()))?;
        Ok(PointSet::new(
            arr.iter()
                .map(|x| ProjPoint::from_json(k, x))
                .collect::<Result<_, _>>()?,
        ))
    }
}

/// Vertices and weighted edges of a finite subtree of the tree of balls.
/// Edges are stored with their endpoints in increasing order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SimplicialTree {
    vertices: BTreeSet<Ball>,
    edges: BTreeMap<(Ball, Ball), Val>,
}

fn ordered(a: Ball, b: Ball) -> (Ball, Ball) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

impl SimplicialTree {
    /// The tree on `vertices` whose edges join vertices with no third vertex
    /// between them.
    pub fn from_vertices(k: &Field, vertices: BTreeSet<Ball>) -> SimplicialTree {
        let vs: Vec<&Ball> = vertices.iter().collect();
        let n = vs.len();
        let mut d = vec![vec![Val::zero(k.rank()); n]; n];
        for i in 0..n {
            for j in i + 1..n {
                d[i][j] = distance(k, vs[i], vs[j]);
                d[j][i] = d[i][j].clone();
            }
        }
        let mut edges = BTreeMap::new();
        for i in 0..n {
            for j in i + 1..n {
                let between = (0..n).any(|w| w != i && w != j && &d[i][w] + &d[w][j] == d[i][j]);
                if !between {
                    edges.insert(ordered(vs[i].clone(), vs[j].clone()), d[i][j].clone());
                }
            }
        }
        SimplicialTree { vertices, edges }
    }

    pub fn vertices(&self) -> &BTreeSet<Ball> {
        &self.vertices
    }

    pub fn edges(&self) -> &BTreeMap<(Ball, Ball), Val> {
        &self.edges
    }

    pub fn has_edge(&self, a: &Ball, b: &Ball) -> bool {
        self.edges.contains_key(&ordered(a.clone(), b.clone()))
    }

    /// Edges at `v`, as `(neighbour, weight)`.
    pub fn star(&self, k: &Field, v: &Ball) -> Result<Vec<(Ball, Val)>, FiniteTreeError> {
        if !self.vertices.contains(v) {
            return Err(FiniteTreeError::UnknownVertex(v.label(k)));
        }
        Ok(self
            .edges
            .iter()
            .filter_map(|((a, b), w)| {
                if a == v {
                    Some((b.clone(), w.clone()))
                } else if b == v {
                    Some((a.clone(), w.clone()))
                } else {
                    None
                }
            })
            .collect())
    }

    pub fn is_connected(&self) -> bool {
        let Some(first) = self.vertices.iter().next() else {
            return true;
        };
        let mut seen = BTreeSet::from([first]);
        let mut stack = vec![first];
        while let Some(v) = stack.pop() {
            for (a, b) in self.edges.keys() {
                let other = if a == v {
                    b
                } else if b == v {
                    a
                } else {
                    continue;
                };
                if seen.insert(other) {
                    stack.push(other);
                }
            }
        }
        seen.len() == self.vertices.len()
    }

    /// Connected with `|E| = |V| - 1`.
    pub fn is_tree(&self) -> bool {
        self.is_connected() && self.edges.len() + 1 == self.vertices.len().max(1)
    }

    pub fn to_dot(&self, k: &Field) -> String {
        let mut out = String::from("graph T {\n");
        for v in &self.vertices {
            writeln!(out, "  \"{}\";", v.label(k)).unwrap();
        }
        for ((a, b), w) in &self.edges {
            writeln!(
                out,
                "  \"{}\" -- \"{}\" [label=\"{}\"];",
                a.label(k),
                b.label(k),
                w
            )
            .unwrap();
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self, k: &Field) -> Value {
        json!({
            "vertices": self.vertices.iter().map(|v| v.label(k)).collect::<Vec<_>>(),
            "edges": self.edges.iter().map(|((a, b), w)| json!({
                "from": a.label(k),
                "to": b.label(k),
                "weight": val_to_json(w),
            })).collect::<Vec<_>>(),
        })
    }
}

/// All t-values `t(p_i, p_j, p_k)` of the set.
pub fn t_values(k: &Field, l: &PointSet) -> BTreeSet<Ball> {
    let p = l.points();
    let mut out = BTreeSet::new();
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            for m in j + 1..p.len() {
                out.insert(t_map(k, &p[i], &p[j], &p[m]).expect("distinct points"));
            }
        }
    }
    out
}

/// `T(L)` by enumerating every triple.
pub fn build_tree(k: &Field, l: &PointSet) -> Result<SimplicialTree, FiniteTreeError> {
    if l.len() < 3 {
        return Err(FiniteTreeError::TooFewPoints(l.len()));
    }
    Ok(SimplicialTree::from_vertices(k, t_values(k, l)))
}

/// The vertex `v_p` where the branch towards `p` leaves the subtree spanned
/// by `l`: among the candidates `t(p, q, q')` the one closest to `p`.
pub fn attachment_vertex(k: &Field, l: &PointSet, p: &ProjPoint) -> Ball {
    let pts = l.points();
    let mut cands = BTreeSet::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            cands.insert(t_map(k, p, &pts[i], &pts[j]).expect("p not in l"));
        }
    }
    // A reference ball lying strictly between p and every candidate.
    let radii: Vec<&Val> = cands.iter().map(Ball::radius).collect();
    let one = Val::unit(k.rank(), 0);
    let reference = match p {
        ProjPoint::Fin(x) => Ball::new(k, x, &(*radii.iter().max().unwrap()).clone() + &one),
        ProjPoint::Inf => {
            let c = cands.iter().next().unwrap().center().clone();
            Ball::new(k, &c, *radii.iter().min().unwrap() - &one)
        }
    };
    cands
        .into_iter()
        .min_by_key(|c| distance(k, &reference, c))
        .unwrap()
}

/// `T(L ∪ {p})` from `T(L)`: at most one new vertex, which either splits an
/// edge or hangs off the nearest vertex.
pub fn insert_point(
    k: &Field,
    tree: &SimplicialTree,
    l: &PointSet,
    p: &ProjPoint,
) -> Result<(SimplicialTree, PointSet), FiniteTreeError> {
    if l.contains(p) {
        return Err(FiniteTreeError::DuplicatePoint(p.format(k)));
    }
    let l2 = l.with(p.clone());
    if l.len() < 3 {
        return Ok((build_tree(k, &l2)?, l2));
    }
    let vp = attachment_vertex(k, l, p);
    let mut out = tree.clone();
    if out.vertices.contains(&vp) {
        return Ok((out, l2));
    }
    let split = tree
        .edges
        .iter()
        .find(|((a, b), w)| &distance(k, a, &vp) + &distance(k, &vp, b) == **w)
        .map(|(e, _)| e.clone());
    match split {
        Some((a, b)) => {
            out.edges.remove(&(a.clone(), b.clone()));
            out.edges
                .insert(ordered(a.clone(), vp.clone()), distance(k, &a, &vp));
            out.edges
                .insert(ordered(vp.clone(), b.clone()), distance(k, &vp, &b));
        }
        None => {
            let near = tree
                .vertices
                .iter()
                .min_by_key(|v| distance(k, v, &vp))
                .unwrap()
                .clone();
            out.edges
                .insert(ordered(near.clone(), vp.clone()), distance(k, &near, &vp));
        }
    }
    out.vertices.insert(vp);
    Ok((out, l2))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RayDirection {
    Inward,
    Outward,
}

/// A finite prefix of a ray: strictly decreasing balls (inward) or strictly
/// increasing balls (outward).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RayPrefix {
    pub balls: Vec<Ball>,
    pub direction: RayDirection,
}

impl RayPrefix {
    /// `B(x, r_0) ⊃ B(x, r_1) ⊃ ...` for increasing additive radii.
    pub fn toward(k: &Field, x: &crate::Elem, radii: &[Val]) -> RayPrefix {
        RayPrefix {
            balls: radii.iter().map(|r| Ball::new(k, x, r.clone())).collect(),
            direction: RayDirection::Inward,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RayValue {
    Point(ProjPoint),
    /// The deepest ball holds `remaining` points of `L` (zero or several).
    Unresolved {
        remaining: usize,
    },
}

/// The point of `L` singled out by the ray, when the prefix already decides it.
pub fn evaluate_ray(k: &Field, ray: &RayPrefix, l: &PointSet) -> Result<RayValue, FiniteTreeError> {
    for w in ray.balls.windows(2) {
        let (outer, inner) = match ray.direction {
            RayDirection::Inward => (&w[0], &w[1]),
            RayDirection::Outward => (&w[1], &w[0]),
        };
        if outer == inner || !inner.is_subset(k, outer) {
            return Err(FiniteTreeError::NotNested);
        }
    }
    if ray.direction == RayDirection::Outward {
        return Ok(RayValue::Point(ProjPoint::Inf));
    }
    let Some(deepest) = ray.balls.last() else {
        return Ok(RayValue::Unresolved { remaining: l.len() });
    };
    let inside: Vec<&ProjPoint> = l
        .points()
        .iter()
        .filter(|p| deepest.contains_point(k, p))
        .collect();
    Ok(match inside.as_slice() {
        [p] => RayValue::Point((*p).clone()),
        _ => RayValue::Unresolved {
            remaining: inside.len(),
        },
    })
}
