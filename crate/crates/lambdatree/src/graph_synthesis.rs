//! The reverse construction: from a finite graph with Λ-weights to ping-pong
//! data whose quotient graph is that graph.
//!
//! A spanning tree is lifted into nested balls, each cotree edge `e = {u, v}`
//! becomes a pair of half-edge balls below the lifts of `u` and `v` whose
//! depths add up to `w(e)`, and the generator for `e` pairs those two balls.

use std::collections::VecDeque;

use num_traits::Signed;
use serde_json::{json, Value};
use thiserror::Error;

use crate::ball_tree::Ball;
use crate::graph::{CanonicalForm, WeightedGraph};
use crate::io::val_to_json;
use crate::moebius::{hyperbolic_from_balls, MoebiusError};
use crate::schottky::{verify_ping_pong, QuotientGraph, Schottky, SchottkyData, SchottkyError};
use crate::valued_field::{Field, FieldError, Val};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SynthesisError {
    #[error("the graph has no vertices")]
    Empty,
    #[error("the graph is not connected")]
    NotConnected,
    #[error("edge {edge} has weight {weight}, which is not positive")]
    NonPositiveWeight { edge: usize, weight: String },
    #[error("vertex {vertex} has valence {valence}; contract vertices of valence <= 2 first")]
    LowValence { vertex: String, valence: usize },
    #[error("edge {edge} closes a cycle without a topologically nilpotent edge weight")]
    NoNilpotentEdgeInCycle { edge: usize },
    #[error(
        "vertex {vertex} needs {requested} residue classes, the residue field has {available}"
    )]
    TooFewResidues {
        vertex: String,
        requested: usize,
        available: u64,
    },
    #[error("sub-ball depth {0} is not a positive value of the valuation")]
    BadDepth(String),
    #[error("weight {0} cannot be split into two topologically nilpotent halves")]
    Unsplittable(String),
    #[error("synthesized data fails ping-pong: {0}")]
    Verification(String),
    #[error(transparent)]
    Moebius(#[from] MoebiusError),
    #[error(transparent)]
    Schottky(#[from] SchottkyError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Spanning tree and cotree of a weighted graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cotree {
    pub tree: Vec<usize>,
    pub cotree: Vec<usize>,
}

/// Edges `e_1, …, e_g` (indices into `g.edges`) whose removal leaves a
/// spanning tree and whose weights are topologically nilpotent.
///
/// Greedy: edges of weight with leading coordinate zero are offered to the
/// tree first, so a cycle made only of such edges is the one failure mode.
pub fn nilpotent_cotree(g: &WeightedGraph) -> Result<Cotree, SynthesisError> {
    let n = g.vertices.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for (i, e) in g.edges.iter().enumerate() {
        if !e.weight.is_positive() || e.weight.is_bottom() {
            return Err(SynthesisError::NonPositiveWeight {
                edge: i,
                weight: e.weight.to_string(),
            });
        }
    }
    let mut order: Vec<usize> = (0..g.edges.len()).collect();
    order.sort_by_key(|&i| g.edges[i].weight.lead().is_positive());
    let (mut tree, mut cotree) = (Vec::new(), Vec::new());
    for i in order {
        let e = &g.edges[i];
        let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
        if a != b {
            parent[a] = b;
            tree.push(i);
        } else if e.weight.lead().is_positive() {
            cotree.push(i);
        } else {
            return Err(SynthesisError::NoNilpotentEdgeInCycle { edge: i });
        }
    }
    if tree.len() + 1 != n {
        return Err(if n == 0 {
            SynthesisError::Empty
        } else {
            SynthesisError::NotConnected
        });
    }
    tree.sort_unstable();
    cotree.sort_unstable();
    Ok(Cotree { tree, cotree })
}

/// Pairwise disjoint sub-balls `B_i ⊂ B` with `d(B, B_i) = ρ_i`, centred on
/// distinct residue classes below `B`.
pub fn place_subballs(k: &Field, b: &Ball, distances: &[Val]) -> Result<Vec<Ball>, SynthesisError> {
    for d in distances {
        if !d.is_positive() || !k.in_lattice(&(b.radius() + d)) {
            return Err(SynthesisError::BadDepth(d.to_string()));
        }
    }
    let reps = k
        .residue_representatives(distances.len())
        .map_err(|e| match e {
            FieldError::TooFewResidues {
                requested,
                available,
            } => SynthesisError::TooFewResidues {
                vertex: b.label(k),
                requested,
                available,
            },
            e => e.into(),
        })?;
    let step = k.monomial(b.radius())?;
    Ok(reps
        .iter()
        .zip(distances)
        .map(|(s, d)| Ball::new(k, &k.add(b.center(), &k.mul(&step, s)), b.radius() + d))
        .collect())
}

/// Split `w = a + b` with both halves topologically nilpotent values of `k`:
/// the midpoint when possible, otherwise a shortest admissible first half.
fn split_weight(k: &Field, w: &Val) -> Option<(Val, Val)> {
    let unit = Val::unit(w.rank(), 0);
    let mut candidates = vec![w.halve()];
    if k.is_quad() {
        candidates.push(unit.halve());
    }
    candidates.push(unit);
    candidates
        .into_iter()
        .map(|a| (w - &a, a))
        .find_map(|(b, a)| {
            let ok = |x: &Val| x.lead().is_positive() && k.in_lattice(x);
            (ok(&a) && ok(&b)).then_some((a, b))
        })
}

/// Ping-pong data synthesized from a weighted graph.
#[derive(Clone, Debug)]
pub struct Synthesis {
    pub schottky: Schottky,
    pub cotree: Cotree,
    pub root: usize,
    /// Lift of each vertex of the input graph.
    pub vertex_balls: Vec<Ball>,
    /// Whether the field had to be extended by a square root of the uniformizer.
    pub extended: bool,
    pub note: Option<String>,
}

impl Synthesis {
    pub fn to_json(&self) -> Value {
        let k = self.schottky.field();
        json!({
            "schottky": self.schottky.data().to_json(),
            "root": self.root,
            "tree_edges": self.cotree.tree,
            "cotree_edges": self.cotree.cotree,
            "vertex_balls": self.vertex_balls.iter().map(|b| b.to_json(k)).collect::<Vec<_>>(),
            "extended": self.extended,
            "note": self.note,
        })
    }
}

fn check_input(g: &WeightedGraph) -> Result<(), SynthesisError> {
    if g.vertices.is_empty() {
        return Err(SynthesisError::Empty);
    }
    if !g.is_connected() {
        return Err(SynthesisError::NotConnected);
    }
    for (x, label) in g.vertices.iter().enumerate() {
        let valence = g.valence(x);
        if valence <= 2 {
            return Err(SynthesisError::LowValence {
                vertex: label.clone(),
                valence,
            });
        }
    }
    Ok(())
}

/// The root: a vertex of minimum valence, ties broken by label.
fn root_vertex(g: &WeightedGraph) -> usize {
    (0..g.vertices.len())
        .min_by(|&x, &y| (g.valence(x), &g.vertices[x]).cmp(&(g.valence(y), &g.vertices[y])))
        .unwrap()
}

/// Ping-pong data over `k`, or over `k(√π)` for the uniformizer `π` when some
/// weight has no admissible split in the value group of `k`.
pub fn synthesize(g: &WeightedGraph, k: &Field) -> Result<Synthesis, SynthesisError> {
    check_input(g)?;
    let cotree = nilpotent_cotree(g)?;
    let fits = |f: &Field| {
        cotree
            .tree
            .iter()
            .all(|&i| f.in_lattice(&g.edges[i].weight))
            && cotree
                .cotree
                .iter()
                .all(|&i| split_weight(f, &g.edges[i].weight).is_some())
    };
    let (field, extended, note) = if fits(k) || k.is_quad() {
        (k.clone(), false, None)
    } else {
        let ramifier = k.format(&k.uniformizer());
        let ext = k.quad_ext(&ramifier)?;
        let note = format!(
            "weights need half values; working over the extension by the square root of {ramifier}"
        );
        (ext, true, Some(note))
    };
    let k = &field;
    let root = root_vertex(g);
    let genus = cotree.cotree.len();

    // Per vertex: downward items as (tree child or half-edge slot, depth).
    enum Item {
        Child(usize),
        Half(usize),
    }
    let mut below: Vec<Vec<(Item, Val)>> = (0..g.vertices.len()).map(|_| Vec::new()).collect();
    let mut parent_of: Vec<Option<usize>> = vec![None; g.vertices.len()];
    let mut seen = vec![false; g.vertices.len()];
    seen[root] = true;
    let mut queue = VecDeque::from([root]);
    while let Some(x) = queue.pop_front() {
        for &i in &cotree.tree {
            let e = &g.edges[i];
            let y = if e.u == x {
                e.v
            } else if e.v == x {
                e.u
            } else {
                continue;
            };
            if !seen[y] {
                seen[y] = true;
                parent_of[y] = Some(x);
                below[x].push((Item::Child(y), e.weight.clone()));
                queue.push_back(y);
            }
        }
    }
    for (slot, &i) in cotree.cotree.iter().enumerate() {
        let e = &g.edges[i];
        let (a, b) = split_weight(k, &e.weight)
            .ok_or_else(|| SynthesisError::Unsplittable(e.weight.to_string()))?;
        below[e.u].push((Item::Half(slot), a));
        below[e.v].push((Item::Half(slot + genus), b));
    }

    let mut vertex_balls: Vec<Option<Ball>> = vec![None; g.vertices.len()];
    let mut half_balls: Vec<Option<Ball>> = vec![None; 2 * genus];
    vertex_balls[root] = Some(Ball::unit(k));
    let mut queue = VecDeque::from([root]);
    while let Some(x) = queue.pop_front() {
        let bx = vertex_balls[x].clone().unwrap();
        let depths: Vec<Val> = below[x].iter().map(|(_, d)| d.clone()).collect();
        let subs = place_subballs(k, &bx, &depths).map_err(|e| match e {
            SynthesisError::TooFewResidues {
                requested,
                available,
                ..
            } => SynthesisError::TooFewResidues {
                vertex: g.vertices[x].clone(),
                requested,
                available,
            },
            e => e,
        })?;
        for ((item, _), ball) in below[x].iter().zip(subs) {
            match item {
                Item::Child(y) => {
                    vertex_balls[*y] = Some(ball);
                    queue.push_back(*y);
                }
                Item::Half(s) => half_balls[*s] = Some(ball),
            }
        }
    }
    let balls: Vec<Ball> = half_balls.into_iter().map(Option::unwrap).collect();
    let generators = (0..genus)
        .map(|i| hyperbolic_from_balls(k, &balls[i], &balls[i + genus]))
        .collect::<Result<Vec<_>, _>>()?;
    let data = SchottkyData {
        field: k.clone(),
        generators,
        balls,
    };
    let schottky = verify_ping_pong(data).map_err(|v| {
        SynthesisError::Verification(
            v.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join("; "),
        )
    })?;
    Ok(Synthesis {
        schottky,
        cotree,
        root,
        vertex_balls: vertex_balls.into_iter().map(Option::unwrap).collect(),
        extended,
        note,
    })
}

/// Outcome of `quotient_graph(synthesize(G))` against `G`.
#[derive(Clone, Debug)]
pub struct RoundTrip {
    pub synthesis: Synthesis,
    pub quotient: QuotientGraph,
    pub input_form: CanonicalForm,
    pub quotient_form: CanonicalForm,
}

impl RoundTrip {
    pub fn isomorphic(&self) -> bool {
        self.input_form == self.quotient_form
    }

    /// The first position where the sorted canonical edge lists differ, as a
    /// mismatch certificate.
    pub fn mismatch(&self) -> Option<String> {
        if self.isomorphic() {
            return None;
        }
        let (a, b) = (&self.input_form, &self.quotient_form);
        if a.vertex_count != b.vertex_count {
            return Some(format!(
                "{} vertices in the input, {} in the quotient",
                a.vertex_count, b.vertex_count
            ));
        }
        let fmt = |e: Option<&(usize, usize, Val)>| {
            e.map_or("none".to_string(), |(u, v, w)| format!("{u}-{v} {w}"))
        };
        let i = (0..a.edges.len().max(b.edges.len()))
            .find(|&i| a.edges.get(i) != b.edges.get(i))
            .unwrap();
        Some(format!(
            "canonical edge {i}: input {}, quotient {}",
            fmt(a.edges.get(i)),
            fmt(b.edges.get(i))
        ))
    }

    pub fn to_json(&self) -> Value {
        let edges = |f: &CanonicalForm| {
            f.edges
                .iter()
                .map(|(u, v, w)| json!([u, v, val_to_json(w)]))
                .collect::<Vec<_>>()
        };
        json!({
            "isomorphic": self.isomorphic(),
            "mismatch": self.mismatch(),
            "genus": {"input": self.input_form.edges.len() + 1 - self.input_form.vertex_count, "quotient": self.quotient.genus},
            "input_canonical": edges(&self.input_form),
            "quotient_canonical": edges(&self.quotient_form),
            "synthesis": self.synthesis.to_json(),
            "quotient": self.quotient.to_json(),
        })
    }
}

pub fn round_trip(
    g: &WeightedGraph,
    k: &Field,
    depth: u32,
    max_depth: u32,
) -> Result<RoundTrip, SynthesisError> {
    let synthesis = synthesize(g, k)?;
    let quotient = synthesis.schottky.quotient_graph(None, depth, max_depth)?;
    Ok(RoundTrip {
        input_form: g.canonical_form(),
        quotient_form: quotient.graph.canonical_form(),
        synthesis,
        quotient,
    })
}
