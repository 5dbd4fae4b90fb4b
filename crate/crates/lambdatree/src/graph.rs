//! Finite multigraphs with Λ-weighted edges (loops allowed), their genus and
//! an isomorphism-invariant canonical form.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::io::{val_from_json, val_to_json};
use crate::valued_field::{FieldError, Val};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: Val,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct WeightedGraph {
    pub vertices: Vec<String>,
    pub edges: Vec<Edge>,
}

/// Vertex count and the lexicographically least sorted edge list over all
/// vertex orderings compatible with colour refinement.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    pub vertex_count: usize,
    pub edges: Vec<(usize, usize, Val)>,
}

impl WeightedGraph {
    pub fn new() -> WeightedGraph {
        WeightedGraph::default()
    }

    pub fn add_vertex(&mut self, label: impl Into<String>) -> usize {
        self.vertices.push(label.into());
        self.vertices.len() - 1
    }

    pub fn add_edge(&mut self, u: usize, v: usize, weight: Val) {
        self.edges.push(Edge { u, v, weight });
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == label)
    }

    /// Degree with loops counted twice.
    pub fn valence(&self, x: usize) -> usize {
        self.edges
            .iter()
            .map(|e| usize::from(e.u == x) + usize::from(e.v == x))
            .sum()
    }

    pub fn components(&self) -> usize {
        let mut parent: Vec<usize> = (0..self.vertices.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        for e in &self.edges {
            let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
            parent[a] = b;
        }
        (0..self.vertices.len())
            .filter(|&x| find(&mut parent, x) == x)
            .count()
    }

    pub fn is_connected(&self) -> bool {
        self.components() <= 1
    }

    /// First Betti number `|E| - |V| + #components`.
    pub fn genus(&self) -> usize {
        self.edges.len() + self.components() - self.vertices.len()
    }

    fn colours(&self) -> Vec<usize> {
        let n = self.vertices.len();
        let mut colour = vec![0usize; n];
        let mut classes = 0;
        loop {
            let sigs: Vec<(usize, Vec<(usize, Val, bool)>)> = (0..n)
                .map(|x| {
                    let mut s: Vec<(usize, Val, bool)> = self
                        .edges
                        .iter()
                        .filter(|e| e.u == x || e.v == x)
                        .map(|e| {
                            let other = if e.u == x { e.v } else { e.u };
                            (colour[other], e.weight.clone(), e.u == e.v)
                        })
                        .collect();
                    s.sort();
                    (colour[x], s)
                })
                .collect();
            let mut distinct = sigs.clone();
            distinct.sort();
            distinct.dedup();
            colour = sigs
                .iter()
                .map(|s| distinct.binary_search(s).unwrap())
                .collect();
            if distinct.len() == classes {
                return colour;
            }
            classes = distinct.len();
        }
    }

    pub fn canonical_form(&self) -> CanonicalForm {
        let colour = self.colours();
        let mut cells: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (x, c) in colour.iter().enumerate() {
            cells.entry(*c).or_default().push(x);
        }
        let cells: Vec<Vec<usize>> = cells.into_values().collect();
        let mut best: Option<Vec<(usize, usize, Val)>> = None;
        let mut order = Vec::with_capacity(self.vertices.len());
        self.search(&cells, 0, &mut order, &mut best);
        CanonicalForm {
            vertex_count: self.vertices.len(),
            edges: best.unwrap_or_default(),
        }
    }

    fn search(
        &self,
        cells: &[Vec<usize>],
        i: usize,
        order: &mut Vec<usize>,
        best: &mut Option<Vec<(usize, usize, Val)>>,
    ) {
        if i == cells.len() {
            let mut pos = vec![0; self.vertices.len()];
            for (p, &x) in order.iter().enumerate() {
                pos[x] = p;
            }
            let mut edges: Vec<(usize, usize, Val)> = self
                .edges
                .iter()
                .map(|e| {
                    let (a, b) = (pos[e.u], pos[e.v]);
                    (a.min(b), a.max(b), e.weight.clone())
                })
                .collect();
            edges.sort();
            if best.as_ref().is_none_or(|b| edges < *b) {
                *best = Some(edges);
            }
            return;
        }
        permute(&cells[i], &mut Vec::new(), &mut |perm| {
            let len = order.len();
            order.extend_from_slice(perm);
            self.search(cells, i + 1, order, best);
            order.truncate(len);
        });
    }

    pub fn is_isomorphic(&self, other: &WeightedGraph) -> bool {
        self.canonical_form() == other.canonical_form()
    }

    /// `{"vertices":["a","b"],"edges":[["a","b",[2]], ...]}`.
    pub fn to_json(&self) -> Value {
        json!({
            "vertices": self.vertices,
            "edges": self.edges.iter().map(|e| json!([self.vertices[e.u], self.vertices[e.v], val_to_json(&e.weight)])).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value, rank: usize) -> Result<WeightedGraph, FieldError> {
        let bad = |what: &str| FieldError::Parse(format!("graph: {what}"));
        let mut g = WeightedGraph::new();
        for x in v
            .get("vertices")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing vertices"))?
        {
            let label = x
                .as_str()
                .ok_or_else(|| bad("vertex labels must be strings"))?;
            if g.index_of(label).is_some() {
                return Err(bad("duplicate vertex"));
            }
            g.add_vertex(label);
        }
        for e in v
            .get("edges")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing edges"))?
        {
            let parts = e
                .as_array()
                .filter(|p| p.len() == 3)
                .ok_or_else(|| bad("edges are [u, v, weight]"))?;
            let end = |x: &Value| {
                x.as_str()
                    .and_then(|s| g.index_of(s))
                    .ok_or_else(|| bad("unknown edge endpoint"))
            };
            let (u, w) = (end(&parts[0])?, end(&parts[1])?);
            let weight = val_from_json(&parts[2], rank)?;
            if !weight.is_positive() {
                return Err(bad("edge weights must be positive"));
            }
            g.add_edge(u, w, weight);
        }
        Ok(g)
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph G {\n");
        for (i, v) in self.vertices.iter().enumerate() {
            writeln!(out, "  v{i} [label=\"{v}\"];").unwrap();
        }
        for e in &self.edges {
            writeln!(out, "  v{} -- v{} [label=\"{}\"];", e.u, e.v, e.weight).unwrap();
        }
        out.push_str("}\n");
        out
    }
}

fn permute(items: &[usize], prefix: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if prefix.len() == items.len() {
        f(prefix);
        return;
    }
    for &x in items {
        if !prefix.contains(&x) {
            prefix.push(x);
            permute(items, prefix, f);
            prefix.pop();
        }
    }
}
