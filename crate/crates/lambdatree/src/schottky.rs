//! Schottky groups presented by ping-pong data: verification, reduced words,
//! the balls `B(w)`, the fundamental domain, limit-set samples and the
//! quotient graph `T_Γ / Γ`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde_json::{json, Value};
use thiserror::Error;

use crate::ball_tree::{distance, segment_vertices, t_map, Ball, ProjPoint, TreeError};
use crate::finite_tree::PointSet;
use crate::graph::WeightedGraph;
use crate::io::val_to_json;
use crate::moebius::{classify, Classification, Moebius, MoebiusError};
use crate::valued_field::{is_top_nilpotent, Coord, Elem, Field, FieldError, FieldSpec, Val};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SchottkyError {
    #[error("the empty word has no ball")]
    EmptyWord,
    #[error("quotient graph did not stabilize up to depth {0}")]
    NotStabilized(u32),
    #[error("invalid word {0}")]
    BadWord(String),
    #[error(transparent)]
    Moebius(#[from] MoebiusError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// A reduced word in the generators: `+i` is `γ_i`, `-i` is `γ_i^{-1}`.
/// The word `ψ_1 ⋯ ψ_s` acts as `z ↦ ψ_1(⋯ψ_s(z))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(Vec<i32>);

impl Word {
    /// Free reduction of a letter sequence.
    pub fn reduce(letters: &[i32]) -> Word {
        let mut out: Vec<i32> = Vec::with_capacity(letters.len());
        for &x in letters {
            assert!(x != 0, "letters are non-zero");
            if out.last() == Some(&-x) {
                out.pop();
            } else {
                out.push(x);
            }
        }
        Word(out)
    }

    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn letter(x: i32) -> Word {
        Word::reduce(&[x])
    }

    pub fn letters(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|x| -x).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word::reduce(&v)
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.0.len() < 2 || self.0[0] != -self.0[self.0.len() - 1]
    }

    /// `"aB"` for `γ_1 γ_2^{-1}`; the empty word is `"e"`.
    pub fn label(&self) -> String {
        if self.0.is_empty() {
            return "e".into();
        }
        self.0
            .iter()
            .map(|&x| {
                let c = (b'a' + (x.unsigned_abs() - 1) as u8) as char;
                if x > 0 {
                    c
                } else {
                    c.to_ascii_uppercase()
                }
            })
            .collect()
    }

    pub fn parse(s: &str) -> Result<Word, SchottkyError> {
        if s == "e" {
            return Ok(Word::empty());
        }
        let letters = s
            .chars()
            .map(|c| match c {
                'a'..='z' => Ok(c as i32 - 'a' as i32 + 1),
                'A'..='Z' => Ok(-(c as i32 - 'A' as i32 + 1)),
                _ => Err(SchottkyError::BadWord(s.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Word::reduce(&letters))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// The alphabet `γ_1, γ_1^{-1}, γ_2, ...` in shortlex letter order.
pub fn alphabet(g: usize) -> Vec<i32> {
    (1..=g as i32).flat_map(|i| [i, -i]).collect()
}

/// All non-empty reduced words of length at most `n`, in shortlex order.
pub fn reduced_words(g: usize, n: usize) -> Vec<Word> {
    let letters = alphabet(g);
    let mut out = Vec::new();
    let mut level = vec![Word::empty()];
    for _ in 0..n {
        let mut next = Vec::new();
        for w in &level {
            for &x in &letters {
                if w.0.last() != Some(&-x) {
                    let mut v = w.0.clone();
                    v.push(x);
                    next.push(Word(v));
                }
            }
        }
        out.extend(next.iter().cloned());
        level = next;
    }
    out
}

/// Generators `γ_1..γ_g` and balls `B_1..B_{2g}` with `γ_i[B_i] = B_{i+g}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchottkyData {
    pub field: Field,
    pub generators: Vec<Moebius>,
    pub balls: Vec<Ball>,
}

impl SchottkyData {
    pub fn genus(&self) -> usize {
        self.generators.len()
    }

    pub fn to_json(&self) -> Value {
        let k = &self.field;
        json!({
            "field": serde_json::to_value(k.spec()).expect("spec serializes"),
            "generators": self.generators.iter().map(|g| g.to_json(k)).collect::<Vec<_>>(),
            "balls": self.balls.iter().map(|b| b.to_json(k)).collect::<Vec<_>>(),
        })
    }

    /// Parse `{"field":…, "generators":[…], "balls":[…]}`; `field` may be
    /// omitted when `default_field` is given.
    pub fn from_json(
        v: &Value,
        default_field: Option<&Field>,
    ) -> Result<SchottkyData, SchottkyError> {
        let field = match v.get("field") {
            Some(f) => {
                let spec: FieldSpec = serde_json::from_value(f.clone())
                    .map_err(|e| FieldError::InvalidSpec(e.to_string()))?;
                Field::new(spec)?
            }
            None => default_field
                .cloned()
                .ok_or_else(|| FieldError::InvalidSpec("missing field".into()))?,
        };
        let list = |key: &str| -> Result<&Vec<Value>, SchottkyError> {
            Ok(v.get(key)
                .and_then(Value::as_array)
                .ok_or_else(|| FieldError::Parse(format!("missing {key}")))?)
        };
        let generators = list("generators")?
            .iter()
            .map(|g| Moebius::from_json(&field, g))
            .collect::<Result<_, _>>()?;
        let balls = list("balls")?
            .iter()
            .map(|b| Ball::from_json(&field, b))
            .collect::<Result<_, _>>()?;
        Ok(SchottkyData {
            field,
            generators,
            balls,
        })
    }
}

/// A failed ping-pong hypothesis; indices are 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Shape { generators: usize, balls: usize },
    Overlap { i: usize, j: usize },
    NotNilpotent { i: usize, j: usize, distance: Val },
    WrongImage { i: usize },
    PoleOutside { i: usize },
}

impl Violation {
    pub fn to_json(&self) -> Value {
        match self {
            Violation::Shape { generators, balls } => {
                json!({"violation": "shape", "generators": generators, "balls": balls})
            }
            Violation::Overlap { i, j } => json!({"violation": "overlap", "i": i, "j": j}),
            Violation::NotNilpotent { i, j, distance } => {
                json!({"violation": "not-nilpotent", "i": i, "j": j, "distance": val_to_json(distance)})
            }
            Violation::WrongImage { i } => json!({"violation": "wrong-image", "i": i}),
            Violation::PoleOutside { i } => json!({"violation": "pole-outside", "i": i}),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Shape { generators, balls } => {
                write!(
                    f,
                    "{generators} generators need {} balls and g >= 2, got {balls}",
                    2 * generators
                )
            }
            Violation::Overlap { i, j } => write!(f, "balls {i} and {j} meet"),
            Violation::NotNilpotent { i, j, distance } => {
                write!(f, "inverse distance {distance} between balls {i} and {j} is not topologically nilpotent")
            }
            Violation::WrongImage { i } => {
                write!(f, "generator {i} does not map its ball onto its partner")
            }
            Violation::PoleOutside { i } => {
                write!(f, "pole of generator {i} lies outside its ball")
            }
        }
    }
}

/// Ping-pong data that passed [`verify_ping_pong`].
#[derive(Clone, Debug)]
pub struct Schottky {
    data: SchottkyData,
    inverses: Vec<Moebius>,
    rho: Val,
}

/// Check the four ping-pong hypotheses and record `ρ`, stored additively as
/// the smallest pairwise distance (the multiplicatively largest `ρ_{i,j}`).
pub fn verify_ping_pong(data: SchottkyData) -> Result<Schottky, Vec<Violation>> {
    let k = &data.field;
    let g = data.genus();
    if g < 2 || data.balls.len() != 2 * g {
        return Err(vec![Violation::Shape {
            generators: g,
            balls: data.balls.len(),
        }]);
    }
    let mut bad = Vec::new();
    let mut rho: Option<Val> = None;
    for i in 0..2 * g {
        for j in i + 1..2 * g {
            let (bi, bj) = (&data.balls[i], &data.balls[j]);
            if !bi.is_disjoint(k, bj) {
                bad.push(Violation::Overlap { i: i + 1, j: j + 1 });
                continue;
            }
            let d = distance(k, bi, bj);
            if !is_top_nilpotent(&d).unwrap_or(false) {
                bad.push(Violation::NotNilpotent {
                    i: i + 1,
                    j: j + 1,
                    distance: d,
                });
                continue;
            }
            rho = Some(rho.map_or(d.clone(), |r| Val::min(&r, &d)));
        }
    }
    for (i, gamma) in data.generators.iter().enumerate() {
        if gamma.act_on_tree(k, &data.balls[i]) != data.balls[i + g] {
            bad.push(Violation::WrongImage { i: i + 1 });
        }
        if !data.balls[i].contains_point(k, &gamma.pole(k)) {
            bad.push(Violation::PoleOutside { i: i + 1 });
        }
    }
    if !bad.is_empty() {
        return Err(bad);
    }
    let inverses = data.generators.iter().map(|m| m.inverse(k)).collect();
    Ok(Schottky {
        data,
        inverses,
        rho: rho.expect("g >= 2"),
    })
}

/// The finite quotient of the subtree spanned by `ω` and its generator
/// translates, with covering words on the edges.
#[derive(Clone, Debug)]
pub struct QuotientGraph {
    pub graph: WeightedGraph,
    /// Representative ball of each quotient vertex, in vertex order.
    pub representatives: Vec<Ball>,
    /// For an edge `u -- v`, the word `w` such that the lifted edge runs from
    /// the representative of `u` to `w` applied to the representative of `v`.
    pub edge_words: Vec<Word>,
    pub genus: usize,
    pub depth: u32,
    pub base: Ball,
    /// Vertex and edge counts of the subtree before gluing.
    pub tree_size: (usize, usize),
    pub stable: bool,
}

impl QuotientGraph {
    pub fn to_json(&self) -> Value {
        let g = &self.graph;
        json!({
            "vertices": g.vertices,
            "edges": g.edges.iter().zip(&self.edge_words).map(|(e, w)| {
                json!([g.vertices[e.u], g.vertices[e.v], val_to_json(&e.weight), w.label()])
            }).collect::<Vec<_>>(),
            "genus": self.genus,
            "depth": self.depth,
            "stable": self.stable,
        })
    }

    pub fn to_dot(&self) -> String {
        let g = &self.graph;
        let mut out = String::from("graph G {\n");
        for (i, v) in g.vertices.iter().enumerate() {
            out.push_str(&format!("  v{i} [label=\"{v}\"];\n"));
        }
        for (e, w) in g.edges.iter().zip(&self.edge_words) {
            out.push_str(&format!(
                "  v{} -- v{} [label=\"{} {}\"];\n",
                e.u,
                e.v,
                e.weight,
                w.label()
            ));
        }
        out.push_str("}\n");
        out
    }
}

/// Union-find over tree vertices, tracking for each vertex `x` a word `W`
/// with `x = W(root)`.
struct WordUnionFind {
    parent: Vec<usize>,
    word: Vec<Word>,
}

impl WordUnionFind {
    fn new(n: usize) -> Self {
        WordUnionFind {
            parent: (0..n).collect(),
            word: vec![Word::empty(); n],
        }
    }

    fn find(&self, mut x: usize) -> (usize, Word) {
        let mut w = Word::empty();
        while self.parent[x] != x {
            w = w.concat(&self.word[x]);
            x = self.parent[x];
        }
        (x, w)
    }

    /// Record `y = ψ(x)`; the smaller index stays the root.
    fn union(&mut self, x: usize, y: usize, psi: &Word) {
        let (rx, wx) = self.find(x);
        let (ry, wy) = self.find(y);
        if rx == ry {
            return;
        }
        // ry = wy^{-1} ψ wx (rx)
        let rel = wy.inverse().concat(psi).concat(&wx);
        if rx < ry {
            self.parent[ry] = rx;
            self.word[ry] = rel;
        } else {
            self.parent[rx] = ry;
            self.word[rx] = rel.inverse();
        }
    }
}

impl Schottky {
    pub fn data(&self) -> &SchottkyData {
        &self.data
    }

    pub fn field(&self) -> &Field {
        &self.data.field
    }

    pub fn genus(&self) -> usize {
        self.data.genus()
    }

    /// Additive `ρ`: the least pairwise distance between the balls.
    pub fn rho(&self) -> &Val {
        &self.rho
    }

    pub fn letter_matrix(&self, x: i32) -> &Moebius {
        let i = x.unsigned_abs() as usize - 1;
        if x > 0 {
            &self.data.generators[i]
        } else {
            &self.inverses[i]
        }
    }

    /// `B(γ_i) = B_{i+g}` and `B(γ_i^{-1}) = B_i`.
    pub fn letter_ball(&self, x: i32) -> &Ball {
        let i = x.unsigned_abs() as usize - 1;
        if x > 0 {
            &self.data.balls[i + self.genus()]
        } else {
            &self.data.balls[i]
        }
    }

    pub fn word_matrix(&self, w: &Word) -> Moebius {
        let k = self.field();
        w.letters().iter().fold(Moebius::identity(k), |acc, &x| {
            acc.compose(k, self.letter_matrix(x))
        })
    }

    /// Reduced words of length `1..=n` with their matrices, shortlex.
    pub fn words_with_matrices(&self, n: usize) -> Vec<(Word, Moebius)> {
        let k = self.field();
        let letters = alphabet(self.genus());
        let mut out = Vec::new();
        let mut level = vec![(Word::empty(), Moebius::identity(k))];
        for _ in 0..n {
            let mut next = Vec::new();
            for (w, m) in &level {
                for &x in &letters {
                    if w.0.last() != Some(&-x) {
                        let mut v = w.0.clone();
                        v.push(x);
                        next.push((Word(v), m.compose(k, self.letter_matrix(x))));
                    }
                }
            }
            out.extend(next.iter().cloned());
            level = next;
        }
        out
    }

    /// `B(w) = w'[B(ψ_s)]` for `w = w'ψ_s`.
    pub fn ball_of_word(&self, w: &Word) -> Result<Ball, SchottkyError> {
        let (&last, prefix) = w.letters().split_last().ok_or(SchottkyError::EmptyWord)?;
        let m = self.word_matrix(&Word(prefix.to_vec()));
        Ok(m.act_on_tree(self.field(), self.letter_ball(last)))
    }

    /// `z ∈ F` iff `ψ(z) ∈ B(ψ)` for every letter `ψ`.
    pub fn in_fundamental_domain(&self, z: &ProjPoint) -> bool {
        let k = self.field();
        alphabet(self.genus()).into_iter().all(|x| {
            self.letter_ball(x)
                .contains_point(k, &self.letter_matrix(x).apply(k, z))
        })
    }

    pub fn word_classification(
        &self,
        w: &Word,
        precision: &Val,
    ) -> Result<Classification, SchottkyError> {
        if w.is_empty() {
            return Err(SchottkyError::EmptyWord);
        }
        Ok(classify(self.field(), &self.word_matrix(w), precision)?)
    }

    /// Precision used for limit-set samples of depth `n`: beyond the radius of
    /// every `B(w)` with `ℓ(w) <= 2n`, the depth by which
    /// fixed points of distinct words of length `<= n` have separated.
    pub fn sample_precision(&self, n: u32) -> Val {
        let k = self.field();
        let ceil = |c: Coord| c.ceil().to_integer();
        let max_r = self
            .data
            .balls
            .iter()
            .map(|b| ceil(b.radius().lead()))
            .max()
            .unwrap();
        let g = self.genus();
        let mut max_d = 0;
        for i in 0..2 * g {
            for j in i + 1..2 * g {
                max_d = max_d.max(ceil(
                    distance(k, &self.data.balls[i], &self.data.balls[j]).lead(),
                ));
            }
        }
        let mut coords = vec![0; k.rank()];
        coords[0] = max_r.max(0) + 2 * n as i64 * max_d + 1;
        Val::from_ints(&coords)
    }

    /// The attracting fixed point of `w` truncated below `prec`. Writing
    /// `w = u c u^{-1}` with `c` cyclically reduced, the point lies in every
    /// `B(u c^m)`; the first of these balls with radius `>= prec` determines it.
    pub fn attracting_point(&self, w: &Word, prec: &Val) -> Result<Elem, SchottkyError> {
        let k = self.field();
        let x = w.letters();
        let n = x.len();
        if n == 0 {
            return Err(SchottkyError::EmptyWord);
        }
        let mut i = 0;
        while 2 * i + 1 < n && x[i] == -x[n - 1 - i] {
            i += 1;
        }
        let (u, c) = (&x[..i], &x[i..n - i]);
        let push = |ball: &Ball, letters: &[i32]| {
            letters.iter().rev().fold(ball.clone(), |b, &y| {
                self.letter_matrix(y).act_on_tree(k, &b)
            })
        };
        let mut inner = push(self.letter_ball(c[c.len() - 1]), &c[..c.len() - 1]);
        loop {
            let ball = push(&inner, u);
            if ball.radius() >= prec {
                return Ok(k.canonical_center(ball.center(), prec));
            }
            inner = push(&inner, c);
        }
    }

    /// Attracting fixed points of all reduced words of length `<= n`,
    /// truncated to [`Schottky::sample_precision`].
    pub fn limit_set_sample(&self, n: u32) -> Result<PointSet, SchottkyError> {
        self.limit_set_sample_at(n, &self.sample_precision(n))
    }

    /// Depth-`n` sample with points truncated below `prec`.
    pub fn limit_set_sample_at(&self, n: u32, prec: &Val) -> Result<PointSet, SchottkyError> {
        let prec = prec.clone();
        let pts = reduced_words(self.genus(), n as usize)
            .iter()
            .map(|w| self.attracting_point(w, &prec).map(ProjPoint::Fin))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PointSet::new(pts))
    }

    /// `t` of the fixed points of `γ_1` and the attracting point of `γ_2`.
    pub fn default_base(&self, n: u32) -> Result<Ball, SchottkyError> {
        let k = self.field();
        let prec = self.sample_precision(n);
        let c1 = classify(k, &self.data.generators[0], &prec)?;
        let c2 = classify(k, &self.data.generators[1], &prec)?;
        Ok(t_map(
            k,
            &c1.fixed[0].point,
            &c1.fixed[1].point,
            &c2.fixed[0].point,
        )?)
    }

    /// The quotient of `⋃_ψ [ω, ψ[ω]]`, refined by the t-values of the depth-`n`
    /// sample, under the identifications `v ~ w[v]` for words of length <= 2.
    pub fn quotient_at_depth(&self, base: &Ball, n: u32) -> Result<QuotientGraph, SchottkyError> {
        let k = self.field();
        let targets: Vec<Ball> = alphabet(self.genus())
            .into_iter()
            .map(|x| self.letter_matrix(x).act_on_tree(k, base))
            .collect();
        // Every vertex of the subtree has radius at most the largest radius
        // below; truncating points deeper than that keeps all direction counts.
        let deepest = targets
            .iter()
            .map(Ball::radius)
            .chain([base.radius()])
            .max()
            .unwrap();
        let mut coords = vec![0; k.rank()];
        coords[0] = deepest.lead().floor().to_integer() + 1;
        let sample = self.limit_set_sample_at(n, &Val::from_ints(&coords))?;
        let l = sample.points();
        let mut vertices: BTreeSet<Ball> = BTreeSet::new();
        let mut tree_edges: BTreeSet<(Ball, Ball)> = BTreeSet::new();
        vertices.insert(base.clone());
        for target in &targets {
            let mut chain = segment_vertices(k, base, target, l);
            if chain.first() != Some(base) {
                chain.insert(0, base.clone());
            }
            if chain.last() != Some(target) {
                chain.push(target.clone());
            }
            for pair in chain.windows(2) {
                let e = if pair[0] < pair[1] {
                    (pair[0].clone(), pair[1].clone())
                } else {
                    (pair[1].clone(), pair[0].clone())
                };
                tree_edges.insert(e);
            }
            vertices.extend(chain);
        }
        // Index vertices by distance from the base so roots are the closest.
        let mut order: Vec<(Val, Ball)> = vertices
            .into_iter()
            .map(|v| (distance(k, base, &v), v))
            .collect();
        order.sort();
        let balls: Vec<Ball> = order.into_iter().map(|(_, b)| b).collect();
        let index: BTreeMap<&Ball, usize> = balls.iter().enumerate().map(|(i, b)| (b, i)).collect();
        let edges: Vec<(usize, usize)> = tree_edges
            .iter()
            .map(|(a, b)| {
                let (i, j) = (index[a], index[b]);
                (i.min(j), i.max(j))
            })
            .collect();
        let edge_index: BTreeMap<(usize, usize), usize> =
            edges.iter().enumerate().map(|(i, e)| (*e, i)).collect();

        let glue: Vec<(Word, Moebius)> = self.words_with_matrices(2);
        let images: Vec<Vec<Option<usize>>> = balls
            .iter()
            .map(|b| {
                glue.iter()
                    .map(|(_, m)| index.get(&m.act_on_tree(k, b)).copied())
                    .collect()
            })
            .collect();
        let mut uf = WordUnionFind::new(balls.len());
        for (x, row) in images.iter().enumerate() {
            for ((w, _), y) in glue.iter().zip(row) {
                if let Some(y) = y {
                    uf.union(x, *y, w);
                }
            }
        }
        let mut edge_parent: Vec<usize> = (0..edges.len()).collect();
        fn root(p: &[usize], mut x: usize) -> usize {
            while p[x] != x {
                x = p[x];
            }
            x
        }
        for (e, &(a, b)) in edges.iter().enumerate() {
            for (ga, gb) in images[a].iter().zip(images[b].iter()) {
                if let (&Some(ia), &Some(ib)) = (ga, gb) {
                    if let Some(&f) = edge_index.get(&(ia.min(ib), ia.max(ib))) {
                        let (r1, r2) = (root(&edge_parent, e), root(&edge_parent, f));
                        edge_parent[r1.max(r2)] = r1.min(r2);
                    }
                }
            }
        }

        let mut graph = WeightedGraph::new();
        let mut representatives = Vec::new();
        let mut class_vertex: BTreeMap<usize, usize> = BTreeMap::new();
        for (x, b) in balls.iter().enumerate() {
            if uf.find(x).0 == x {
                class_vertex.insert(x, graph.add_vertex(b.label(k)));
                representatives.push(b.clone());
            }
        }
        let mut edge_words = Vec::new();
        for (e, &(a, b)) in edges.iter().enumerate() {
            if root(&edge_parent, e) != e {
                continue;
            }
            let (ra, wa) = uf.find(a);
            let (rb, wb) = uf.find(b);
            graph.add_edge(
                class_vertex[&ra],
                class_vertex[&rb],
                distance(k, &balls[a], &balls[b]),
            );
            edge_words.push(wa.inverse().concat(&wb));
        }
        let genus = graph.genus();
        Ok(QuotientGraph {
            graph,
            representatives,
            edge_words,
            genus,
            depth: n,
            base: base.clone(),
            tree_size: (balls.len(), edges.len()),
            stable: false,
        })
    }

    /// Quotient graphs at depths `n, n + 2, ...` until two consecutive ones
    /// have the same canonical form.
    pub fn quotient_graph(
        &self,
        base: Option<&Ball>,
        depth: u32,
        max_depth: u32,
    ) -> Result<QuotientGraph, SchottkyError> {
        let base = match base {
            Some(b) => b.clone(),
            None => self.default_base(depth.max(1))?,
        };
        let mut n = depth.max(1);
        let mut current = self.quotient_at_depth(&base, n)?;
        while n + 2 <= max_depth {
            let next = self.quotient_at_depth(&base, n + 2)?;
            if next.graph.canonical_form() == current.graph.canonical_form() {
                current.stable = true;
                return Ok(current);
            }
            current = next;
            n += 2;
        }
        Err(SchottkyError::NotStabilized(n))
    }
}

/// Documented examples of ping-pong data.
pub mod examples {
    use super::*;
    use crate::moebius::hyperbolic_from_balls;

    fn pair_up(k: &Field, balls: Vec<Ball>) -> SchottkyData {
        let g = balls.len() / 2;
        let generators = (0..g)
            .map(|i| hyperbolic_from_balls(k, &balls[i], &balls[i + g]).expect("valid pair"))
            .collect();
        SchottkyData {
            field: k.clone(),
            generators,
            balls,
        }
    }

    /// Over `Q_3`: balls of radius `|9|` around `0, 3, 1, 4`, so
    /// `γ_1 = [[1,0],[-80,81]]` fixes `0, 1` and `γ_2` is its conjugate by
    /// `z ↦ z + 3`, fixing `3, 4`.
    pub fn rank1() -> SchottkyData {
        let k = Field::padic(3);
        let r = Val::from_ints(&[2]);
        let balls = [0, 3, 1, 4]
            .iter()
            .map(|&c| Ball::new(&k, &k.int(c), r.clone()))
            .collect();
        pair_up(&k, balls)
    }

    /// The analogue over the rank-2 field with `t` in place of `3`: balls of
    /// radius `(2,0)` around `0, t, 1, 1 + t`.
    pub fn rank2() -> SchottkyData {
        let k = Field::rank2(3);
        let r = Val::from_ints(&[2, 0]);
        let t = k.t().unwrap();
        let centers = [k.zero(), t.clone(), k.one(), k.add(&k.one(), &t)];
        let balls = centers
            .iter()
            .map(|c| Ball::new(&k, c, r.clone()))
            .collect();
        pair_up(&k, balls)
    }

    /// Over `Q_5`: unit-distance centers `0, 1, 2, 3` with radius `|5|`, all
    /// pairwise joins at `B(0, 1)`.
    pub fn far() -> SchottkyData {
        let k = Field::padic(5);
        let r = Val::from_ints(&[1]);
        let balls = (0..4)
            .map(|c| Ball::new(&k, &k.int(c), r.clone()))
            .collect();
        pair_up(&k, balls)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction() {
        assert_eq!(Word::reduce(&[1, -1]), Word::empty());
        assert_eq!(Word::reduce(&[1, 2, -2, 1]), Word::reduce(&[1, 1]));
        let w = Word::reduce(&[1, 2, -1, -2, 2]);
        assert!(w.concat(&w.inverse()).is_empty());
        assert_eq!(Word::parse("aB").unwrap(), Word::reduce(&[1, -2]));
        assert_eq!(Word::parse("aB").unwrap().label(), "aB");
        assert_eq!(reduced_words(2, 3).len(), 4 + 12 + 36);
        assert_eq!(
            reduced_words(2, 1)
                .iter()
                .map(Word::label)
                .collect::<Vec<_>>(),
            ["a", "A", "b", "B"]
        );
    }

    #[test]
    fn rank1_example_verifies() {
        let data = examples::rank1();
        let k = data.field.clone();
        assert_eq!(
            data.generators[0],
            Moebius::from_ints(&k, 1, 0, -80, 81).unwrap()
        );
        let s = verify_ping_pong(data).unwrap();
        assert_eq!(s.rho(), &Val::from_ints(&[2]));
        let g2 = s.data().generators[1].clone();
        for p in [3, 4] {
            assert_eq!(g2.apply_elem(&k, &k.int(p)), ProjPoint::Fin(k.int(p)));
        }
    }

    #[test]
    fn inflated_ball_is_reported() {
        let mut data = examples::rank1();
        let k = data.field.clone();
        data.balls[0] = Ball::new(&k, &k.zero(), Val::from_ints(&[0]));
        let err = verify_ping_pong(data).unwrap_err();
        assert!(err.contains(&Violation::Overlap { i: 1, j: 2 }));
    }

    #[test]
    fn single_letter_balls() {
        let s = verify_ping_pong(examples::rank1()).unwrap();
        for x in alphabet(2) {
            assert_eq!(&s.ball_of_word(&Word::letter(x)).unwrap(), s.letter_ball(x));
        }
        assert_eq!(
            s.ball_of_word(&Word::empty()),
            Err(SchottkyError::EmptyWord)
        );
    }

    #[test]
    fn infinity_in_fundamental_domain() {
        let s = verify_ping_pong(examples::rank1()).unwrap();
        assert!(s.in_fundamental_domain(&ProjPoint::Inf));
        let k = s.field();
        assert!(!s.in_fundamental_domain(&ProjPoint::Fin(k.int(27))));
    }

    #[test]
    fn depth_one_sample() {
        let s = verify_ping_pong(examples::rank1()).unwrap();
        let l = s.limit_set_sample(1).unwrap();
        let k = s.field();
        let expected = PointSet::new(
            (0..5)
                .filter(|&c| c != 2)
                .map(|c| ProjPoint::Fin(k.int(c)))
                .collect(),
        );
        assert_eq!(l, expected);
    }

    #[test]
    fn nested_balls_agree_with_hensel() {
        use crate::moebius::attracting_fixed_point;
        for data in [examples::rank1(), examples::rank2()] {
            let s = verify_ping_pong(data).unwrap();
            let k = s.field();
            let prec = s.sample_precision(2);
            for (w, m) in s.words_with_matrices(3) {
                let p = attracting_fixed_point(k, &m, &prec).unwrap();
                let x = p.point.finite().unwrap();
                assert_eq!(
                    s.attracting_point(&w, &prec).unwrap(),
                    k.canonical_center(x, &prec),
                    "{}",
                    w.label()
                );
            }
        }
    }
}
