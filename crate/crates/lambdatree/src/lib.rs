//! Exact computations on the Λ-tree of closed balls of a valued field.
//!
//! The crate works over concrete fields with lex-ordered value groups
//! (`p`-adic rationals, `t`-adic rational functions, a rank-2 composite
//! valuation and ramified quadratic extensions). On top of the field layer it
//! provides the tree of balls, the action of `PGL_2`, finite subtrees spanned
//! by point sets, Schottky groups with their quotient graphs, and the reverse
//! construction of a Schottky group from a weighted graph.

pub mod ball_tree;
pub mod finite_tree;
pub mod graph;
pub mod graph_synthesis;
pub mod io;
pub mod moebius;
pub mod schottky;
pub mod valued_field;

pub use ball_tree::{Ball, ProjPoint, Region};
pub use moebius::{classify, Classification, Moebius, MoebiusError, MoebiusKind};
pub use valued_field::{Elem, Field, FieldError, FieldSpec, Val};
