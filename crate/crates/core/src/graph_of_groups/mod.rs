//! Finite graphs of `ℤⁿ` groups with finite-index edge monomorphisms, their
//! fundamental groups, and exact normal forms.
//!
//! Orientation convention: an edge `e` from `i(e)` to `t(e)` contributes the
//! relation `t_e · M⁻(g) · t_e⁻¹ = M⁺(g)` for `g ∈ ℤⁿ`. For `BS(1,2)` this is
//! `t a t⁻¹ = a²`.

mod ball;
mod graph;
mod json;
pub mod lattice;
mod normal_form;

pub use ball::{enumerate_ball, BallElement, DEFAULT_MAX_ELEMENTS};
pub use graph::{Edge, Generator, GraphOfGroups, Letter, Vertex};
pub use json::{GraphSpec, EdgeSpec, VertexSpec, SyllableSpec, WordSpec};
pub use lattice::{IntMatrix, Lattice, ZVec};
pub use normal_form::{NormalForm, Syllable};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("singular edge monomorphism {0}")]
    SingularMonomorphism(String),
    #[error("graph is not connected: vertex {0} unreachable from the base")]
    Disconnected(String),
    #[error("tree flags do not form a maximal tree: {0}")]
    BadSpanningTree(String),
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("ball enumeration stopped after {count} elements (limit {limit})")]
    BallTooLarge { count: usize, limit: usize },
}
