use std::collections::HashMap;

use serde::Serialize;

use crate::graph_of_groups::{GraphOfGroups, NormalForm};

/// A vertex `g·G_v` of the Bass–Serre tree, stored as the reduced path from
/// the base vertex with zero tail.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeVertex {
    rep: NormalForm,
}

/// A tree edge, identified with its endpoint farther from the base vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeEdge {
    child: TreeVertex,
}

impl TreeVertex {
    pub fn base(g: &GraphOfGroups) -> Self {
        Self { rep: g.identity() }
    }

    /// The vertex `g·G_v` where `v` is the end vertex of `path`.
    pub fn from_path(path: &NormalForm) -> Self {
        Self {
            rep: path.coset_rep(),
        }
    }

    pub fn rep(&self) -> &NormalForm {
        &self.rep
    }

    /// Vertex of the quotient graph this vertex maps to.
    pub fn vertex_type(&self, g: &GraphOfGroups) -> usize {
        g.end_vertex(&self.rep)
    }

    pub fn depth(&self) -> usize {
        self.rep.syllable_length()
    }

    pub fn parent(&self) -> Option<TreeVertex> {
        let k = self.depth();
        (k > 0).then(|| TreeVertex {
            rep: self.rep.prefix(k - 1),
        })
    }

    /// Label path for the metric tree model: one label per syllable, unique
    /// among the children of each vertex.
    pub fn labels(&self, g: &GraphOfGroups) -> Vec<u32> {
        let offsets = letter_offsets(g);
        self.rep
            .syllables()
            .iter()
            .map(|s| {
                let off = offsets[&(s.letter.edge, s.letter.inverse)];
                (off + g.absorbed(s.letter).transversal_index(&s.residue)) as u32
            })
            .collect()
    }
}

impl TreeEdge {
    pub fn child(&self) -> &TreeVertex {
        &self.child
    }

    pub fn parent(&self) -> TreeVertex {
        self.child.parent().expect("edge child has positive depth")
    }

    /// Edge of the quotient graph this edge maps to.
    pub fn edge_type(&self) -> usize {
        self.child.rep.syllables().last().expect("positive depth").letter.edge
    }
}

fn letter_offsets(g: &GraphOfGroups) -> HashMap<(usize, bool), usize> {
    let mut out = HashMap::new();
    let mut acc = 0usize;
    for v in 0..g.vertices().len() {
        for l in g.letters_from(v) {
            out.insert((l.edge, l.inverse), acc);
            acc += g.letter_index(l);
        }
    }
    out
}

/// Neighbours of a tree vertex: one per letter leaving its type and per
/// residue of the lattice that letter absorbs.
pub fn tree_neighbors(g: &GraphOfGroups, v: &TreeVertex) -> Vec<(TreeEdge, TreeVertex)> {
    let ty = v.vertex_type(g);
    let mut out = Vec::new();
    for l in g.letters_from(ty) {
        for r in g.absorbed(l).transversal() {
            let w = TreeVertex::from_path(&extend(g, &v.rep, &r, l));
            let edge = if w.depth() > v.depth() {
                TreeEdge { child: w.clone() }
            } else {
                TreeEdge { child: v.clone() }
            };
            out.push((edge, w));
        }
    }
    out
}

fn extend(
    g: &GraphOfGroups,
    path: &NormalForm,
    r: &[num_bigint::BigInt],
    l: crate::graph_of_groups::Letter,
) -> NormalForm {
    let mut red = g.reducer_from(path);
    red.add_tail(r);
    red.push_letter(l);
    red.finish()
}

/// `w · v` for a group element `w` (a loop at the base vertex).
pub fn tree_act(g: &GraphOfGroups, w: &NormalForm, v: &TreeVertex) -> TreeVertex {
    TreeVertex::from_path(&g.multiply(w, &v.rep))
}

pub fn tree_distance(u: &TreeVertex, v: &TreeVertex) -> usize {
    let c = u.rep.common_prefix(&v.rep);
    u.depth() + v.depth() - 2 * c
}

#[derive(Clone, Debug, Serialize)]
pub struct TreeBallVertex {
    pub rep: String,
    #[serde(rename = "type")]
    pub vertex_type: String,
    pub depth: usize,
    pub degree: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct TreeBallEdge {
    pub from: usize,
    pub to: usize,
    #[serde(rename = "type")]
    pub edge_type: String,
}

/// Breadth-first ball around the base vertex built from `tree_neighbors`
/// alone, with the checks that it is a tree of the predicted degrees.
#[derive(Clone, Debug, Serialize)]
pub struct TreeBall {
    pub radius: usize,
    pub vertices: Vec<TreeBallVertex>,
    pub edges: Vec<TreeBallEdge>,
    /// every vertex is reached exactly once and every non-parent neighbour is new
    pub cycle_free: bool,
    /// each degree equals the transversal count of its type
    pub degrees_match: bool,
}

pub fn tree_ball(g: &GraphOfGroups, radius: usize) -> TreeBall {
    let mut index: HashMap<TreeVertex, usize> = HashMap::new();
    let base = TreeVertex::base(g);
    index.insert(base.clone(), 0);
    let mut order = vec![base];
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    let mut cycle_free = true;
    let mut degrees_match = true;
    let mut head = 0;
    while head < order.len() {
        let v = order[head].clone();
        let nbrs = tree_neighbors(g, &v);
        let expected = g.tree_degree(v.vertex_type(g));
        degrees_match &= num_bigint::BigInt::from(nbrs.len()) == expected;
        let parent = v.parent();
        let mut parent_hits = 0;
        for (edge, w) in &nbrs {
            if Some(w) == parent.as_ref() {
                parent_hits += 1;
                continue;
            }
            if w.depth() != v.depth() + 1 || w.parent().as_ref() != Some(&v) {
                cycle_free = false;
            }
            if v.depth() < radius {
                if index.contains_key(w) {
                    cycle_free = false;
                    continue;
                }
                index.insert(w.clone(), order.len());
                edges.push(TreeBallEdge {
                    from: head,
                    to: order.len(),
                    edge_type: g.edges()[edge.edge_type()].id.clone(),
                });
                order.push(w.clone());
            }
        }
        if parent.is_some() && parent_hits != 1 {
            cycle_free = false;
        }
        let ty = v.vertex_type(g);
        vertices.push(TreeBallVertex {
            rep: v.rep.to_string(),
            vertex_type: g.vertices()[ty].id.clone(),
            depth: v.depth(),
            degree: nbrs.len(),
        });
        head += 1;
    }
    TreeBall {
        radius,
        vertices,
        edges,
        cycle_free,
        degrees_match,
    }
}
