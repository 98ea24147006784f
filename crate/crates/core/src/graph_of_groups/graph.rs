use std::collections::{BTreeMap, VecDeque};

use num_bigint::BigInt;
use num_traits::Zero;

use super::lattice::{unit_vec, zero_vec, IntMatrix, Lattice, ZVec};
use super::normal_form::NormalForm;
use super::GroupError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub id: String,
    pub rank: usize,
}

#[derive(Clone, Debug)]
pub struct Edge {
    pub id: String,
    /// `i(e)`
    pub from: usize,
    /// `t(e)`
    pub to: usize,
    pub minus: Lattice,
    pub plus: Lattice,
    pub tree: bool,
}

/// An oriented traversal of an edge. `e⁺` runs from `t(e)` to `i(e)` and
/// `e⁻` runs back, so `e⁺ · M⁻(g) · e⁻ = M⁺(g)` is a loop at `t(e)`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub edge: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(edge: usize, inverse: bool) -> Self {
        Self { edge, inverse }
    }

    pub fn inv(self) -> Self {
        Self {
            edge: self.edge,
            inverse: !self.inverse,
        }
    }

    pub fn sign(self) -> i8 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

/// A named group generator together with its path word.
#[derive(Clone, Debug)]
pub struct Generator {
    pub name: String,
    pub word: NormalForm,
}

#[derive(Clone, Debug)]
pub struct GraphOfGroups {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    base: usize,
    rank: usize,
    /// Path in the maximal tree from the base to each vertex.
    tree_paths: Vec<Vec<Letter>>,
}

impl GraphOfGroups {
    pub fn new(
        vertices: Vec<Vertex>,
        edges: Vec<Edge>,
        base: usize,
    ) -> Result<Self, GroupError> {
        if vertices.is_empty() {
            return Err(GroupError::InvalidInput("graph has no vertices".into()));
        }
        let rank = vertices[0].rank;
        if rank == 0 {
            return Err(GroupError::InvalidInput("rank must be positive".into()));
        }
        if let Some(v) = vertices.iter().find(|v| v.rank != rank) {
            return Err(GroupError::InvalidInput(format!(
                "vertex {} has rank {}, expected {rank}",
                v.id, v.rank
            )));
        }
        if base >= vertices.len() {
            return Err(GroupError::InvalidInput("base vertex out of range".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for v in &vertices {
            if !seen.insert(&v.id) {
                return Err(GroupError::InvalidInput(format!("duplicate vertex id {}", v.id)));
            }
        }
        let mut seen = std::collections::HashSet::new();
        for e in &edges {
            if !seen.insert(&e.id) {
                return Err(GroupError::InvalidInput(format!("duplicate edge id {}", e.id)));
            }
            if e.from >= vertices.len() || e.to >= vertices.len() {
                return Err(GroupError::InvalidInput(format!("edge {} has bad endpoints", e.id)));
            }
            if e.minus.matrix().dim() != rank || e.plus.matrix().dim() != rank {
                return Err(GroupError::InvalidInput(format!(
                    "edge {} matrices must be {rank}x{rank}",
                    e.id
                )));
            }
        }

        // connectivity over all edges
        let nv = vertices.len();
        let mut reach = vec![false; nv];
        reach[base] = true;
        let mut queue = VecDeque::from([base]);
        while let Some(u) = queue.pop_front() {
            for e in &edges {
                for (a, b) in [(e.from, e.to), (e.to, e.from)] {
                    if a == u && !reach[b] {
                        reach[b] = true;
                        queue.push_back(b);
                    }
                }
            }
        }
        if let Some(i) = reach.iter().position(|r| !r) {
            return Err(GroupError::Disconnected(vertices[i].id.clone()));
        }

        // the tree edges must form a spanning tree
        let tree_count = edges.iter().filter(|e| e.tree).count();
        if tree_count != nv - 1 {
            return Err(GroupError::BadSpanningTree(format!(
                "{tree_count} tree edges for {nv} vertices"
            )));
        }
        let mut tree_paths: Vec<Option<Vec<Letter>>> = vec![None; nv];
        tree_paths[base] = Some(Vec::new());
        let mut queue = VecDeque::from([base]);
        while let Some(u) = queue.pop_front() {
            let pu = tree_paths[u].clone().expect("visited");
            for (idx, e) in edges.iter().enumerate().filter(|(_, e)| e.tree) {
                // e⁻ runs i(e) → t(e), e⁺ runs t(e) → i(e)
                let step = if e.from == u {
                    Some((e.to, Letter::new(idx, true)))
                } else if e.to == u {
                    Some((e.from, Letter::new(idx, false)))
                } else {
                    None
                };
                if let Some((w, letter)) = step {
                    if tree_paths[w].is_none() {
                        let mut p = pu.clone();
                        p.push(letter);
                        tree_paths[w] = Some(p);
                        queue.push_back(w);
                    }
                }
            }
        }
        let tree_paths: Vec<Vec<Letter>> = tree_paths
            .into_iter()
            .enumerate()
            .map(|(i, p)| {
                p.ok_or_else(|| {
                    GroupError::BadSpanningTree(format!("vertex {} not reached", vertices[i].id))
                })
            })
            .collect::<Result<_, _>>()?;

        Ok(Self {
            vertices,
            edges,
            base,
            rank,
            tree_paths,
        })
    }

    /// One vertex of rank `n` and no edges, the group `ℤⁿ`.
    pub fn free_abelian(n: usize) -> Self {
        Self::new(vec![Vertex { id: "v".into(), rank: n }], vec![], 0).expect("valid")
    }

    /// `BS(m, n) = ⟨a, t | t aᵐ t⁻¹ = aⁿ⟩`.
    pub fn baumslag_solitar(m: i64, n: i64) -> Result<Self, GroupError> {
        Self::loop_graph(
            IntMatrix::from_rows(&[vec![m]])?,
            IntMatrix::from_rows(&[vec![n]])?,
        )
    }

    /// One vertex with a single loop edge `t` carrying the given matrices.
    pub fn loop_graph(minus: IntMatrix, plus: IntMatrix) -> Result<Self, GroupError> {
        let rank = minus.dim();
        let edge = Edge {
            id: "t".into(),
            from: 0,
            to: 0,
            minus: Lattice::new(minus)?,
            plus: Lattice::new(plus)?,
            tree: false,
        };
        Self::new(vec![Vertex { id: "v".into(), rank }], vec![edge], 0)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.id == id)
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.id == id)
    }

    pub fn tree_path(&self, v: usize) -> &[Letter] {
        &self.tree_paths[v]
    }

    /// Vertex a letter starts from.
    pub fn source(&self, l: Letter) -> usize {
        let e = &self.edges[l.edge];
        if l.inverse {
            e.from
        } else {
            e.to
        }
    }

    /// Vertex a letter ends at.
    pub fn target(&self, l: Letter) -> usize {
        self.source(l.inv())
    }

    /// Lattice in the source vertex group that a letter absorbs on its left.
    pub fn absorbed(&self, l: Letter) -> &Lattice {
        let e = &self.edges[l.edge];
        if l.inverse {
            &e.minus
        } else {
            &e.plus
        }
    }

    /// Matrix carrying the absorbed quotient through the letter.
    pub fn emitted(&self, l: Letter) -> &IntMatrix {
        let e = &self.edges[l.edge];
        if l.inverse {
            e.plus.matrix()
        } else {
            e.minus.matrix()
        }
    }

    /// Letters leaving a vertex in deterministic order.
    pub fn letters_from(&self, v: usize) -> Vec<Letter> {
        let mut out = Vec::new();
        for (idx, e) in self.edges.iter().enumerate() {
            if e.to == v {
                out.push(Letter::new(idx, false));
            }
            if e.from == v {
                out.push(Letter::new(idx, true));
            }
        }
        out
    }

    /// Degree of every Bass–Serre tree vertex of type `v`.
    pub fn tree_degree(&self, v: usize) -> BigInt {
        self.letters_from(v)
            .into_iter()
            .map(|l| self.absorbed(l).index().clone())
            .sum()
    }

    pub fn identity(&self) -> NormalForm {
        NormalForm::identity(self.rank)
    }

    /// The loop `γ_v · z · γ_v⁻¹` for `z` in the vertex group at `v`.
    pub fn vertex_element(&self, v: usize, z: ZVec) -> NormalForm {
        let gamma = &self.tree_paths[v];
        let mut r = self.reducer_at_base();
        for &l in gamma {
            r.push_letter(l);
        }
        r.add_tail(&z);
        for &l in gamma.iter().rev() {
            r.push_letter(l.inv());
        }
        r.finish()
    }

    /// The stable letter `t_e = γ_{t(e)} · e⁺ · γ_{i(e)}⁻¹` of an edge.
    pub fn edge_element(&self, edge: usize) -> NormalForm {
        let e = &self.edges[edge];
        let mut r = self.reducer_at_base();
        for &l in &self.tree_paths[e.to] {
            r.push_letter(l);
        }
        r.push_letter(Letter::new(edge, false));
        for &l in self.tree_paths[e.from].iter().rev() {
            r.push_letter(l.inv());
        }
        r.finish()
    }

    /// Standard generating set: `a_{v,i}^{±1}` for every vertex and
    /// coordinate, `t_e^{±1}` for every edge outside the maximal tree.
    pub fn generators(&self) -> Vec<Generator> {
        let single = self.vertices.len() == 1;
        let mut out = Vec::new();
        for (v, vert) in self.vertices.iter().enumerate() {
            for i in 0..self.rank {
                let name = match (single, self.rank) {
                    (true, 1) => "a".to_string(),
                    (true, _) => format!("a{}", i + 1),
                    (false, 1) => vert.id.clone(),
                    (false, _) => format!("{}.{}", vert.id, i + 1),
                };
                for sign in [1i64, -1] {
                    let word = self.vertex_element(v, unit_vec(self.rank, i, sign));
                    let name = if sign == 1 { name.clone() } else { format!("{name}^-1") };
                    out.push(Generator { name, word });
                }
            }
        }
        for (idx, e) in self.edges.iter().enumerate().filter(|(_, e)| !e.tree) {
            let word = self.edge_element(idx);
            let inv = self.invert(&word);
            out.push(Generator {
                name: e.id.clone(),
                word,
            });
            out.push(Generator {
                name: format!("{}^-1", e.id),
                word: inv,
            });
        }
        out
    }

    /// Parses a word such as `"t a^-1 t^2"` over the generator names, with
    /// `t` accepted for the only non-tree edge and `a` for a rank-one vertex
    /// group of a single-vertex graph.
    pub fn parse_word(&self, text: &str) -> Result<NormalForm, GroupError> {
        let mut table: BTreeMap<String, NormalForm> = BTreeMap::new();
        for g in self.generators() {
            if !g.name.ends_with("^-1") {
                table.insert(g.name, g.word);
            }
        }
        let stable: Vec<usize> = (0..self.edges.len()).filter(|&i| !self.edges[i].tree).collect();
        if stable.len() == 1 && !table.contains_key("t") {
            table.insert("t".into(), self.edge_element(stable[0]));
        }
        let mut acc = self.identity();
        for tok in text
            .split(|c: char| c.is_whitespace() || c == '*' || c == '·')
            .filter(|s| !s.is_empty())
        {
            if tok == "1" {
                continue;
            }
            let (name, power) = match tok.split_once('^') {
                Some((n, p)) => (
                    n,
                    p.trim_matches(|c| c == '(' || c == ')')
                        .parse::<i64>()
                        .map_err(|_| GroupError::UnknownGenerator(tok.to_string()))?,
                ),
                None => (tok, 1),
            };
            let base = table
                .get(name)
                .ok_or_else(|| GroupError::UnknownGenerator(name.to_string()))?;
            let g = if power < 0 { self.invert(base) } else { base.clone() };
            for _ in 0..power.unsigned_abs() {
                acc = self.multiply(&acc, &g);
            }
        }
        Ok(acc)
    }

    pub(crate) fn reducer_at_base(&self) -> Reducer<'_> {
        Reducer {
            g: self,
            syllables: Vec::new(),
            tail: zero_vec(self.rank),
        }
    }

    pub(crate) fn reducer_from(&self, u: &NormalForm) -> Reducer<'_> {
        Reducer {
            g: self,
            syllables: u.syllables().to_vec(),
            tail: u.tail().to_vec(),
        }
    }

    /// Vertex at the end of a path word.
    pub fn end_vertex(&self, u: &NormalForm) -> usize {
        u.syllables()
            .last()
            .map(|s| self.target(s.letter))
            .unwrap_or(self.base)
    }

    /// The loop `u · z · γ_v⁻¹` closing a path `u` that ends at `v`, after
    /// adding `z ∈ G_v`; it maps the tree vertex `γ_v G_v` to `u G_v`.
    pub fn close_path(&self, u: &NormalForm, z: &[BigInt]) -> NormalForm {
        let v = self.end_vertex(u);
        let mut r = self.reducer_from(u);
        r.add_tail(z);
        for &l in self.tree_paths[v].iter().rev() {
            r.push_letter(l.inv());
        }
        r.finish()
    }

    pub fn multiply(&self, u: &NormalForm, w: &NormalForm) -> NormalForm {
        let mut r = self.reducer_from(u);
        r.append(w);
        r.finish()
    }

    pub fn invert(&self, u: &NormalForm) -> NormalForm {
        let mut r = Reducer {
            g: self,
            syllables: Vec::new(),
            tail: u.tail().iter().map(|x| -x).collect(),
        };
        for s in u.syllables().iter().rev() {
            r.push_letter(s.letter.inv());
            let neg: ZVec = s.residue.iter().map(|x| -x).collect();
            r.add_tail(&neg);
        }
        r.finish()
    }

    pub fn power(&self, u: &NormalForm, k: i64) -> NormalForm {
        let base = if k < 0 { self.invert(u) } else { u.clone() };
        let mut acc = self.identity();
        for _ in 0..k.unsigned_abs() {
            acc = self.multiply(&acc, &base);
        }
        acc
    }

    /// `|det M|` of the absorbed lattice, as a machine integer.
    pub fn letter_index(&self, l: Letter) -> usize {
        use num_traits::ToPrimitive;
        self.absorbed(l).index().to_usize().expect("index fits in usize")
    }
}

/// Left-to-right reducer producing the unique normal form
/// `r₀ ℓ₁ r₁ ℓ₂ ⋯ ℓ_k z` where each `r_{j-1}` is the canonical residue of
/// the lattice absorbed by `ℓ_j` and `z` is an arbitrary tail.
pub(crate) struct Reducer<'g> {
    g: &'g GraphOfGroups,
    syllables: Vec<super::normal_form::Syllable>,
    tail: ZVec,
}

impl<'g> Reducer<'g> {
    pub fn add_tail(&mut self, z: &[BigInt]) {
        for (t, x) in self.tail.iter_mut().zip(z) {
            *t += x;
        }
    }

    pub fn push_letter(&mut self, l: Letter) {
        debug_assert_eq!(
            self.syllables.last().map(|s| self.g.target(s.letter)).unwrap_or(self.g.base),
            self.g.source(l),
            "letter does not continue the path"
        );
        let (r, q) = self.g.absorbed(l).residue(&self.tail);
        let carry = self.g.emitted(l).mul_vec(&q);
        let pinch = r.iter().all(Zero::is_zero)
            && self.syllables.last().map(|s| s.letter) == Some(l.inv());
        if pinch {
            let prev = self.syllables.pop().expect("checked");
            self.tail = prev.residue;
            self.add_tail(&carry);
        } else {
            self.syllables.push(super::normal_form::Syllable { residue: r, letter: l });
            self.tail = carry;
        }
    }

    pub fn append(&mut self, w: &NormalForm) {
        for s in w.syllables() {
            self.add_tail(&s.residue);
            self.push_letter(s.letter);
        }
        self.add_tail(w.tail());
    }

    pub fn finish(self) -> NormalForm {
        NormalForm::from_parts(self.syllables, self.tail)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bs12_relator_collapses() {
        let g = GraphOfGroups::baumslag_solitar(1, 2).unwrap();
        let w = g.parse_word("t a t^-1").unwrap();
        assert_eq!(w, g.parse_word("a^2").unwrap());
        assert_eq!(w.syllable_length(), 0);
        let w = g.parse_word("t^2 a t^-1").unwrap();
        assert_eq!(w.syllable_length(), 1);
    }

    #[test]
    fn bs23_relator() {
        let g = GraphOfGroups::baumslag_solitar(2, 3).unwrap();
        assert_eq!(g.parse_word("t a^2 t^-1").unwrap(), g.parse_word("a^3").unwrap());
        assert_eq!(g.parse_word("t a t^-1").unwrap().syllable_length(), 2);
    }

    #[test]
    fn inverse_cancels() {
        let g = GraphOfGroups::baumslag_solitar(2, 3).unwrap();
        let u = g.parse_word("a t a^-1 t^-1 t^-1 a^5 t").unwrap();
        assert!(g.multiply(&u, &g.invert(&u)).is_identity());
        assert!(g.multiply(&g.invert(&u), &u).is_identity());
    }

    #[test]
    fn degrees() {
        let g = GraphOfGroups::baumslag_solitar(1, 2).unwrap();
        assert_eq!(g.tree_degree(0), BigInt::from(3));
        let g = GraphOfGroups::baumslag_solitar(2, 3).unwrap();
        assert_eq!(g.tree_degree(0), BigInt::from(5));
    }

    #[test]
    fn spanning_tree_validated() {
        let lat = || Lattice::new(IntMatrix::identity(1)).unwrap();
        let v = |id: &str| Vertex { id: id.into(), rank: 1 };
        let edge = |id: &str, tree| Edge {
            id: id.into(),
            from: 0,
            to: 1,
            minus: lat(),
            plus: lat(),
            tree,
        };
        assert!(GraphOfGroups::new(vec![v("x"), v("y")], vec![edge("e", false)], 0).is_err());
        assert!(GraphOfGroups::new(vec![v("x"), v("y")], vec![edge("e", true)], 0).is_ok());
        assert!(matches!(
            GraphOfGroups::new(vec![v("x"), v("y")], vec![], 0),
            Err(GroupError::Disconnected(_))
        ));
    }
}
