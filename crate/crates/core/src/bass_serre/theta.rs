use num_rational::BigRational;
use serde::Serialize;

use super::affine::{int_vec_to_rat, AffineMap};
use crate::graph_of_groups::lattice::unit_vec;
use crate::graph_of_groups::{GraphOfGroups, Letter, NormalForm};

/// Lifts of the edge inclusions to the universal cover `ℝⁿ` and their
/// comparison map `f_e = M⁺·(M⁻)⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftMaps {
    pub minus: AffineMap,
    pub plus: AffineMap,
    pub f: AffineMap,
}

pub fn lift_maps(g: &GraphOfGroups, edge: usize) -> LiftMaps {
    let e = &g.edges()[edge];
    let minus = AffineMap::from_int_matrix(e.minus.matrix());
    let plus = AffineMap::from_int_matrix(e.plus.matrix());
    let f = plus.compose(&minus.inverse().expect("edge matrices are nonsingular"));
    LiftMaps { minus, plus, f }
}

/// The fiber representation `Θ` of the fundamental group on `ℝⁿ`.
///
/// `h_v` is the composite of the `f_e^{±1}` along the maximal-tree path from
/// the base, normalised by `h_{v₀} = id`, so that `h_{t(e)} = f_e ∘ h_{i(e)}`
/// on tree edges. Vertex elements act by `h_v⁻¹ ∘ (x ↦ x + z) ∘ h_v` and the
/// letter `e⁺` by `h_{t(e)}⁻¹ ∘ f_e ∘ h_{i(e)}`.
#[derive(Clone, Debug)]
pub struct FiberAction<'g> {
    g: &'g GraphOfGroups,
    h: Vec<AffineMap>,
    h_inv: Vec<AffineMap>,
    /// Per edge, the maps of `e⁺` and `e⁻`.
    letters: Vec<[AffineMap; 2]>,
}

impl<'g> FiberAction<'g> {
    pub fn new(g: &'g GraphOfGroups) -> Self {
        let n = g.rank();
        let lifts: Vec<LiftMaps> = (0..g.edges().len()).map(|e| lift_maps(g, e)).collect();
        let h: Vec<AffineMap> = (0..g.vertices().len())
            .map(|v| {
                let mut h = AffineMap::identity(n);
                for &l in g.tree_path(v) {
                    let f = &lifts[l.edge].f;
                    h = if l.inverse {
                        f.compose(&h)
                    } else {
                        f.inverse().expect("nonsingular").compose(&h)
                    };
                }
                h
            })
            .collect();
        let h_inv: Vec<AffineMap> = h.iter().map(|m| m.inverse().expect("nonsingular")).collect();
        let letters = g
            .edges()
            .iter()
            .enumerate()
            .map(|(idx, e)| {
                let fwd = h_inv[e.to].compose(&lifts[idx].f).compose(&h[e.from]);
                let back = fwd.inverse().expect("nonsingular");
                [fwd, back]
            })
            .collect();
        Self { g, h, h_inv, letters }
    }

    pub fn graph(&self) -> &'g GraphOfGroups {
        self.g
    }

    pub fn h(&self, v: usize) -> &AffineMap {
        &self.h[v]
    }

    pub fn letter(&self, l: Letter) -> &AffineMap {
        &self.letters[l.edge][usize::from(l.inverse)]
    }

    /// Translation vector of a vertex-group element `z ∈ G_v`.
    pub fn vertex_shift(&self, v: usize, z: &[num_bigint::BigInt]) -> Vec<BigRational> {
        self.h_inv[v].mat_vec(&int_vec_to_rat(z))
    }

    pub fn vertex_translation(&self, v: usize, z: &[num_bigint::BigInt]) -> AffineMap {
        AffineMap::translation(self.vertex_shift(v, z))
    }

    /// `Θ` of a path word, composed left to right.
    pub fn theta(&self, w: &NormalForm) -> AffineMap {
        let n = self.g.rank();
        let mut acc = AffineMap::identity(n);
        let mut at = self.g.base();
        for s in w.syllables() {
            let shift = self.vertex_shift(at, &s.residue);
            acc = acc.compose(&AffineMap::translation(shift));
            acc = acc.compose(self.letter(s.letter));
            at = self.g.target(s.letter);
        }
        acc.compose(&AffineMap::translation(self.vertex_shift(at, w.tail())))
    }
}

pub fn theta(g: &GraphOfGroups, w: &NormalForm) -> AffineMap {
    FiberAction::new(g).theta(w)
}

#[derive(Clone, Debug, Serialize)]
pub struct RelatorCheck {
    pub edge: String,
    pub generator: usize,
    /// `Θ(t_e)·Θ(M⁻β)·Θ(t_e)⁻¹`, computed from the generator images
    pub lhs: String,
    /// `Θ(M⁺β)`
    pub rhs: String,
    /// the same identity evaluated on path lifts, without conjugating to the base
    pub path_level: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TreeEdgeCheck {
    pub edge: String,
    pub map: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RelatorReport {
    pub relators: Vec<RelatorCheck>,
    pub tree_edges: Vec<TreeEdgeCheck>,
}

impl RelatorReport {
    pub fn all_pass(&self) -> bool {
        self.relators.iter().all(|r| r.pass && r.path_level) && self.tree_edges.iter().all(|t| t.pass)
    }

    pub fn failures(&self) -> Vec<&RelatorCheck> {
        self.relators.iter().filter(|r| !(r.pass && r.path_level)).collect()
    }
}

/// Checks `Θ(t_e)∘Θ(M⁻β)∘Θ(t_e)⁻¹ = Θ(M⁺β)` exactly for every edge and every
/// basis vector `β`, and `Θ(e) = id` for maximal-tree edges.
pub fn verify_relators(g: &GraphOfGroups) -> RelatorReport {
    let act = FiberAction::new(g);
    let n = g.rank();
    let mut relators = Vec::new();
    let mut tree_edges = Vec::new();
    for (idx, e) in g.edges().iter().enumerate() {
        let t = act.theta(&g.edge_element(idx));
        let t_inv = t.inverse().expect("nonsingular");
        let fwd = act.letter(Letter::new(idx, false));
        let fwd_inv = act.letter(Letter::new(idx, true));
        for i in 0..n {
            let beta = unit_vec(n, i, 1);
            let zm = e.minus.matrix().mul_vec(&beta);
            let zp = e.plus.matrix().mul_vec(&beta);
            let lhs = t
                .compose(&act.theta(&g.vertex_element(e.from, zm.clone())))
                .compose(&t_inv);
            let rhs = act.theta(&g.vertex_element(e.to, zp.clone()));
            let path_lhs = fwd
                .compose(&act.vertex_translation(e.from, &zm))
                .compose(fwd_inv);
            let path_rhs = act.vertex_translation(e.to, &zp);
            relators.push(RelatorCheck {
                edge: e.id.clone(),
                generator: i,
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
                path_level: path_lhs == path_rhs,
                pass: lhs == rhs,
            });
        }
        if e.tree {
            tree_edges.push(TreeEdgeCheck {
                edge: e.id.clone(),
                map: fwd.to_string(),
                pass: fwd.is_identity(),
            });
        }
    }
    RelatorReport { relators, tree_edges }
}
