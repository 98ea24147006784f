use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::NullityError;
use crate::bass_serre::{tree_neighbors, FiberAction, TreeVertex};
use crate::graph_of_groups::{GraphOfGroups, NormalForm};

/// `K = K_T × [0, s]ⁿ` with `K_T` the lift of the maximal tree through the
/// base vertex, plus the sample cloud used for diameters.
#[derive(Clone, Debug, PartialEq)]
pub struct FundamentalDomain {
    /// one tree vertex per vertex of the graph, indexed by vertex
    pub tree_part: Vec<TreeVertex>,
    pub cube_side: BigRational,
    pub dim: usize,
    /// the `2ⁿ` corners of the cube
    pub corners: Vec<Vec<BigRational>>,
    /// grid points of the cube, corners included
    pub fiber_samples: Vec<Vec<BigRational>>,
    pub probe_radius: f64,
    pub probes: usize,
    pub covered: usize,
}

impl FundamentalDomain {
    pub fn coverage(&self) -> f64 {
        if self.probes == 0 {
            1.0
        } else {
            self.covered as f64 / self.probes as f64
        }
    }

    pub fn cube_side_f64(&self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self.cube_side).unwrap_or(f64::NAN)
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Smallest cube side for which `[0, s]ⁿ` plus the translation lattice of
/// each vertex group covers `ℝⁿ`: the largest coordinate width of a lattice
/// fundamental parallelotope.
pub fn default_cube_side(g: &GraphOfGroups) -> BigRational {
    let act = FiberAction::new(g);
    (0..g.vertices().len())
        .map(|v| {
            act.h(v)
                .inverse()
                .expect("nonsingular")
                .linear_part()
                .row_sum_norm()
        })
        .max()
        .unwrap_or_else(BigRational::one)
}

fn tree_path_form(g: &GraphOfGroups, v: usize) -> NormalForm {
    let mut r = g.reducer_at_base();
    for &l in g.tree_path(v) {
        r.push_letter(l);
    }
    r.finish()
}

fn cube_grid(n: usize, s: &BigRational, per_side: usize) -> Vec<Vec<BigRational>> {
    let k = per_side.max(2);
    let steps: Vec<BigRational> = (0..k).map(|i| s * rat(i as i64, (k - 1) as i64)).collect();
    let mut out: Vec<Vec<BigRational>> = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                steps.iter().map(move |x| {
                    let mut q = p.clone();
                    q.push(x.clone());
                    q
                })
            })
            .collect();
    }
    out
}

/// Tree vertices within `radius` of the base vertex, in breadth-first order.
fn tree_probe_vertices(g: &GraphOfGroups, radius: usize) -> Vec<TreeVertex> {
    let mut out = vec![TreeVertex::base(g)];
    let mut seen: HashSet<TreeVertex> = out.iter().cloned().collect();
    let mut head = 0;
    while head < out.len() {
        let v = out[head].clone();
        head += 1;
        if v.depth() >= radius {
            continue;
        }
        for (_, w) in tree_neighbors(g, &v) {
            if seen.insert(w.clone()) {
                out.push(w);
            }
        }
    }
    out
}

/// Whether `x ∈ [0, s]ⁿ + A⁻¹ℤⁿ`, for `A` the linear part of `h_v`.
fn in_cube_orbit(
    x: &[BigRational],
    a: &[Vec<BigRational>],
    a_inv: &[Vec<BigRational>],
    corners: &[Vec<BigRational>],
) -> bool {
    let n = x.len();
    // z ranges over integer points of A·(x − cube)
    let mut lo = vec![BigInt::zero(); n];
    let mut hi = vec![BigInt::zero(); n];
    for (ci, c) in corners.iter().enumerate() {
        for i in 0..n {
            let v: BigRational = (0..n).map(|j| &a[i][j] * (&x[j] - &c[j])).sum();
            let (f, cl) = (v.floor().to_integer(), v.ceil().to_integer());
            if ci == 0 || f < lo[i] {
                lo[i] = f;
            }
            if ci == 0 || cl > hi[i] {
                hi[i] = cl;
            }
        }
    }
    let side = &corners[corners.len() - 1][0];
    let mut z = lo.clone();
    loop {
        let ok = (0..n).all(|i| {
            let shift: BigRational = (0..n)
                .map(|j| &a_inv[i][j] * BigRational::from_integer(z[j].clone()))
                .sum();
            let y = &x[i] - shift;
            !y.is_negative() && &y <= side
        });
        if ok {
            return true;
        }
        let mut i = 0;
        loop {
            if i == n {
                return false;
            }
            if z[i] < hi[i] {
                z[i] += 1;
                break;
            }
            z[i] = lo[i].clone();
            i += 1;
        }
    }
}

/// Builds `K` and measures how much of a probe net in `T × [−r, r]ⁿ` its
/// translates cover. Fiber probes sit on a grid of step 1/8.
pub fn build_domain(
    g: &GraphOfGroups,
    cube_side: Option<BigRational>,
    probe_radius: f64,
) -> Result<FundamentalDomain, NullityError> {
    let s = cube_side.unwrap_or_else(|| default_cube_side(g));
    if !s.is_positive() {
        return Err(NullityError::InvalidInput("cube side must be positive".into()));
    }
    if !(probe_radius >= 0.0 && probe_radius.is_finite()) {
        return Err(NullityError::InvalidInput("probe radius must be finite and nonnegative".into()));
    }
    let n = g.rank();
    let tree_part: Vec<TreeVertex> = (0..g.vertices().len())
        .map(|v| TreeVertex::from_path(&tree_path_form(g, v)))
        .collect();
    let corners = cube_grid(n, &s, 2);
    let per_side = match n {
        1 => 5,
        2 => 3,
        _ => 2,
    };
    let fiber_samples = cube_grid(n, &s, per_side);

    let act = FiberAction::new(g);
    let r_int = probe_radius.floor() as i64;
    let per_dim = {
        let full = (16 * r_int + 1) as usize;
        let cap = (4096f64).powf(1.0 / n as f64).floor().max(1.0) as usize;
        full.min(cap).max(1)
    };
    let fiber_probes: Vec<Vec<BigRational>> = {
        let span = rat(2 * r_int, 1);
        let pts: Vec<BigRational> = (0..per_dim)
            .map(|i| {
                if per_dim == 1 {
                    BigRational::zero()
                } else {
                    rat(-r_int, 1) + &span * rat(i as i64, (per_dim - 1) as i64)
                }
            })
            .collect();
        let mut out: Vec<Vec<BigRational>> = vec![Vec::new()];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|p| {
                    pts.iter().map(move |x| {
                        let mut q = p.clone();
                        q.push(x.clone());
                        q
                    })
                })
                .collect();
        }
        out
    };
    let tree_probes = tree_probe_vertices(g, r_int.max(0) as usize);
    let lattices: Vec<(Vec<Vec<BigRational>>, Vec<Vec<BigRational>>)> = (0..g.vertices().len())
        .map(|v| {
            let a = act.h(v).linear_part();
            let a_inv = a.inverse().expect("nonsingular");
            (a.matrix_rows(), a_inv.matrix_rows())
        })
        .collect();
    let mut covered = 0;
    for v in &tree_probes {
        let ty = v.vertex_type(g);
        let g0 = g.close_path(v.rep(), &vec![BigInt::zero(); n]);
        let inv = act.theta(&g0).inverse().expect("nonsingular");
        let (a, a_inv) = &lattices[ty];
        for y in &fiber_probes {
            if in_cube_orbit(&inv.apply(y), a, a_inv, &corners) {
                covered += 1;
            }
        }
    }
    let probes = tree_probes.len() * fiber_probes.len();
    if covered < probes {
        let suggested = default_cube_side(g);
        return Err(NullityError::DomainTooSmall {
            covered,
            probes,
            suggested: suggested.to_string(),
        });
    }
    Ok(FundamentalDomain {
        tree_part,
        cube_side: s,
        dim: n,
        corners,
        fiber_samples,
        probe_radius,
        probes,
        covered,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_interval_covers_bs12() {
        let g = GraphOfGroups::baumslag_solitar(1, 2).unwrap();
        let k = build_domain(&g, Some(rat(1, 1)), 3.0).unwrap();
        assert_eq!(k.coverage(), 1.0);
        assert_eq!(k.tree_part.len(), 1);
        assert_eq!(default_cube_side(&g), rat(1, 1));
    }

    #[test]
    fn quarter_interval_leaves_gaps() {
        let g = GraphOfGroups::baumslag_solitar(1, 2).unwrap();
        match build_domain(&g, Some(rat(1, 4)), 3.0) {
            Err(NullityError::DomainTooSmall { covered, probes, .. }) => assert!(covered < probes),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn integers_on_the_line() {
        let g = GraphOfGroups::free_abelian(1);
        let k = build_domain(&g, None, 3.0).unwrap();
        assert_eq!(k.probes, 49);
        assert_eq!(k.coverage(), 1.0);
    }
}
