use num_bigint::BigUint;
use serde::Serialize;

use super::ObstructionError;
use crate::bass_serre::{tree_neighbors, TreeVertex};
use crate::compression::SublinearFn;
use crate::graph_of_groups::GraphOfGroups;
use crate::metric_models::{tree_distance, TreePoint};

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct T4Components {
    pub r: usize,
    pub enumerated: u64,
    /// `4·3^{r−1}`
    pub formula: u64,
    pub matches: bool,
}

/// The Bass–Serre tree of `BS(1,3)` is 4-valent.
fn t4_graph() -> GraphOfGroups {
    GraphOfGroups::baumslag_solitar(1, 3).expect("BS(1,3) is valid")
}

/// Unbounded components of the complement of the open `r`-ball about a
/// vertex of the 4-valent tree. Each contains exactly one vertex at depth
/// `r`, so they are counted by enumerating the sphere on the lazily built
/// tree and keeping vertices with a child.
pub fn t4_components(r: usize) -> Result<T4Components, ObstructionError> {
    if r == 0 {
        return Err(ObstructionError::InvalidInput("r must be at least 1".into()));
    }
    let g = t4_graph();
    let mut layer = vec![TreeVertex::base(&g)];
    for _ in 0..r {
        layer = layer
            .iter()
            .flat_map(|v| {
                tree_neighbors(&g, v)
                    .into_iter()
                    .map(|(_, w)| w)
                    .filter(|w| w.depth() > v.depth())
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    let enumerated = layer
        .iter()
        .filter(|v| tree_neighbors(&g, v).iter().any(|(_, w)| w.depth() > v.depth()))
        .count() as u64;
    let formula = 4 * 3u64.pow(r as u32 - 1);
    Ok(T4Components {
        r,
        enumerated,
        formula,
        matches: enumerated == formula,
    })
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct T4Index {
    pub n: u64,
    /// radius `⌈φ(2n) + C⌉` of the ball the compressed `n`-ball fits in, at least 1
    pub bounding_radius: u64,
    pub components: String,
    pub bounding_components: String,
}

fn components(r: u64) -> BigUint {
    BigUint::from(4u32) * BigUint::from(3u32).pow((r - 1) as u32)
}

/// Least `n ≥ 1` whose ball has more complementary components than the
/// ball of radius `⌈φ(2n) + C⌉` (taken to be at least 1) that a compression
/// would squeeze it into: `4·3^{n−1} > 4·3^{⌈φ(2n)+C⌉−1}`.
pub fn t4_contradiction_index(phi: &SublinearFn, c: f64) -> Result<T4Index, ObstructionError> {
    phi.certify()?;
    if !(c >= 0.0 && c.is_finite()) {
        return Err(ObstructionError::InvalidInput(format!("C = {c} must be finite and nonnegative")));
    }
    const LIMIT: u64 = 1 << 40;
    let mut n = 1u64;
    while n < LIMIT {
        let rb = ((phi.eval(2.0 * n as f64) + c).ceil() as u64).max(1);
        if n > rb {
            return Ok(T4Index {
                n,
                bounding_radius: rb,
                components: components(n).to_string(),
                bounding_components: components(rb).to_string(),
            });
        }
        // jump when far from the threshold
        n = if rb > 2 * n { (rb / 2).max(n + 1) } else { n + 1 };
    }
    Err(ObstructionError::ScanLimit(LIMIT))
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SandwichReport {
    pub n: usize,
    pub beta: usize,
    pub s: usize,
    pub points: usize,
    pub item1: bool,
    pub item2: bool,
    pub item3: bool,
}

fn children(path: &[u32]) -> u32 {
    if path.is_empty() {
        4
    } else {
        3
    }
}

/// Vertices of the 4-valent tree up to `depth`, as label paths.
fn vertices(depth: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..depth {
        layer = layer
            .iter()
            .flat_map(|p: &Vec<u32>| {
                (0..children(p)).map(move |c| {
                    let mut q = p.clone();
                    q.push(c);
                    q
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// Ball containments relating the word metric of the free product of four
/// order-2 groups to its Cayley graph, the 4-valent tree with `f` the
/// inclusion of vertices: `K = 1`, `ε = 0`, `R = ½`, chambers are closed
/// `½`-stars of vertices and `T_{β(k)}` is the union of the chambers of the
/// `k`-ball. Checked on all quarter points up to depth `n + 2`.
pub fn t4_sandwich(n: usize) -> SandwichReport {
    let r = 0.5;
    let verts = vertices(n + 2);
    let mut points: Vec<TreePoint> = vec![TreePoint::root()];
    for v in verts.iter().filter(|v| !v.is_empty()) {
        for q in 1..=4 {
            points.push(TreePoint::new(v.clone(), q as f64 / 4.0));
        }
    }
    let ball = |k: usize| -> Vec<TreePoint> {
        verts
            .iter()
            .filter(|v| v.len() <= k)
            .map(|v| TreePoint::vertex(v.clone()))
            .collect()
    };
    let dist_to = |p: &TreePoint, set: &[TreePoint]| {
        set.iter().map(|a| tree_distance(p, a)).fold(f64::INFINITY, f64::min)
    };
    let root = TreePoint::root();
    // S: least k with B[x₀, R] ⊆ T_{β(k)}
    let mut s = 0;
    loop {
        let b = ball(s);
        if points
            .iter()
            .filter(|p| tree_distance(&root, p) <= r)
            .all(|p| dist_to(p, &b) <= r)
        {
            break;
        }
        s += 1;
    }
    let bn = ball(n);
    let bns = ball(n + s);
    let (mut item1, mut item2, mut item3) = (true, true, true);
    for p in &points {
        let d0 = tree_distance(&root, p);
        let near_n = dist_to(p, &bn) <= r;
        if d0 <= n as f64 - r && !near_n {
            item1 = false;
        }
        if near_n && dist_to(p, &bns) > r {
            item2 = false;
        }
        if near_n && d0 > n as f64 + r {
            item3 = false;
        }
    }
    SandwichReport {
        n,
        beta: bn.len(),
        s,
        points: points.len(),
        item1,
        item2,
        item3,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn component_counts() {
        assert_eq!(t4_components(1).unwrap().enumerated, 4);
        assert_eq!(t4_components(2).unwrap().enumerated, 12);
        assert_eq!(t4_components(5).unwrap().enumerated, 324);
        assert!(t4_components(0).is_err());
    }

    #[test]
    fn contradiction_indices() {
        assert_eq!(t4_contradiction_index(&SublinearFn::Log, 1.0).unwrap().n, 5);
        let z = t4_contradiction_index(&SublinearFn::Zero, 0.0).unwrap();
        assert_eq!((z.n, z.bounding_radius), (2, 1));
        assert_eq!(z.components, "12");
        let lin = SublinearFn::Power { c: 0.9, p: 1.0 };
        assert!(t4_contradiction_index(&lin, 0.0).is_err());
    }

    #[test]
    fn sandwich_small() {
        let rep = t4_sandwich(3);
        assert_eq!(rep.s, 0);
        assert_eq!(rep.beta, 1 + 4 + 12 + 36);
        assert!(rep.item1 && rep.item2 && rep.item3);
    }
}
