use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::{FundamentalDomain, NullityError};
use crate::bass_serre::{tree_act, tree_distance, FiberAction};
use crate::compression::CompressionMap;
use crate::graph_of_groups::{enumerate_ball, GraphOfGroups, NormalForm};
use crate::metric_models::{ModelPoint, Space, TreePoint};

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub wordlen: usize,
    /// reference radius for visual diameters
    pub r0: f64,
    pub max_elements: usize,
}

/// Statistics of one translate `gK` (or `f^H(g)·H(K)` when compressed).
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct TranslateStats {
    pub rep: String,
    #[serde(skip)]
    pub element: NormalForm,
    pub wordlen: usize,
    /// `d(t₀, π_X(gK))`
    pub tree_dist: usize,
    pub tree_diam: usize,
    pub fiber_diam: f64,
    /// diameter of the projection of the samples to `B̄(x₀, R₀)`
    pub visual_diam: f64,
}

impl TranslateStats {
    /// Radius of a tree ball about `t₀` containing `π_X(gK)`.
    pub fn tree_reach(&self) -> usize {
        self.tree_dist + self.tree_diam
    }
}

/// `T × ℝⁿ` with the tree modelled as regular of the largest vertex degree.
pub fn product_space(g: &GraphOfGroups) -> Space {
    let valence = (0..g.vertices().len())
        .map(|v| g.tree_degree(v).to_u32().unwrap_or(u32::MAX))
        .max()
        .unwrap_or(2)
        .max(2);
    Space::product(Space::tree(valence), Space::euclidean(g.rank()))
}

fn to_f64(v: &[BigRational]) -> Vec<f64> {
    v.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt()
}

fn max_pairwise<T>(pts: &[T], d: impl Fn(&T, &T) -> f64) -> f64 {
    let mut m: f64 = 0.0;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            m = m.max(d(&pts[i], &pts[j]));
        }
    }
    m
}

fn stats_for(
    g: &GraphOfGroups,
    act: &FiberAction<'_>,
    space: &Space,
    k: &FundamentalDomain,
    w: &NormalForm,
    wordlen: usize,
    r0: f64,
    compressed: Option<&CompressionMap>,
) -> Result<TranslateStats, NullityError> {
    let theta = act.theta(w);
    let verts: Vec<_> = k.tree_part.iter().map(|u| tree_act(g, w, u)).collect();
    let tree_dist = verts.iter().map(|v| v.depth()).min().unwrap_or(0);
    let tree_diam = {
        let mut m = 0;
        for i in 0..verts.len() {
            for j in i + 1..verts.len() {
                m = m.max(tree_distance(&verts[i], &verts[j]));
            }
        }
        m
    };
    let fibers: Vec<Vec<f64>> = match compressed {
        None => k.fiber_samples.iter().map(|y| to_f64(&theta.apply(y))).collect(),
        Some(map) => k
            .fiber_samples
            .iter()
            .map(|y| map.compress_vec(&to_f64(&theta.apply(y))))
            .collect::<Result<_, _>>()?,
    };
    let fiber_diam = match compressed {
        // exact: the image of the cube is a parallelotope spanned by its corners
        None => {
            let img: Vec<Vec<BigRational>> = k.corners.iter().map(|c| theta.apply(c)).collect();
            let mut best = BigRational::zero();
            for i in 0..img.len() {
                for j in i + 1..img.len() {
                    let d2: BigRational = img[i]
                        .iter()
                        .zip(&img[j])
                        .map(|(p, q)| (p - q) * (p - q))
                        .sum();
                    if d2 > best {
                        best = d2;
                    }
                }
            }
            best.to_f64().unwrap_or(f64::INFINITY).sqrt()
        }
        Some(_) => max_pairwise(&fibers, |a, b| euclid(a, b)),
    };
    let labels: Vec<Vec<u32>> = verts.iter().map(|v| v.labels(g)).collect();
    let mut projected = Vec::with_capacity(labels.len() * fibers.len());
    for l in &labels {
        for y in &fibers {
            let p = ModelPoint::product(
                ModelPoint::Tree(TreePoint::vertex(l.clone())),
                ModelPoint::Euclidean(y.clone()),
            );
            projected.push(space.project_to_ball(&p, r0)?);
        }
    }
    let mut visual_diam: f64 = 0.0;
    for i in 0..projected.len() {
        for j in i + 1..projected.len() {
            visual_diam = visual_diam.max(space.distance(&projected[i], &projected[j])?);
        }
    }
    Ok(TranslateStats {
        rep: w.to_string(),
        element: w.clone(),
        wordlen,
        tree_dist,
        tree_diam,
        fiber_diam,
        visual_diam,
    })
}

/// Statistics for every element of the word-length ball, in ball order.
pub fn translate_sweep(
    g: &GraphOfGroups,
    k: &FundamentalDomain,
    cfg: &SweepConfig,
    compressed: Option<&CompressionMap>,
) -> Result<Vec<TranslateStats>, NullityError> {
    if !(cfg.r0 > 0.0) {
        return Err(NullityError::InvalidInput("R₀ must be positive".into()));
    }
    if k.dim != g.rank() {
        return Err(NullityError::InvalidInput("domain does not match the graph".into()));
    }
    let ball = enumerate_ball(g, cfg.wordlen, cfg.max_elements)?;
    let act = FiberAction::new(g);
    let space = product_space(g);
    ball.par_iter()
        .map(|e| stats_for(g, &act, &space, k, &e.form, e.wordlen, cfg.r0, compressed))
        .collect()
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct TrendRow {
    pub wordlen: usize,
    pub count: usize,
    pub max_visual_diam: f64,
}

/// Per word length, the largest visual diameter among its translates.
pub fn visual_diameter_trend(stats: &[TranslateStats]) -> Vec<TrendRow> {
    let top = stats.iter().map(|s| s.wordlen).max().unwrap_or(0);
    let mut rows: Vec<TrendRow> = (0..=top)
        .map(|wordlen| TrendRow {
            wordlen,
            count: 0,
            max_visual_diam: 0.0,
        })
        .collect();
    for s in stats {
        let r = &mut rows[s.wordlen];
        r.count += 1;
        r.max_visual_diam = r.max_visual_diam.max(s.visual_diam);
    }
    rows.retain(|r| r.count > 0);
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nullity_lab::build_domain;
    use crate::graph_of_groups::DEFAULT_MAX_ELEMENTS;

    #[test]
    fn identity_and_powers_of_t() {
        let g = GraphOfGroups::baumslag_solitar(1, 2).unwrap();
        let k = build_domain(&g, None, 2.0).unwrap();
        let cfg = SweepConfig { wordlen: 5, r0: 5.0, max_elements: DEFAULT_MAX_ELEMENTS };
        let stats = translate_sweep(&g, &k, &cfg, None).unwrap();
        assert_eq!(stats[0].wordlen, 0);
        assert_eq!(stats[0].fiber_diam, 1.0);
        assert_eq!(stats[0].tree_dist, 0);
        assert_eq!(stats[0].visual_diam, 1.0);
        for j in 1..=5 {
            let w = g.power(&g.parse_word("t").unwrap(), j);
            let s = stats.iter().find(|s| s.element == w).unwrap();
            assert_eq!(s.fiber_diam, 2f64.powi(j as i32));
            assert_eq!(s.tree_dist, j as usize);
        }
        let trend = visual_diameter_trend(&stats);
        assert_eq!(trend.len(), 6);
        assert!(trend.iter().all(|r| r.max_visual_diam <= 10.0 + 1e-12));
    }
}
