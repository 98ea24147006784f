use num_traits::ToPrimitive;
use serde::Serialize;

use super::NullityError;
use crate::bass_serre::{tree_act, FiberAction, TreeVertex};
use crate::compression::{conjugate_affine, CompressionDomain, CompressionError, CompressionMap};
use crate::graph_of_groups::{GraphOfGroups, NormalForm};

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct SlopeSample {
    pub t: f64,
    pub d_x: f64,
    pub d_y: f64,
    /// `|d_Y/d_X − m|`, or `d_X/d_Y` when `m = ∞`
    pub error: f64,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct SlopeLimit {
    pub m: f64,
    /// `d_Y/d_X` at the largest sample; `None` when `d_X = 0`
    pub ratio: Option<f64>,
    /// `d_X/d_Y` at the largest sample; `None` when `d_Y = 0`
    pub inverse_ratio: Option<f64>,
    pub error: f64,
    pub samples: Vec<SlopeSample>,
    /// label path from the base vertex of `w·ξ(d)`
    pub tree_endpoint: Vec<u32>,
    pub tree_endpoint_rep: String,
    /// `A·η/|A·η|` for the linear part `A` of `Θ(w)`
    pub fiber_direction: Vec<f64>,
    pub kind: &'static str,
}

/// Pushes the slope-`m` ray `(ξ(s_X), s_Y·η)` of the compressed product
/// through `H ∘ w ∘ H⁻¹` and compares `d_Y/d_X` of the image, measured from
/// the image of the basepoint, with `m`. For `m ≤ 1` the ray is
/// `(ξ(t), m·t·η)`, for `m > 1` it is `(ξ(t/m), t·η)`, and `m = ∞` keeps the
/// tree coordinate at the base. `w` acts on `T` by isometries, so `d_X` is
/// the parameter itself and only the truncated ray `ξ` is needed for the
/// tree endpoint.
pub fn slope_limit(
    g: &GraphOfGroups,
    w: &NormalForm,
    xi: &TreeVertex,
    eta: &[f64],
    m: f64,
    compressed: &CompressionMap,
    t_max: f64,
) -> Result<SlopeLimit, NullityError> {
    let n = g.rank();
    if eta.len() != n {
        return Err(NullityError::InvalidInput(format!("fiber direction must have length {n}")));
    }
    let norm = eta.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(NullityError::InvalidInput("fiber direction must be nonzero".into()));
    }
    let eta: Vec<f64> = eta.iter().map(|x| x / norm).collect();
    if !(m >= 0.0) {
        return Err(NullityError::InvalidInput(format!("slope {m} must lie in [0, ∞]")));
    }
    if !(t_max >= 1.0 && t_max.is_finite()) {
        return Err(NullityError::InvalidInput("t_max must be at least 1".into()));
    }
    if !compressed.hhat().is_log_precomposed() {
        return Err(CompressionError::NotCertified(
            "slope limits need a linearly controlled (log-precomposed) compression".into(),
        )
        .into());
    }
    match compressed.domain() {
        CompressionDomain::Euclidean { center } if center.len() == n && center.iter().all(|&c| c == 0.0) => {}
        other => {
            return Err(NullityError::InvalidInput(format!(
                "compression must act on ℝ{n} about the origin, not {}",
                other.tag()
            )))
        }
    }

    // tree endpoint: the geodesic from the base to w·ξ(d) must meet w·ξ
    let depth = xi.depth();
    let mut ray = vec![xi.clone()];
    while let Some(p) = ray.last().unwrap().parent() {
        ray.push(p);
    }
    ray.reverse();
    let image: Vec<TreeVertex> = ray.iter().map(|v| tree_act(g, w, v)).collect();
    let nearest = (0..image.len()).min_by_key(|&i| image[i].depth()).unwrap_or(0);
    if m.is_finite() && nearest >= depth {
        return Err(NullityError::RayDepth { depth, needed: nearest + 1 });
    }
    let end = image.last().expect("ray has a vertex");

    let act = FiberAction::new(g);
    let theta = act.theta(w);
    let a = theta.linear_f64();
    let b: Vec<f64> = theta.offset().iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect();
    let a_eta: Vec<f64> = a
        .iter()
        .map(|row| row.iter().zip(&eta).map(|(p, q)| p * q).sum::<f64>())
        .collect();
    let an = a_eta.iter().map(|x| x * x).sum::<f64>().sqrt();
    let fiber_direction: Vec<f64> = a_eta.iter().map(|x| x / an).collect();

    let y0 = conjugate_affine(compressed, &a, &b, &vec![0.0; n])?;
    let mut ts: Vec<f64> = (0..)
        .map(|k| 10f64.powf(k as f64 / 2.0))
        .take_while(|&t| t < t_max)
        .collect();
    ts.push(t_max);
    let mut samples = Vec::with_capacity(ts.len());
    for &t in &ts {
        let (sx, sy) = if m.is_infinite() {
            (0.0, t)
        } else if m <= 1.0 {
            (t, m * t)
        } else {
            (t / m, t)
        };
        let y: Vec<f64> = eta.iter().map(|e| e * sy).collect();
        let img = conjugate_affine(compressed, &a, &b, &y)?;
        let d_y = img.iter().zip(&y0).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt();
        let d_x = sx;
        let error = if m.is_infinite() { d_x / d_y } else { (d_y / d_x - m).abs() };
        samples.push(SlopeSample { t, d_x, d_y, error });
    }
    let last = samples.last().expect("at least one sample").clone();
    Ok(SlopeLimit {
        m,
        ratio: (last.d_x > 0.0).then(|| last.d_y / last.d_x),
        inverse_ratio: (last.d_y > 0.0).then(|| last.d_x / last.d_y),
        error: last.error,
        tree_endpoint: end.labels(g),
        tree_endpoint_rep: end.rep().to_string(),
        fiber_direction,
        samples,
        kind: "numeric limit on a truncated ray; affine fiber action",
    })
}
