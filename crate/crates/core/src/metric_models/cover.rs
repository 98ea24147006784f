use std::f64::consts::PI;

use serde::Serialize;

use super::{ConeNbhd, GeodesicRay, MetricError, ModelPoint, Space};
use crate::compression::SublinearFn;

/// Constants `(R, δ)` such that for `d(x₀, x) ≥ R`, each `V(x, δ)` lies in
/// a single cover element (checked on the boundary net only).
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct CoverConstants {
    pub radius_r: f64,
    pub delta: f64,
    /// min over sphere-net points of max over cover elements of `η_i`
    pub delta_prime: f64,
    pub net_size: usize,
    pub mesh: f64,
}

/// Finite sample of the visual boundary. `resolution` is the number of
/// directions on circles, the depth of tree rays, and the number of interior
/// slopes for products (slopes 0 and ∞ are always included).
pub fn boundary_net(space: &Space, resolution: usize) -> Vec<GeodesicRay> {
    let res = resolution.max(1);
    match space {
        Space::Euclidean { base } => match base.len() {
            1 => vec![GeodesicRay::Euclidean(vec![1.0]), GeodesicRay::Euclidean(vec![-1.0])],
            2 => (0..res.max(4))
                .map(|k| {
                    let th = 2.0 * PI * k as f64 / res.max(4) as f64;
                    GeodesicRay::Euclidean(vec![th.cos(), th.sin()])
                })
                .collect(),
            n => {
                let r = res as i64;
                let mut out = Vec::new();
                let mut cur = vec![-r; n];
                loop {
                    if cur.iter().any(|c| c.abs() == r) {
                        let v: Vec<f64> = cur.iter().map(|&c| c as f64).collect();
                        out.push(GeodesicRay::euclidean(&v).expect("nonzero"));
                    }
                    let mut i = 0;
                    loop {
                        if i == n {
                            return out;
                        }
                        cur[i] += 1;
                        if cur[i] <= r {
                            break;
                        }
                        cur[i] = -r;
                        i += 1;
                    }
                }
            }
        },
        Space::Hyperbolic { .. } => (0..res.max(4))
            .map(|k| {
                let th = 2.0 * PI * k as f64 / res.max(4) as f64;
                GeodesicRay::hyperbolic(space, th).expect("hyperbolic space")
            })
            .collect(),
        Space::Tree { valence } => {
            let v = *valence;
            let mut paths: Vec<Vec<u32>> = vec![vec![]];
            for depth in 0..res {
                let width = if depth == 0 { v } else { v.saturating_sub(1) };
                paths = paths
                    .into_iter()
                    .flat_map(|p| {
                        (0..width).map(move |c| {
                            let mut q = p.clone();
                            q.push(c);
                            q
                        })
                    })
                    .collect();
            }
            paths.into_iter().map(GeodesicRay::Tree).collect()
        }
        Space::Product(l, r) => {
            let ln = boundary_net(l, resolution);
            let rn = boundary_net(r, resolution);
            let mut slopes = vec![0.0];
            for j in 1..=res {
                slopes.push((PI / 2.0 * j as f64 / (res + 1) as f64).tan());
            }
            slopes.push(f64::INFINITY);
            product_net(&ln, &rn, &slopes)
        }
    }
}

/// All combinations of factor rays and slopes; slope 0 ignores the right
/// ray and slope ∞ ignores the left one, so those are not repeated.
pub fn product_net(left: &[GeodesicRay], right: &[GeodesicRay], slopes: &[f64]) -> Vec<GeodesicRay> {
    let mut out = Vec::new();
    for &m in slopes {
        if m == 0.0 {
            out.extend(left.iter().map(|a| GeodesicRay::product(a.clone(), right[0].clone(), 0.0)));
        } else if m.is_infinite() {
            out.extend(right.iter().map(|b| GeodesicRay::product(left[0].clone(), b.clone(), m)));
        } else {
            for a in left {
                for b in right {
                    out.push(GeodesicRay::product(a.clone(), b.clone(), m));
                }
            }
        }
    }
    out
}

/// Net points on a sphere, grouped when distinct rays pass through the same
/// point (as tree rays do below their truncation depth).
struct Sphere {
    points: Vec<ModelPoint>,
    /// group index of every ray
    group_of: Vec<usize>,
}

fn sphere(space: &Space, net: &[GeodesicRay], r: f64) -> Result<Sphere, MetricError> {
    let mut points: Vec<ModelPoint> = Vec::new();
    let mut group_of = Vec::with_capacity(net.len());
    let mut seen: std::collections::HashMap<String, usize> = std::collections::HashMap::new();
    for ray in net {
        let p = ray.eval(space, r)?;
        let key = format!("{p:?}");
        let idx = *seen.entry(key).or_insert_with(|| {
            points.push(p);
            points.len() - 1
        });
        group_of.push(idx);
    }
    Ok(Sphere { points, group_of })
}

/// Largest nearest-neighbour distance between distinct net points on the
/// sphere of radius `r`.
pub fn net_spacing(space: &Space, net: &[GeodesicRay], r: f64) -> Result<f64, MetricError> {
    let s = sphere(space, net, r)?;
    let mut mesh: f64 = 0.0;
    for (i, p) in s.points.iter().enumerate() {
        let mut nearest = f64::INFINITY;
        for (j, q) in s.points.iter().enumerate() {
            if i != j {
                nearest = nearest.min(space.distance(p, q)?);
            }
        }
        if nearest.is_finite() {
            mesh = mesh.max(nearest);
        }
    }
    Ok(mesh)
}

/// One cone neighbourhood per net ray, centred at radius `radius` with
/// `ε` equal to 1.5 times the net spacing there.
pub fn standard_cover(
    space: &Space,
    net: &[GeodesicRay],
    radius: f64,
) -> Result<Vec<ConeNbhd>, MetricError> {
    let s = sphere(space, net, radius)?;
    let mesh = net_spacing(space, net, radius)?;
    let eps = if mesh > 0.0 { 1.5 * mesh } else { radius };
    s.points
        .into_iter()
        .map(|c| ConeNbhd::new(space, c, eps))
        .collect()
}

/// For each ray, which cover elements contain it.
fn membership(
    space: &Space,
    cover: &[ConeNbhd],
    net: &[GeodesicRay],
) -> Result<Vec<Vec<bool>>, MetricError> {
    net.iter()
        .map(|ray| cover.iter().map(|v| space.ray_in_cone_nbhd(ray, v)).collect())
        .collect()
}

/// Cover elements containing every ray of each sphere group.
fn group_membership(s: &Sphere, member: &[Vec<bool>], k: usize) -> Vec<Vec<bool>> {
    let mut out = vec![vec![true; k]; s.points.len()];
    for (ray, &g) in s.group_of.iter().enumerate() {
        for i in 0..k {
            out[g][i] &= member[ray][i];
        }
    }
    out
}

pub fn cover_constants(
    space: &Space,
    cover: &[ConeNbhd],
    net: &[GeodesicRay],
    margin: f64,
) -> Result<CoverConstants, MetricError> {
    if cover.is_empty() || net.is_empty() {
        return Err(MetricError::InvalidInput("empty cover or net".into()));
    }
    if !(margin > 0.0) {
        return Err(MetricError::InvalidInput("margin must be positive".into()));
    }
    let member = membership(space, cover, net)?;
    if let Some(i) = member.iter().position(|m| !m.iter().any(|&b| b)) {
        return Err(MetricError::Uncovered(net[i].describe()));
    }
    let mut rmax: f64 = 0.0;
    for v in cover {
        rmax = rmax.max(space.dist_to_base(&v.center)?);
    }
    let radius_r = rmax + 2.0 * margin;
    let s = sphere(space, net, radius_r)?;
    let groups = group_membership(&s, &member, cover.len());
    let mesh = net_spacing(space, net, radius_r)?;
    let cap = 2.0 * radius_r;

    let mut delta_prime = f64::INFINITY;
    for (gx, x) in s.points.iter().enumerate() {
        let mut best: f64 = 0.0;
        for i in 0..cover.len() {
            if !groups[gx][i] {
                continue;
            }
            let mut eta = cap;
            for (gz, z) in s.points.iter().enumerate() {
                if !groups[gz][i] {
                    eta = eta.min(space.distance(x, z)? - 0.5 * mesh);
                }
            }
            best = best.max(eta.max(0.0));
        }
        delta_prime = delta_prime.min(best);
    }
    if !(delta_prime > 0.0) {
        return Err(MetricError::DegenerateCover);
    }
    Ok(CoverConstants {
        radius_r,
        delta: (delta_prime / 2.0).min(1.0 / radius_r),
        delta_prime,
        net_size: net.len(),
        mesh,
    })
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct CoverVerification {
    pub radii: Vec<f64>,
    pub points_checked: usize,
    pub uncovered: Vec<String>,
    pub pass: bool,
}

/// Re-checks that `V(x, δ)` lies in one cover element for every net point
/// `x` on spheres of radius `R, 1.5R, 2R, 4R`, using the given (typically
/// refined) net. Radii beyond the truncation depth of tree rays are skipped.
pub fn verify_cover(
    space: &Space,
    cover: &[ConeNbhd],
    consts: &CoverConstants,
    net: &[GeodesicRay],
) -> Result<CoverVerification, MetricError> {
    let r = consts.radius_r;
    let depth = net.iter().filter_map(|ray| ray.depth()).min();
    let radii: Vec<f64> = [r, 1.5 * r, 2.0 * r, 4.0 * r]
        .into_iter()
        .filter(|&rho| depth.map_or(true, |d| rho <= d as f64))
        .collect();
    if radii.is_empty() {
        return Err(MetricError::RayDepth {
            depth: depth.unwrap_or(0),
            t: r,
        });
    }
    let member = membership(space, cover, net)?;
    let mut uncovered = Vec::new();
    let mut checked = 0;
    for &rho in &radii {
        let s = sphere(space, net, rho)?;
        let groups = group_membership(&s, &member, cover.len());
        for (gx, x) in s.points.iter().enumerate() {
            checked += 1;
            let mut ok = groups[gx].clone();
            for (gz, z) in s.points.iter().enumerate() {
                if gz != gx && space.distance(x, z)? < consts.delta {
                    for (o, &m) in ok.iter_mut().zip(&groups[gz]) {
                        *o &= m;
                    }
                }
            }
            if !ok.iter().any(|&b| b) {
                let ray = s.group_of.iter().position(|&g| g == gx).expect("group has a ray");
                uncovered.push(format!("{} at radius {rho}", net[ray].describe()));
            }
        }
    }
    Ok(CoverVerification {
        pass: uncovered.is_empty(),
        radii,
        points_checked: checked,
        uncovered,
    })
}

/// Least grid value `T = R + k·step` (k ≥ 1) such that
/// `φ(t)/(t − φ(t)) < δ²` and `t − φ(t) > R` hold at `T` and at geometric
/// samples beyond it.
pub fn sublinear_ball_threshold(
    consts: &CoverConstants,
    phi: &SublinearFn,
    step: f64,
) -> Result<f64, MetricError> {
    phi.certify()?;
    if !(step > 0.0) {
        return Err(MetricError::InvalidInput("grid step must be positive".into()));
    }
    let (r, d2) = (consts.radius_r, consts.delta * consts.delta);
    let holds = |t: f64| {
        let p = phi.eval(t);
        t - p > r && p / (t - p) < d2
    };
    let grid = |k: u64| r + k as f64 * step;
    let mut start = 1u64;
    loop {
        // exponential then binary search for the first passing grid point
        let (mut lo, mut hi) = (start - 1, start);
        let mut tries = 0;
        while !holds(grid(hi)) {
            lo = hi;
            hi = hi.saturating_mul(2);
            tries += 1;
            if tries > 200 {
                return Err(MetricError::InvalidInput("no threshold found on the grid".into()));
            }
        }
        while lo + 1 < hi {
            let mid = lo + (hi - lo) / 2;
            if holds(grid(mid)) {
                hi = mid
            } else {
                lo = mid
            }
        }
        let t = grid(hi);
        // confirm on geometric samples up to 10⁶·T
        let bad = (0..=120)
            .map(|j| t * 10f64.powf(j as f64 / 20.0))
            .find(|&s| !holds(s));
        match bad {
            None => return Ok(t),
            Some(s) => start = ((s - r) / step).ceil() as u64 + 1,
        }
    }
}
