//! Proper CAT(0) model spaces: simplicial trees, Euclidean space, the
//! hyperbolic plane and their ℓ₂ products, with geodesics, ball projections,
//! cone neighbourhoods and boundary nets.

mod cover;
pub mod hyperbolic;
mod json;
mod tree;

pub use cover::{
    boundary_net, cover_constants, net_spacing, standard_cover, sublinear_ball_threshold,
    verify_cover, CoverConstants, CoverVerification,
};
pub use json::SpaceSpec;
pub use tree::{tree_distance, tree_toward, TreePoint};

use thiserror::Error;

use crate::compression::CompressionError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("space mismatch: {0}")]
    TagMismatch(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("ray of depth {depth} evaluated at {t}")]
    RayDepth { depth: usize, t: f64 },
    #[error("boundary net point {0} is not covered")]
    Uncovered(String),
    #[error("cover has no positive Lebesgue number at net resolution")]
    DegenerateCover,
    #[error(transparent)]
    Certification(#[from] CompressionError),
}

#[derive(Clone, Debug, PartialEq)]
pub enum ModelPoint {
    Euclidean(Vec<f64>),
    Hyperbolic([f64; 3]),
    Tree(TreePoint),
    Product(Box<ModelPoint>, Box<ModelPoint>),
}

impl ModelPoint {
    pub fn product(a: ModelPoint, b: ModelPoint) -> Self {
        Self::Product(Box::new(a), Box::new(b))
    }

    pub fn tag(&self) -> String {
        match self {
            Self::Euclidean(v) => format!("euclidean{}", v.len()),
            Self::Hyperbolic(_) => "hyperbolic".into(),
            Self::Tree(_) => "tree".into(),
            Self::Product(a, b) => format!("product({},{})", a.tag(), b.tag()),
        }
    }
}

/// A model space together with its basepoint `x₀`.
#[derive(Clone, Debug, PartialEq)]
pub enum Space {
    Euclidean { base: Vec<f64> },
    Hyperbolic { base: [f64; 3] },
    /// Valence is only used to enumerate boundary nets.
    Tree { valence: u32 },
    Product(Box<Space>, Box<Space>),
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

impl Space {
    pub fn euclidean(n: usize) -> Self {
        Self::Euclidean { base: vec![0.0; n] }
    }

    pub fn hyperbolic() -> Self {
        Self::Hyperbolic {
            base: hyperbolic::ORIGIN,
        }
    }

    pub fn tree(valence: u32) -> Self {
        Self::Tree { valence }
    }

    pub fn product(a: Space, b: Space) -> Self {
        Self::Product(Box::new(a), Box::new(b))
    }

    pub fn base(&self) -> ModelPoint {
        match self {
            Self::Euclidean { base } => ModelPoint::Euclidean(base.clone()),
            Self::Hyperbolic { base } => ModelPoint::Hyperbolic(*base),
            Self::Tree { .. } => ModelPoint::Tree(TreePoint::root()),
            Self::Product(a, b) => ModelPoint::product(a.base(), b.base()),
        }
    }

    pub fn tag(&self) -> String {
        self.base().tag()
    }

    pub fn check(&self, p: &ModelPoint) -> Result<(), MetricError> {
        let ok = match (self, p) {
            (Self::Euclidean { base }, ModelPoint::Euclidean(v)) => base.len() == v.len(),
            (Self::Hyperbolic { .. }, ModelPoint::Hyperbolic(h)) => hyperbolic::on_hyperboloid(h, 1e-9),
            (Self::Tree { .. }, ModelPoint::Tree(t)) => (0.0..=1.0).contains(&t.t),
            (Self::Product(a, b), ModelPoint::Product(x, y)) => {
                a.check(x)?;
                b.check(y)?;
                true
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(MetricError::TagMismatch(format!(
                "point {} does not belong to {}",
                p.tag(),
                self.tag()
            )))
        }
    }

    pub fn distance(&self, a: &ModelPoint, b: &ModelPoint) -> Result<f64, MetricError> {
        match (self, a, b) {
            (Self::Euclidean { base }, ModelPoint::Euclidean(x), ModelPoint::Euclidean(y))
                if x.len() == base.len() && y.len() == base.len() =>
            {
                Ok(x.iter().zip(y).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt())
            }
            (Self::Hyperbolic { .. }, ModelPoint::Hyperbolic(x), ModelPoint::Hyperbolic(y)) => {
                Ok(hyperbolic::distance(x, y))
            }
            (Self::Tree { .. }, ModelPoint::Tree(x), ModelPoint::Tree(y)) => Ok(tree_distance(x, y)),
            (Self::Product(l, r), ModelPoint::Product(x1, y1), ModelPoint::Product(x2, y2)) => {
                let dx = l.distance(x1, x2)?;
                let dy = r.distance(y1, y2)?;
                Ok(dx.hypot(dy))
            }
            _ => Err(MetricError::TagMismatch(format!(
                "{} vs {} in {}",
                a.tag(),
                b.tag(),
                self.tag()
            ))),
        }
    }

    pub fn dist_to_base(&self, p: &ModelPoint) -> Result<f64, MetricError> {
        self.distance(&self.base(), p)
    }

    /// Point at arclength `s` on the geodesic from `x₀` to `y`.
    pub fn point_along(&self, y: &ModelPoint, s: f64) -> Result<ModelPoint, MetricError> {
        self.point_between(&self.base(), y, s)
    }

    /// Point at arclength `s` on the geodesic from `x` to `y`, clamped to `y`.
    pub fn point_between(
        &self,
        x: &ModelPoint,
        y: &ModelPoint,
        s: f64,
    ) -> Result<ModelPoint, MetricError> {
        let d = self.distance(x, y)?;
        if d == 0.0 || s >= d {
            return Ok(y.clone());
        }
        if s <= 0.0 {
            return Ok(x.clone());
        }
        Ok(match (self, x, y) {
            (Self::Euclidean { .. }, ModelPoint::Euclidean(a), ModelPoint::Euclidean(b)) => {
                let f = s / d;
                ModelPoint::Euclidean(a.iter().zip(b).map(|(p, q)| p + f * (q - p)).collect())
            }
            (Self::Hyperbolic { .. }, ModelPoint::Hyperbolic(a), ModelPoint::Hyperbolic(b)) => {
                ModelPoint::Hyperbolic(hyperbolic::toward(a, b, s))
            }
            (Self::Tree { .. }, ModelPoint::Tree(a), ModelPoint::Tree(b)) => {
                ModelPoint::Tree(tree_toward(a, b, s))
            }
            (Self::Product(l, r), ModelPoint::Product(x1, y1), ModelPoint::Product(x2, y2)) => {
                let f = s / d;
                let dl = l.distance(x1, x2)?;
                let dr = r.distance(y1, y2)?;
                ModelPoint::product(
                    l.point_between(x1, x2, f * dl)?,
                    r.point_between(y1, y2, f * dr)?,
                )
            }
            _ => unreachable!("distance already checked tags"),
        })
    }

    /// Nearest-point projection `p_r` onto the closed ball `B̄(x₀, r)`.
    pub fn project_to_ball(&self, y: &ModelPoint, r: f64) -> Result<ModelPoint, MetricError> {
        if r <= 0.0 {
            return Err(MetricError::InvalidInput(format!("radius {r} must be positive")));
        }
        let d = self.dist_to_base(y)?;
        if d <= r {
            Ok(y.clone())
        } else {
            self.point_along(y, r)
        }
    }

    pub fn in_cone_nbhd(&self, y: &ModelPoint, v: &ConeNbhd) -> Result<bool, MetricError> {
        let rx = self.dist_to_base(&v.center)?;
        let ry = self.dist_to_base(y)?;
        if ry <= rx {
            return Ok(false);
        }
        let p = self.point_along(y, rx)?;
        Ok(self.distance(&v.center, &p)? < v.epsilon)
    }

    /// Boundary point version: the radial condition is vacuous.
    pub fn ray_in_cone_nbhd(&self, ray: &GeodesicRay, v: &ConeNbhd) -> Result<bool, MetricError> {
        let rx = self.dist_to_base(&v.center)?;
        let p = ray.eval(self, rx)?;
        Ok(self.distance(&v.center, &p)? < v.epsilon)
    }
}

/// Direction data of a unit-speed geodesic ray from the basepoint.
#[derive(Clone, Debug, PartialEq)]
pub enum GeodesicRay {
    /// unit vector
    Euclidean(Vec<f64>),
    /// unit tangent vector at the basepoint
    Hyperbolic([f64; 3]),
    /// label path truncated at its length
    Tree(Vec<u32>),
    /// `slope = ∞` runs along the right factor only
    Product {
        left: Box<GeodesicRay>,
        right: Box<GeodesicRay>,
        slope: f64,
    },
}

impl GeodesicRay {
    pub fn euclidean(dir: &[f64]) -> Result<Self, MetricError> {
        let n = norm(dir);
        if n == 0.0 || !n.is_finite() {
            return Err(MetricError::InvalidInput("zero direction".into()));
        }
        Ok(Self::Euclidean(dir.iter().map(|x| x / n).collect()))
    }

    pub fn hyperbolic(space: &Space, theta: f64) -> Result<Self, MetricError> {
        match space {
            Space::Hyperbolic { base } => Ok(Self::Hyperbolic(hyperbolic::unit_tangent(base, theta))),
            _ => Err(MetricError::TagMismatch("hyperbolic ray in another space".into())),
        }
    }

    pub fn product(left: GeodesicRay, right: GeodesicRay, slope: f64) -> Self {
        Self::Product {
            left: Box::new(left),
            right: Box::new(right),
            slope,
        }
    }

    /// Truncation depth for tree rays (the minimum over tree factors).
    pub fn depth(&self) -> Option<usize> {
        match self {
            Self::Tree(p) => Some(p.len()),
            Self::Product { left, right, .. } => match (left.depth(), right.depth()) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            },
            _ => None,
        }
    }

    pub fn eval(&self, space: &Space, t: f64) -> Result<ModelPoint, MetricError> {
        let t = t.max(0.0);
        match (space, self) {
            (Space::Euclidean { base }, Self::Euclidean(u)) if u.len() == base.len() => Ok(
                ModelPoint::Euclidean(base.iter().zip(u).map(|(b, x)| b + t * x).collect()),
            ),
            (Space::Hyperbolic { base }, Self::Hyperbolic(v)) => {
                Ok(ModelPoint::Hyperbolic(hyperbolic::exp_map(base, &[t * v[0], t * v[1], t * v[2]])))
            }
            (Space::Tree { .. }, Self::Tree(path)) => {
                if t > path.len() as f64 + 1e-12 {
                    return Err(MetricError::RayDepth {
                        depth: path.len(),
                        t,
                    });
                }
                Ok(ModelPoint::Tree(TreePoint::along(path, t)))
            }
            (Space::Product(l, r), Self::Product { left, right, slope }) => {
                let (c, s) = if slope.is_infinite() {
                    (0.0, 1.0)
                } else {
                    let alpha = slope.atan();
                    (alpha.cos(), alpha.sin())
                };
                let lp = if c == 0.0 { l.base() } else { left.eval(l, t * c)? };
                let rp = if s == 0.0 { r.base() } else { right.eval(r, t * s)? };
                Ok(ModelPoint::product(lp, rp))
            }
            _ => Err(MetricError::TagMismatch(format!("ray does not belong to {}", space.tag()))),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Self::Euclidean(u) => format!("dir{u:?}"),
            Self::Hyperbolic(v) => format!("hdir[{:.4},{:.4},{:.4}]", v[0], v[1], v[2]),
            Self::Tree(p) => format!("ray{p:?}"),
            Self::Product { left, right, slope } => {
                format!("({}, {}, slope {slope})", left.describe(), right.describe())
            }
        }
    }
}

/// Cone neighbourhood `V(x, ε)`: points farther from `x₀` than `x` whose
/// projection to the sphere through `x` lands within `ε` of `x`. These also
/// stand in for the neighbourhoods `U(c, r, ε)` of a ray `c`, which equal
/// `V(c(r), ε)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConeNbhd {
    pub center: ModelPoint,
    pub epsilon: f64,
}

impl ConeNbhd {
    pub fn new(space: &Space, center: ModelPoint, epsilon: f64) -> Result<Self, MetricError> {
        space.check(&center)?;
        if !(epsilon > 0.0) {
            return Err(MetricError::InvalidInput("epsilon must be positive".into()));
        }
        if space.dist_to_base(&center)? <= 0.0 {
            return Err(MetricError::InvalidInput("center must differ from the basepoint".into()));
        }
        Ok(Self { center, epsilon })
    }
}
