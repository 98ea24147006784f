use serde::Serialize;

use super::{CompressionError, HHat, SublinearFn};
use crate::metric_models::hyperbolic::{self, H2};
use crate::metric_models::ModelPoint;

/// Where a compression acts. `Ray` is `[0, ∞)` with points `Euclidean([x])`.
#[derive(Clone, Debug, PartialEq)]
pub enum CompressionDomain {
    Ray,
    Euclidean { center: Vec<f64> },
    Hyperbolic { center: H2 },
}

impl CompressionDomain {
    pub fn tag(&self) -> String {
        match self {
            Self::Ray => "ray".into(),
            Self::Euclidean { center } => format!("euclidean{}", center.len()),
            Self::Hyperbolic { .. } => "hyperbolic".into(),
        }
    }

    fn center(&self) -> ModelPoint {
        match self {
            Self::Ray => ModelPoint::Euclidean(vec![0.0]),
            Self::Euclidean { center } => ModelPoint::Euclidean(center.clone()),
            Self::Hyperbolic { center } => ModelPoint::Hyperbolic(*center),
        }
    }
}

/// A compression `h` acting by the radial profile `ĥ` along geodesic rays
/// from a center.
#[derive(Clone, Debug, PartialEq)]
pub struct CompressionMap {
    hhat: HHat,
    domain: CompressionDomain,
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt()
}

fn point_distance(a: &ModelPoint, b: &ModelPoint) -> Result<f64, CompressionError> {
    match (a, b) {
        (ModelPoint::Euclidean(x), ModelPoint::Euclidean(y)) if x.len() == y.len() => Ok(euclid(x, y)),
        (ModelPoint::Hyperbolic(x), ModelPoint::Hyperbolic(y)) => Ok(hyperbolic::distance(x, y)),
        _ => Err(CompressionError::Metric(format!(
            "cannot measure {} against {}",
            a.tag(),
            b.tag()
        ))),
    }
}

/// Moves `p` along the geodesic ray from `center` so that its distance to
/// the center becomes `profile(d(center, p))`.
pub fn radial_profile_map(
    center: &ModelPoint,
    p: &ModelPoint,
    profile: impl Fn(f64) -> f64,
) -> Result<ModelPoint, CompressionError> {
    let r = point_distance(center, p)?;
    if r == 0.0 {
        return Ok(center.clone());
    }
    let rho = profile(r);
    if !rho.is_finite() || rho < 0.0 {
        return Err(CompressionError::InvalidInput(format!(
            "radial profile sends {r} to {rho}"
        )));
    }
    match (center, p) {
        (ModelPoint::Euclidean(c), ModelPoint::Euclidean(x)) => {
            let s = rho / r;
            Ok(ModelPoint::Euclidean(
                c.iter().zip(x).map(|(ci, xi)| ci + s * (xi - ci)).collect(),
            ))
        }
        (ModelPoint::Hyperbolic(c), ModelPoint::Hyperbolic(x)) => {
            let v = hyperbolic::log_map(c, x);
            let s = rho / r;
            Ok(ModelPoint::Hyperbolic(hyperbolic::exp_map(
                c,
                &[s * v[0], s * v[1], s * v[2]],
            )))
        }
        _ => unreachable!("point_distance checked the tags"),
    }
}

impl CompressionMap {
    pub fn new(hhat: HHat, domain: CompressionDomain) -> Result<Self, CompressionError> {
        if let CompressionDomain::Hyperbolic { center } = &domain {
            if !hyperbolic::on_hyperboloid(center, 1e-9) {
                return Err(CompressionError::InvalidInput(
                    "center is not on the hyperboloid".into(),
                ));
            }
        }
        if let CompressionDomain::Euclidean { center } = &domain {
            if center.is_empty() {
                return Err(CompressionError::InvalidInput("dimension must be positive".into()));
            }
        }
        Ok(Self { hhat, domain })
    }

    pub fn ray(hhat: HHat) -> Self {
        Self {
            hhat,
            domain: CompressionDomain::Ray,
        }
    }

    pub fn euclidean(hhat: HHat, n: usize) -> Self {
        Self {
            hhat,
            domain: CompressionDomain::Euclidean {
                center: vec![0.0; n.max(1)],
            },
        }
    }

    pub fn hyperbolic(hhat: HHat) -> Self {
        Self {
            hhat,
            domain: CompressionDomain::Hyperbolic {
                center: hyperbolic::ORIGIN,
            },
        }
    }

    pub fn hhat(&self) -> &HHat {
        &self.hhat
    }

    pub fn domain(&self) -> &CompressionDomain {
        &self.domain
    }

    pub fn center(&self) -> ModelPoint {
        self.domain.center()
    }

    /// `φ*` as a symbolic function.
    pub fn phi_star(&self) -> SublinearFn {
        self.hhat.phi_star()
    }

    pub fn phi_star_at(&self, r: f64) -> f64 {
        self.hhat.phi_star_at(r)
    }

    fn check_ray(&self, p: &ModelPoint) -> Result<(), CompressionError> {
        if let (CompressionDomain::Ray, ModelPoint::Euclidean(x)) = (&self.domain, p) {
            if x.len() != 1 || x[0] < 0.0 {
                return Err(CompressionError::InvalidInput(
                    "ray points are single nonnegative coordinates".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn compress(&self, p: &ModelPoint) -> Result<ModelPoint, CompressionError> {
        self.check_ray(p)?;
        radial_profile_map(&self.center(), p, |r| self.hhat.eval(r))
    }

    /// Inverse of [`compress`](Self::compress); fails when the preimage
    /// radius is not representable.
    pub fn decompress(&self, p: &ModelPoint) -> Result<ModelPoint, CompressionError> {
        self.check_ray(p)?;
        radial_profile_map(&self.center(), p, |r| self.hhat.inverse(r))
    }

    /// Fast path for Euclidean domains.
    pub fn compress_vec(&self, x: &[f64]) -> Result<Vec<f64>, CompressionError> {
        let c = match &self.domain {
            CompressionDomain::Euclidean { center } if center.len() == x.len() => center,
            _ => {
                return Err(CompressionError::Metric(format!(
                    "vector of length {} outside {}",
                    x.len(),
                    self.domain.tag()
                )))
            }
        };
        let r = euclid(c, x);
        if r == 0.0 {
            return Ok(c.clone());
        }
        let s = self.hhat.eval(r) / r;
        Ok(c.iter().zip(x).map(|(ci, xi)| ci + s * (xi - ci)).collect())
    }

    pub fn decompress_vec(&self, x: &[f64]) -> Result<Vec<f64>, CompressionError> {
        match self.decompress(&ModelPoint::Euclidean(x.to_vec()))? {
            ModelPoint::Euclidean(v) => Ok(v),
            _ => unreachable!(),
        }
    }
}

/// A sample for the contract check: `d(x, y) < ψ(r)` is required.
#[derive(Clone, Debug, PartialEq)]
pub struct ContractPair {
    pub x: ModelPoint,
    pub y: ModelPoint,
    pub r: f64,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ContractViolation {
    pub index: usize,
    pub r: f64,
    pub distance_before: f64,
    pub distance_after: f64,
    pub bound: f64,
    pub radius_x: f64,
    pub radius_y: f64,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ContractReport {
    pub domain: String,
    /// multiple of `φ*(R)` allowed: 1 on a ray, 4 otherwise
    pub factor: f64,
    pub tolerance: f64,
    pub pairs: usize,
    /// `max d(hx, hy) / φ*(R)`
    pub max_ratio: f64,
    pub equal_radius_pairs: usize,
    /// same ratio restricted to pairs at equal distance from the center
    pub max_equal_radius_ratio: f64,
    /// `max d(hx, hy) / (φ̄(R) + ψ₀)` with the unshifted modulus
    pub max_unshifted_ratio: f64,
    pub violations: Vec<ContractViolation>,
    pub pass: bool,
}

/// Checks `d(hx, hy) ≤ factor·φ*(R)` on every pair, with `φ*(R) = φ̄(R + κ) + ψ₀`.
/// Pairs that do not satisfy `d(x, y) < ψ(R)` are rejected as invalid input.
pub fn compression_contract_check(
    map: &CompressionMap,
    pairs: &[ContractPair],
    tolerance: f64,
) -> Result<ContractReport, CompressionError> {
    let factor = match map.domain {
        CompressionDomain::Ray => 1.0,
        _ => 4.0,
    };
    let center = map.center();
    let pair = map.hhat.pair();
    let mut report = ContractReport {
        domain: map.domain.tag(),
        factor,
        tolerance,
        pairs: pairs.len(),
        max_ratio: 0.0,
        equal_radius_pairs: 0,
        max_equal_radius_ratio: 0.0,
        max_unshifted_ratio: 0.0,
        violations: Vec::new(),
        pass: true,
    };
    for (index, p) in pairs.iter().enumerate() {
        let d = point_distance(&p.x, &p.y)?;
        if !(p.r >= 0.0) || d >= pair.psi(p.r) {
            return Err(CompressionError::InvalidInput(format!(
                "pair {index}: d = {d} is not below ψ({}) = {}",
                p.r,
                pair.psi(p.r)
            )));
        }
        let hx = map.compress(&p.x)?;
        let hy = map.compress(&p.y)?;
        let dh = point_distance(&hx, &hy)?;
        let moduli = map.hhat.moduli(p.r);
        let ratio = if moduli.shifted > 0.0 { dh / moduli.shifted } else if dh > 0.0 { f64::INFINITY } else { 0.0 };
        report.max_ratio = report.max_ratio.max(ratio);
        if moduli.unshifted > 0.0 {
            report.max_unshifted_ratio = report.max_unshifted_ratio.max(dh / moduli.unshifted);
        }
        let rx = point_distance(&center, &p.x)?;
        let ry = point_distance(&center, &p.y)?;
        if (rx - ry).abs() <= 1e-12 * rx.max(1.0) {
            report.equal_radius_pairs += 1;
            report.max_equal_radius_ratio = report.max_equal_radius_ratio.max(ratio);
        }
        let bound = factor * moduli.shifted;
        if dh > bound + tolerance * bound.max(1.0) {
            report.pass = false;
            report.violations.push(ContractViolation {
                index,
                r: p.r,
                distance_before: d,
                distance_after: dh,
                bound,
                radius_x: rx,
                radius_y: ry,
            });
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compression::{envelope, ProperFunctionPair};
    use num_rational::Rational64;

    fn r(x: i64) -> Rational64 {
        Rational64::from_integer(x)
    }

    #[test]
    fn halving_profile() {
        let c = ModelPoint::Euclidean(vec![0.0, 0.0]);
        let p = ModelPoint::Euclidean(vec![4.0, 0.0]);
        assert_eq!(
            radial_profile_map(&c, &p, |r| r / 2.0).unwrap(),
            ModelPoint::Euclidean(vec![2.0, 0.0])
        );
        assert_eq!(radial_profile_map(&c, &c, |r| r / 2.0).unwrap(), c);
    }

    #[test]
    fn hyperbolic_radius() {
        let pair = ProperFunctionPair::natural_base(r(0), r(1), r(0)).unwrap();
        let map = CompressionMap::hyperbolic(HHat::new(pair, SublinearFn::Log));
        let dir = [0.6, 0.8, 0.0];
        let s = std::f64::consts::E - 1.0;
        let p = hyperbolic::exp_map(&hyperbolic::ORIGIN, &[s * dir[0], s * dir[1], 0.0]);
        let ModelPoint::Hyperbolic(q) = map.compress(&ModelPoint::Hyperbolic(p)).unwrap() else {
            panic!()
        };
        let rho = hyperbolic::distance(&hyperbolic::ORIGIN, &q);
        assert!((rho - 2f64.ln()).abs() < 1e-12);
        // same direction: q = (sinh ρ·dir, cosh ρ)
        assert!((q[0] - rho.sinh() * 0.6).abs() < 1e-12);
        assert!((q[1] - rho.sinh() * 0.8).abs() < 1e-12);
        let back = map.decompress(&ModelPoint::Hyperbolic(q)).unwrap();
        let ModelPoint::Hyperbolic(b) = back else { panic!() };
        assert!(hyperbolic::distance(&b, &p) < 1e-9);
    }

    #[test]
    fn euclidean_circle_pairs_meet_sharper_bound() {
        let pair = envelope(&[], Some((r(2), r(3)))).unwrap();
        let map = CompressionMap::euclidean(HHat::new(pair.clone(), SublinearFn::Log), 2);
        let mut pairs = Vec::new();
        for k in 1..40 {
            let radius = 0.5 * k as f64;
            let big_r = 1.0;
            for j in 1..12 {
                let th = 0.25 * j as f64;
                let x = ModelPoint::Euclidean(vec![radius, 0.0]);
                let y = ModelPoint::Euclidean(vec![radius * th.cos(), radius * th.sin()]);
                if point_distance(&x, &y).unwrap() < pair.psi(big_r) {
                    pairs.push(ContractPair { x, y, r: big_r });
                }
            }
        }
        let rep = compression_contract_check(&map, &pairs, 1e-9).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.equal_radius_pairs, pairs.len());
        assert!(rep.max_equal_radius_ratio <= 2.0 + 1e-9);
    }

    #[test]
    fn precondition_and_identical_points() {
        let pair = ProperFunctionPair::constant_plus_linear(r(0)).unwrap();
        let map = CompressionMap::ray(HHat::new(pair, SublinearFn::Log));
        let x = ModelPoint::Euclidean(vec![3.0]);
        let same = [ContractPair { x: x.clone(), y: x.clone(), r: 0.5 }];
        let rep = compression_contract_check(&map, &same, 0.0).unwrap();
        assert_eq!(rep.max_ratio, 0.0);
        let far = [ContractPair { x, y: ModelPoint::Euclidean(vec![9.0]), r: 1.0 }];
        assert!(compression_contract_check(&map, &far, 0.0).is_err());
    }
}
