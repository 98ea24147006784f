use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::affine::int_vec_to_rat;
use super::{tree_act, FiberAction, TreeVertex};
use crate::compression::{conjugate_affine, CompressionDomain, CompressionError, CompressionMap};
use crate::graph_of_groups::NormalForm;

/// Fiber coordinates: exact until a compression is applied, after which
/// they are `f64` (converted once, rounding to nearest).
#[derive(Clone, Debug, PartialEq)]
pub enum Fiber {
    Exact(Vec<BigRational>),
    Approx(Vec<f64>),
}

impl Fiber {
    pub fn dim(&self) -> usize {
        match self {
            Self::Exact(v) => v.len(),
            Self::Approx(v) => v.len(),
        }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        match self {
            Self::Exact(v) => v.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect(),
            Self::Approx(v) => v.clone(),
        }
    }
}

/// A point of `T × ℝⁿ` with its tree coordinate at a vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductPoint {
    pub vertex: TreeVertex,
    pub fiber: Fiber,
}

impl ProductPoint {
    pub fn from_ints(vertex: TreeVertex, y: &[BigInt]) -> Self {
        Self {
            vertex,
            fiber: Fiber::Exact(int_vec_to_rat(y)),
        }
    }
}

/// The diagonal action `w·(x, y) = (w·x, Θ(w)(y))`, or with a compression
/// its conjugate `(w·x, h(Θ(w)(h⁻¹ y)))`; the tree coordinate is unchanged
/// by the conjugation.
pub fn product_act(
    action: &FiberAction<'_>,
    w: &NormalForm,
    p: &ProductPoint,
    compressed: Option<&CompressionMap>,
) -> Result<ProductPoint, CompressionError> {
    let g = action.graph();
    let n = g.rank();
    if p.fiber.dim() != n {
        return Err(CompressionError::InvalidInput(format!(
            "fiber point has dimension {}, expected {n}",
            p.fiber.dim()
        )));
    }
    let theta = action.theta(w);
    let vertex = tree_act(g, w, &p.vertex);
    let fiber = match compressed {
        None => match &p.fiber {
            Fiber::Exact(y) => Fiber::Exact(theta.apply(y)),
            Fiber::Approx(y) => Fiber::Approx(theta.apply_f64(y)),
        },
        Some(map) => {
            match map.domain() {
                CompressionDomain::Euclidean { center }
                    if center.len() == n && center.iter().all(|&c| c == 0.0) => {}
                other => {
                    return Err(CompressionError::InvalidInput(format!(
                        "fiber compression must be centred at the origin of ℝ{n}, got {}",
                        other.tag()
                    )))
                }
            }
            let b: Vec<f64> = theta
                .offset()
                .iter()
                .map(|x| x.to_f64().unwrap_or(f64::NAN))
                .collect();
            Fiber::Approx(conjugate_affine(map, &theta.linear_f64(), &b, &p.fiber.to_f64())?)
        }
    };
    Ok(ProductPoint { vertex, fiber })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compression::{HHat, ProperFunctionPair, SublinearFn};
    use crate::graph_of_groups::GraphOfGroups;
    use num_rational::Rational64;

    #[test]
    fn doubling_and_compressed_growth() {
        let g = GraphOfGroups::baumslag_solitar(1, 2).unwrap();
        let act = FiberAction::new(&g);
        let t = g.parse_word("t").unwrap();
        let p = ProductPoint::from_ints(TreeVertex::base(&g), &[BigInt::from(1)]);
        let pair = ProperFunctionPair::new(
            Rational64::from_integer(1),
            Rational64::from_integer(1),
            Rational64::from_integer(2),
            Rational64::from_integer(1),
        )
        .unwrap();
        let map = CompressionMap::euclidean(HHat::new(pair, SublinearFn::Log), 1);
        let mut q = p.clone();
        let mut qc = ProductPoint {
            vertex: p.vertex.clone(),
            fiber: Fiber::Approx(map.compress_vec(&[1.0]).unwrap()),
        };
        for k in 1..=20u32 {
            q = product_act(&act, &t, &q, None).unwrap();
            assert_eq!(q.fiber, Fiber::Exact(vec![BigRational::from_integer(BigInt::from(2u64.pow(k)))]));
            assert_eq!(q.vertex.depth(), k as usize);
            qc = product_act(&act, &t, &qc, Some(&map)).unwrap();
            assert_eq!(qc.vertex, q.vertex);
            // conjugation commutes with iteration: h(2^k)
            let y = qc.fiber.to_f64()[0];
            let want = map.hhat().eval(2f64.powi(k as i32));
            assert!((y - want).abs() < 1e-9 * want.max(1.0));
            assert!(y <= map.phi_star_at(k as f64 + 1.0));
        }
        let id = g.identity();
        assert_eq!(product_act(&act, &id, &p, None).unwrap(), p);
    }
}
