use num_rational::Rational64;
use serde::Serialize;

use super::{NullityError, TranslateStats};
use crate::compression::{envelope, rational_at_least, ProperFunctionPair, SublinearFn};
use crate::metric_models::{sublinear_ball_threshold, CoverConstants};

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct FitReport {
    /// `S* = max diam π_X(gK)`
    pub s_star: usize,
    #[serde(rename = "D")]
    pub d: String,
    #[serde(rename = "C")]
    pub c: String,
    pub pair: ProperFunctionPair,
    pub points: usize,
    /// translate attaining `D` at the chosen `C`
    pub binding: String,
    #[serde(skip)]
    pub d_rational: Rational64,
    #[serde(skip)]
    pub c_rational: Rational64,
}

const C_GRID_DEN: i64 = 16;
const C_GRID_MAX: i64 = 16 * C_GRID_DEN;

/// Majorizes `(R, diam π_Y(gK))` with `R = d(t₀, π_X(gK)) + diam π_X(gK)` by
/// `D·C^R`, with `C` on the grid `j/16 ∈ (1, 16]`. The chosen `C` minimizes
/// the majorant at the largest observed `R`; ties go to the smaller `D`,
/// then the smaller `C`.
pub fn fit_psi(stats: &[TranslateStats]) -> Result<FitReport, NullityError> {
    if stats.is_empty() {
        return Err(NullityError::InvalidInput("no translate statistics".into()));
    }
    let s_star = stats.iter().map(|s| s.tree_diam).max().unwrap_or(0);
    let pts: Vec<(f64, f64, &str)> = stats
        .iter()
        .map(|s| (s.tree_reach() as f64, s.fiber_diam, s.rep.as_str()))
        .collect();
    if let Some(p) = pts.iter().find(|p| !p.1.is_finite()) {
        return Err(NullityError::Fit(format!("fiber diameter of {} is not finite", p.2)));
    }
    let r_max = pts.iter().map(|p| p.0).fold(0.0, f64::max);
    let mut best: Option<(f64, f64, i64, usize)> = None;
    for j in C_GRID_DEN + 1..=C_GRID_MAX {
        let c = j as f64 / C_GRID_DEN as f64;
        let (mut d, mut arg) = (0.0f64, 0usize);
        for (i, &(r, v, _)) in pts.iter().enumerate() {
            let need = v / c.powf(r);
            if need > d {
                d = need;
                arg = i;
            }
        }
        let score = d * c.powf(r_max);
        let better = match best {
            None => true,
            Some((bs, bd, _, _)) => {
                let tol = 1e-9 * bs.max(score);
                score < bs - tol || ((score - bs).abs() <= tol && d < bd * (1.0 - 1e-12))
            }
        };
        if better {
            best = Some((score, d, j, arg));
        }
    }
    let (_, d, j, arg) = best.expect("grid is nonempty");
    if j == C_GRID_MAX && r_max > 0.0 {
        return Err(NullityError::Fit(format!(
            "growth reaches the top of the grid (C = {}) at {}",
            C_GRID_MAX / C_GRID_DEN,
            pts[arg].2
        )));
    }
    let c_rational = Rational64::new(j, C_GRID_DEN);
    let d_rational = rational_at_least(d);
    let samples: Vec<(f64, f64)> = pts.iter().map(|&(r, v, _)| (r, v)).collect();
    let pair = envelope(&samples, Some((d_rational, c_rational)))?;
    Ok(FitReport {
        s_star,
        d: d_rational.to_string(),
        c: c_rational.to_string(),
        pair,
        points: pts.len(),
        binding: pts[arg].2.to_string(),
        d_rational,
        c_rational,
    })
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct BoundViolation {
    pub rep: String,
    pub tree_dist: usize,
    pub tree_diam: usize,
    pub fiber_diam: f64,
    pub fiber_bound: f64,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct NullityCertificate {
    pub kind: &'static str,
    pub wordlen: usize,
    pub s_star: usize,
    /// threshold past which ball bounds force a single cover element
    pub t_star: f64,
    pub translates: usize,
    pub far_translates: usize,
    /// translates with `d(t₀, π_X(gK)) ≤ T*`
    pub exceptional: Vec<String>,
    pub violations: Vec<BoundViolation>,
    pub pass: bool,
}

/// Certifies the nullity condition within the enumerated ball: each
/// translate must satisfy `diam π_X ≤ 2S*` and
/// `diam π_Y ≤ 4φ*(d(t₀, π_X(gK)) + diam π_X(gK))`; beyond
/// `T* = sublinear_ball_threshold(2S* + 4φ*)` such a translate lies in one
/// cover element. The bounds are checked on every translate, near or far.
pub fn nullity_certify(
    stats: &[TranslateStats],
    consts: &CoverConstants,
    phi_star: &SublinearFn,
    wordlen: usize,
) -> Result<NullityCertificate, NullityError> {
    let s_star = stats.iter().map(|s| s.tree_diam).max().unwrap_or(0);
    let bound = SublinearFn::affine(phi_star.clone(), 4.0, 0.0, 2.0 * s_star as f64);
    let t_star = sublinear_ball_threshold(consts, &bound, 1.0)?;
    let mut violations = Vec::new();
    let mut exceptional = Vec::new();
    let mut far = 0;
    for s in stats {
        let fiber_bound = 4.0 * phi_star.eval(s.tree_reach() as f64);
        if s.fiber_diam > fiber_bound * (1.0 + 1e-9) + 1e-9 || s.tree_diam > 2 * s_star {
            violations.push(BoundViolation {
                rep: s.rep.clone(),
                tree_dist: s.tree_dist,
                tree_diam: s.tree_diam,
                fiber_diam: s.fiber_diam,
                fiber_bound,
            });
        }
        if s.tree_dist as f64 > t_star {
            far += 1;
        } else {
            exceptional.push(s.rep.clone());
        }
    }
    Ok(NullityCertificate {
        kind: "bounded verification within the enumerated ball; affine fiber action",
        wordlen,
        s_star,
        t_star,
        translates: stats.len(),
        far_translates: far,
        exceptional,
        pass: violations.is_empty(),
        violations,
    })
}
