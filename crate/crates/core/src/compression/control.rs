use std::cmp::Ordering;

use serde::Serialize;

use super::{CompressionError, CompressionMap, SublinearFn};

/// A nonnegative defect that may be far below the smallest `f64`.
#[derive(Clone, Copy, Debug, Serialize, PartialEq)]
pub enum Defect {
    Value(f64),
    /// the natural log of the defect
    Ln(f64),
    /// `w` with defect `exp(−eʷ)`
    LnLn(f64),
}

/// Comparison key: zero, then tiny values by decreasing `ln(−ln D)`, then
/// values `≥ 1` by `ln D`.
#[derive(PartialEq, PartialOrd)]
enum Key {
    Zero,
    Tiny(f64),
    Big(f64),
}

impl Defect {
    /// Natural log; `−∞` for zero or when `exp(−eʷ)` has no finite log.
    pub fn ln(&self) -> f64 {
        match *self {
            Self::Value(v) => v.ln(),
            Self::Ln(l) => l,
            Self::LnLn(w) => -w.exp(),
        }
    }

    /// The defect as an `f64`, possibly underflowing to 0.
    pub fn value(&self) -> f64 {
        match *self {
            Self::Value(v) => v,
            _ => self.ln().exp(),
        }
    }

    fn key(&self) -> Key {
        let l = match *self {
            Self::Value(v) if v == 0.0 => return Key::Zero,
            Self::LnLn(w) => return Key::Tiny(-w),
            Self::Value(v) => v.ln(),
            Self::Ln(l) => l,
        };
        if l == f64::NEG_INFINITY {
            Key::Zero
        } else if l < 0.0 {
            Key::Tiny(-(-l).ln())
        } else {
            Key::Big(l)
        }
    }

    pub fn is_below(&self, x: f64) -> bool {
        self.partial_cmp(&Self::Value(x)) == Some(Ordering::Less)
    }
}

impl PartialOrd for Defect {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.key().partial_cmp(&other.key())
    }
}

/// `|ĥ(m·ĥ⁻¹(t))/t − 1|` for a log-precomposed map.
///
/// Writing `Y = ĥ_core⁻¹(t)`, the conjugate is `ĥ_core(Y + λ)` with
/// `λ = ln(m + (1 − m)e^{−Y})`, and on the curved branch `Y − ψ₀ = f(u)` with
/// `u = φ⁻¹(t − ψ₀)`. The increment `Δ` solving `f(u + Δ) − f(u) = λ` is found
/// without cancellation; once `C^u` overflows the defect is carried as
/// `exp(−eʷ)`.
pub fn linear_control_defect(
    map: &CompressionMap,
    m: f64,
    t: f64,
) -> Result<Defect, CompressionError> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(CompressionError::InvalidInput(format!("t = {t} must be positive")));
    }
    if !(m > 0.0 && m.is_finite()) {
        return Err(CompressionError::InvalidInput(format!("m = {m} must be positive")));
    }
    let h = map.hhat();
    if !h.is_log_precomposed() {
        return Err(CompressionError::NotCertified(
            "linear control needs the log-precomposed construction".into(),
        ));
    }
    let phi = h.phi();
    let pow_phi = match phi {
        SublinearFn::Log => None,
        SublinearFn::Power { c, p } if *p < 1.0 => Some((*c, *p)),
        other => {
            return Err(CompressionError::NotCertified(format!(
                "linear control is only evaluated for log and power targets, not {other}"
            )))
        }
    };
    if m == 1.0 {
        return Ok(Defect::Value(0.0));
    }
    let pair = h.pair();
    let psi0 = pair.psi0();
    let lambda_of = |y: f64| (m + (1.0 - m) * (-y).exp()).ln();
    let direct = |x: f64| Defect::Value((h.core(x) - t).abs() / t);

    let s = t - psi0;
    if s <= 0.0 {
        return Ok(direct(t + lambda_of(t)));
    }
    let lu = phi
        .ln_inverse(s)
        .ok_or_else(|| CompressionError::InvalidInput(format!("{t} is outside the range of ĥ")))?;
    let u = lu.exp();
    let (a, k, b) = (pair.a(), pair.c().ln(), pair.b());
    let big_a = if a == 0.0 { 0.0 } else { a * (u * k).exp() };

    // ln φ'(u)
    let ln_dphi = match pow_phi {
        None if u.is_finite() => -u.ln_1p(),
        None => -lu,
        Some((c, p)) => (c * p).ln() + (p - 1.0) * lu,
    };

    if u.is_finite() && big_a.is_finite() {
        let fu = pair.f(u);
        let y = fu + psi0;
        let lambda = lambda_of(y);
        if fu + lambda <= 0.0 {
            return Ok(direct(y + lambda));
        }
        let delta = solve_increment(big_a, k, b, lambda);
        let dh = match pow_phi {
            None => (delta / (1.0 + u)).ln_1p(),
            Some((c, p)) => c * u.powf(p) * (p * (delta / u).ln_1p()).exp_m1(),
        };
        let v = dh.abs() / t;
        if v > 0.0 {
            return Ok(Defect::Value(v));
        }
        // δh underflowed: first-order term in logs
        let slope = (big_a * k + b).ln();
        return Ok(Defect::Ln(lambda.abs().ln() + ln_dphi - slope - t.ln()));
    }

    // C^u overflows, so e^{−Y} = 0 and λ = ln m
    let ln_lambda = m.ln().abs().ln();
    if a == 0.0 {
        return Ok(Defect::Ln(ln_lambda + ln_dphi - b.ln() - t.ln()));
    }
    // −ln D = u·ln C + ln(a ln C) + ln t − ln|λ| − ln φ'(u)
    let lead = lu + k.ln();
    let rest = (a * k).ln() + t.ln() - ln_lambda - ln_dphi;
    let e = lead.exp();
    if e.is_finite() {
        Ok(Defect::Ln(-(e + rest)))
    } else {
        Ok(Defect::LnLn(lead + (rest * (-lead).exp()).ln_1p()))
    }
}

/// `ĥ(μ·ĥ⁻¹(t))`, exact to rounding even when `ĥ⁻¹(t)` overflows.
pub fn conjugate_scaling(map: &CompressionMap, mu: f64, t: f64) -> Result<f64, CompressionError> {
    if t == 0.0 || mu == 1.0 {
        return Ok(t);
    }
    let h = map.hhat();
    let x = h.inverse(t);
    if x.is_finite() && (mu * x).is_finite() {
        return Ok(h.eval(mu * x));
    }
    let d = linear_control_defect(map, mu, t)?.value();
    Ok(if mu > 1.0 { t + d * t } else { t - d * t })
}

/// `h(A·h⁻¹(y) + b)` for the radial compression `h` of ℝⁿ centred at the
/// origin. Far from the center the offset `b` is below rounding and the
/// result is the radial rescaling of `A·y`.
pub fn conjugate_affine(
    map: &CompressionMap,
    a: &[Vec<f64>],
    b: &[f64],
    y: &[f64],
) -> Result<Vec<f64>, CompressionError> {
    let r = y.iter().map(|v| v * v).sum::<f64>().sqrt();
    let h = map.hhat();
    let pre = h.inverse(r);
    let apply = |x: &[f64]| -> Vec<f64> {
        a.iter()
            .zip(b)
            .map(|(row, bi)| row.iter().zip(x).map(|(p, q)| p * q).sum::<f64>() + bi)
            .collect()
    };
    if r == 0.0 || pre.is_finite() && pre < 1e250 {
        let x: Vec<f64> = if r == 0.0 { vec![0.0; y.len()] } else { y.iter().map(|v| v * pre / r).collect() };
        return map.compress_vec(&apply(&x));
    }
    let u: Vec<f64> = y.iter().map(|v| v / r).collect();
    let au: Vec<f64> = a
        .iter()
        .map(|row| row.iter().zip(&u).map(|(p, q)| p * q).sum::<f64>())
        .collect();
    let mu = au.iter().map(|v| v * v).sum::<f64>().sqrt();
    if mu == 0.0 {
        return Err(CompressionError::InvalidInput("singular linear part".into()));
    }
    let rho = conjugate_scaling(map, mu, r)?;
    Ok(au.iter().map(|v| v / mu * rho).collect())
}

/// Root of `A·(e^{kΔ} − 1) + bΔ = λ`, by Newton from the right.
fn solve_increment(big_a: f64, k: f64, b: f64, lambda: f64) -> f64 {
    if big_a == 0.0 {
        return lambda / b;
    }
    let g = |d: f64| big_a * (k * d).exp_m1() + b * d - lambda;
    let mut d = lambda / (big_a * k + b);
    for _ in 0..200 {
        let step = g(d) / (big_a * k * (k * d).exp() + b);
        if !(step > 0.0) || step <= 1e-16 * d.abs() {
            break;
        }
        d -= step;
    }
    d
}
