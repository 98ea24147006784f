use std::fmt;

use serde::Serialize;

use super::CompressionError;

/// Symbolic increasing functions `φ: [0,∞) → [0,∞)` used as compression
/// targets and as bounds built from them.
#[derive(Clone, Debug, PartialEq)]
pub enum SublinearFn {
    /// `φ ≡ 0`
    Zero,
    /// `log(1 + x)`
    Log,
    /// `c·x^p`; sublinear only for `p < 1`
    Power { c: f64, p: f64 },
    /// `log(1 + log(1 + x))`
    LogLog,
    /// `outer(inner(x))`
    Compose(Box<SublinearFn>, Box<SublinearFn>),
    /// `scale·inner(x + shift) + offset`
    Affine {
        inner: Box<SublinearFn>,
        scale: f64,
        shift: f64,
        offset: f64,
    },
}

impl SublinearFn {
    /// Parses `"log"`, `"loglog"`, `"zero"`, `"sqrt"`, `"pow:p"` or `"pow:p:c"`.
    pub fn parse(name: &str) -> Result<Self, CompressionError> {
        let bad = || CompressionError::InvalidInput(format!("unknown function {name:?}"));
        match name.trim() {
            "log" => Ok(Self::Log),
            "loglog" => Ok(Self::LogLog),
            "zero" | "0" => Ok(Self::Zero),
            "sqrt" => Ok(Self::Power { c: 1.0, p: 0.5 }),
            other => {
                let rest = other.strip_prefix("pow:").ok_or_else(bad)?;
                let mut parts = rest.split(':');
                let p: f64 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
                let c: f64 = match parts.next() {
                    Some(c) => c.parse().map_err(|_| bad())?,
                    None => 1.0,
                };
                if !(p > 0.0 && c > 0.0 && p.is_finite() && c.is_finite()) {
                    return Err(bad());
                }
                Ok(Self::Power { c, p })
            }
        }
    }

    pub fn affine(inner: SublinearFn, scale: f64, shift: f64, offset: f64) -> Self {
        Self::Affine {
            inner: Box::new(inner),
            scale,
            shift,
            offset,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Self::Zero => 0.0,
            Self::Log => x.ln_1p(),
            Self::Power { c, p } => c * x.powf(*p),
            Self::LogLog => x.ln_1p().ln_1p(),
            Self::Compose(o, i) => o.eval(i.eval(x)),
            Self::Affine {
                inner,
                scale,
                shift,
                offset,
            } => scale * inner.eval(x + shift) + offset,
        }
    }

    /// Derivative, used for first-order expansions at huge arguments.
    pub fn derivative(&self, x: f64) -> f64 {
        match self {
            Self::Zero => 0.0,
            Self::Log => 1.0 / (1.0 + x),
            Self::Power { c, p } => c * p * x.powf(p - 1.0),
            Self::LogLog => 1.0 / ((1.0 + x) * (1.0 + x.ln_1p())),
            Self::Compose(o, i) => o.derivative(i.eval(x)) * i.derivative(x),
            Self::Affine {
                inner, scale, shift, ..
            } => scale * inner.derivative(x + shift),
        }
    }

    /// Inverse on the range; `None` for `φ ≡ 0` or values below the range.
    pub fn inverse(&self, y: f64) -> Option<f64> {
        match self {
            Self::Zero => None,
            Self::Log => Some(y.exp_m1()),
            Self::Power { c, p } => Some((y / c).powf(1.0 / p)),
            Self::LogLog => Some(y.exp_m1().exp_m1()),
            Self::Compose(o, i) => i.inverse(o.inverse(y)?),
            Self::Affine {
                inner,
                scale,
                shift,
                offset,
            } => {
                if *scale == 0.0 {
                    return None;
                }
                Some(inner.inverse((y - offset) / scale)? - shift)
            }
        }
    }

    /// `ln φ⁻¹(y)` without overflow, for the base forms.
    pub fn ln_inverse(&self, y: f64) -> Option<f64> {
        match self {
            // ln(e^y − 1) = y + ln(1 − e^{−y})
            Self::Log if y > 0.0 => Some(y + (-(-y).exp()).ln_1p()),
            Self::Power { c, p } if y > 0.0 => Some((y / c).ln() / p),
            _ => {
                let v = self.inverse(y)?;
                (v > 0.0 && v.is_finite()).then(|| v.ln())
            }
        }
    }

    /// Modulus `φ̄(t) = max_{|x−y|=t} |φ(x) − φ(y)|` over `x, y ≥ 0`. For the
    /// concave base forms with `φ(0) = 0` it is `φ` itself.
    pub fn modulus(&self, t: f64) -> f64 {
        match self {
            Self::Zero => 0.0,
            Self::Log | Self::LogLog => self.eval(t),
            Self::Power { p, .. } if *p <= 1.0 => self.eval(t),
            Self::Power { .. } => f64::INFINITY,
            Self::Compose(o, i) => o.modulus(i.modulus(t)),
            Self::Affine { inner, scale, .. } => scale.abs() * inner.modulus(t),
        }
    }

    pub fn is_concave(&self) -> bool {
        match self {
            Self::Zero | Self::Log | Self::LogLog => true,
            Self::Power { p, .. } => *p <= 1.0,
            Self::Compose(o, i) => o.is_concave() && i.is_concave(),
            Self::Affine { inner, scale, .. } => *scale >= 0.0 && inner.is_concave(),
        }
    }

    /// Heuristic certificate that `φ(x)/x → 0`.
    pub fn certify(&self) -> Result<SublinearCertificate, CompressionError> {
        let cert = certify_sublinear(|x| self.eval(x), DEFAULT_HORIZON);
        if cert.pass {
            Ok(cert)
        } else {
            Err(CompressionError::NotSublinear(format!(
                "{self}: ratio {:.3e} at horizon {:.0e}",
                cert.ratio_at_horizon, cert.horizon
            )))
        }
    }
}

impl fmt::Display for SublinearFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Zero => write!(f, "0"),
            Self::Log => write!(f, "log(1+x)"),
            Self::Power { c, p } => write!(f, "{c}·x^{p}"),
            Self::LogLog => write!(f, "log(1+log(1+x))"),
            Self::Compose(o, i) => write!(f, "({o})∘({i})"),
            Self::Affine {
                inner,
                scale,
                shift,
                offset,
            } => write!(f, "{scale}·[{inner}](x+{shift})+{offset}"),
        }
    }
}

pub const DEFAULT_HORIZON: f64 = 1e6;
pub const DEFAULT_RATIO_THRESHOLD: f64 = 1e-2;

/// Outcome of sampling `φ(x)/x` on a geometric grid. This is evidence, not
/// a proof, and reports say so.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct SublinearCertificate {
    pub horizon: f64,
    pub threshold: f64,
    pub ratio_at_horizon: f64,
    pub decreasing_last_decade: bool,
    pub pass: bool,
    pub kind: &'static str,
}

/// Samples `φ(x)/x` at `10^{k/10}` up to `horizon`; passes when the ratio at
/// the horizon is below 10⁻² and nonincreasing over the last decade.
pub fn certify_sublinear(phi: impl Fn(f64) -> f64, horizon: f64) -> SublinearCertificate {
    let steps = (horizon.log10() * 10.0).round().max(10.0) as i32;
    let grid: Vec<f64> = (0..=steps)
        .map(|k| 10f64.powf(k as f64 / 10.0).min(horizon))
        .collect();
    let ratios: Vec<f64> = grid.iter().map(|&x| phi(x) / x).collect();
    let last = &ratios[ratios.len().saturating_sub(11)..];
    let decreasing = last
        .windows(2)
        .all(|w| w[1] <= w[0] * (1.0 + 1e-12) + 1e-300);
    let r = *ratios.last().expect("nonempty grid");
    let pass = r.is_finite() && r.abs() < DEFAULT_RATIO_THRESHOLD && decreasing;
    SublinearCertificate {
        horizon,
        threshold: DEFAULT_RATIO_THRESHOLD,
        ratio_at_horizon: r,
        decreasing_last_decade: decreasing,
        pass,
        kind: "heuristic: sampled on a geometric grid",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn certificates() {
        assert!(certify_sublinear(|x| x.ln_1p(), 1e6).pass);
        assert!(!certify_sublinear(|x| 0.5 * x, 1e6).pass);
        let star = SublinearFn::affine(SublinearFn::Log, 1.0, 1.0, 2.0);
        let c = certify_sublinear(|x| star.eval(x), 1e6);
        assert!(c.pass);
        assert!(c.ratio_at_horizon < 2.0e-5);
        assert!(SublinearFn::Power { c: 0.5, p: 1.0 }.certify().is_err());
        assert!(SublinearFn::Zero.certify().is_ok());
    }

    #[test]
    fn inverses() {
        let fns = [
            SublinearFn::Log,
            SublinearFn::LogLog,
            SublinearFn::Power { c: 2.0, p: 0.5 },
            SublinearFn::affine(SublinearFn::Log, 4.0, 1.5, 3.0),
            SublinearFn::Compose(Box::new(SublinearFn::Log), Box::new(SublinearFn::Power { c: 1.0, p: 0.5 })),
        ];
        for f in &fns {
            for x in [0.0, 0.3, 2.0, 50.0, 1e4] {
                let y = f.eval(x);
                let back = f.inverse(y).unwrap();
                assert!((back - x).abs() <= 1e-9 * x.max(1.0), "{f} at {x}");
            }
        }
        assert!((SublinearFn::Log.ln_inverse(1e6).unwrap() - 1e6).abs() < 1e-9);
    }

    #[test]
    fn names() {
        assert_eq!(SublinearFn::parse("log").unwrap(), SublinearFn::Log);
        assert_eq!(SublinearFn::parse("pow:0.5").unwrap(), SublinearFn::Power { c: 1.0, p: 0.5 });
        assert!(SublinearFn::parse("exp").is_err());
    }
}
