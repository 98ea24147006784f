use std::fmt;

use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::CompressionError;

/// Parses `"p/q"`, an integer, or a finite decimal such as `"1.25"` exactly.
pub fn parse_rational(s: &str) -> Result<Rational64, CompressionError> {
    let s = s.trim();
    let bad = || CompressionError::InvalidInput(format!("not a rational number: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| bad())?;
        let q: i64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        return Ok(Rational64::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.len() > 15 || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = int.trim_start().starts_with('-');
        let int: i64 = if int.is_empty() || int == "-" { 0 } else { int.parse().map_err(|_| bad())? };
        let den = 10i64.pow(frac.len() as u32);
        let num: i64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        let mag = int.abs().checked_mul(den).and_then(|x| x.checked_add(num)).ok_or_else(bad)?;
        return Ok(Rational64::new(if neg { -mag } else { mag }, den));
    }
    s.parse::<i64>().map(Rational64::from_integer).map_err(|_| bad())
}

/// Smallest dyadic rational with denominator `2^20` that is `≥ x`.
pub fn rational_at_least(x: f64) -> Rational64 {
    let den = 1i64 << 20;
    let num = (x * den as f64).ceil() as i64;
    let r = Rational64::new(num, den);
    if r.to_f64().unwrap_or(f64::INFINITY) < x {
        Rational64::new(num + 1, den)
    } else {
        r
    }
}

/// A proper bound `ψ(R) = ψ₀ + f(R)` with `f(x) = a·(Cˣ − 1) + b·x`.
///
/// `f` is convex with `f(0) = 0` and `f'(0) = a·ln C + b ≥ 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProperFunctionPair {
    psi0: Rational64,
    a: Rational64,
    c: Rational64,
    b: Rational64,
    fl: [f64; 4],
}

impl ProperFunctionPair {
    pub fn new(
        psi0: Rational64,
        a: Rational64,
        c: Rational64,
        b: Rational64,
    ) -> Result<Self, CompressionError> {
        let f = |r: Rational64| r.to_f64().unwrap_or(f64::NAN);
        let fl = [f(psi0), f(a), f(c), f(b)];
        let [p, af, cf, bf] = fl;
        if p < 0.0 || af < 0.0 || bf < 0.0 {
            return Err(CompressionError::InvalidFamily(
                "psi0, a and b must be nonnegative".into(),
            ));
        }
        if cf <= 1.0 {
            return Err(CompressionError::InvalidFamily("C must exceed 1".into()));
        }
        if af * cf.ln() + bf < 1.0 - 1e-15 {
            return Err(CompressionError::InvalidFamily(format!(
                "derivative at 0 is a·ln C + b = {} < 1",
                af * cf.ln() + bf
            )));
        }
        Ok(Self { psi0, a, c, b, fl })
    }

    /// Member with base `C = e` evaluated exactly in floating point. The
    /// stored rational `C` is the approximation 27183/10000 used only when
    /// serializing.
    pub fn natural_base(
        psi0: Rational64,
        a: Rational64,
        b: Rational64,
    ) -> Result<Self, CompressionError> {
        let mut p = Self::new(psi0, a, Rational64::new(27183, 10000), b)?;
        p.fl[2] = std::f64::consts::E;
        Ok(p)
    }

    /// `ψ₀ + R`, the smallest member for a constant bound.
    pub fn constant_plus_linear(psi0: Rational64) -> Result<Self, CompressionError> {
        Self::new(psi0, Rational64::zero(), Rational64::from_integer(2), Rational64::from_integer(1))
    }

    pub fn psi0(&self) -> f64 {
        self.fl[0]
    }
    pub fn a(&self) -> f64 {
        self.fl[1]
    }
    pub fn c(&self) -> f64 {
        self.fl[2]
    }
    pub fn b(&self) -> f64 {
        self.fl[3]
    }

    pub fn rationals(&self) -> [Rational64; 4] {
        [self.psi0, self.a, self.c, self.b]
    }

    /// Convex part `f`.
    pub fn f(&self, x: f64) -> f64 {
        let [_, a, c, b] = self.fl;
        if a == 0.0 {
            b * x
        } else {
            a * (x * c.ln()).exp_m1() + b * x
        }
    }

    pub fn f_prime(&self, x: f64) -> f64 {
        let [_, a, c, b] = self.fl;
        a * c.ln() * (x * c.ln()).exp() + b
    }

    pub fn psi(&self, r: f64) -> f64 {
        self.psi0() + self.f(r)
    }

    /// `f⁻¹(y)` for `y ≥ 0`: closed form when `a = 0` or `b = 0`, otherwise
    /// Newton from the right, which converges monotonically for convex `f`.
    pub fn f_inv(&self, y: f64) -> f64 {
        let [_, a, c, b] = self.fl;
        if y <= 0.0 {
            return 0.0;
        }
        if a == 0.0 {
            return y / b;
        }
        let exp_only = (y / a).ln_1p() / c.ln();
        if b == 0.0 {
            return exp_only;
        }
        let mut x = exp_only.min(y / b);
        for _ in 0..200 {
            let step = (self.f(x) - y) / self.f_prime(x);
            let next = (x - step).max(0.0);
            if !(next < x) || x - next <= 1e-15 * x.max(1e-300) {
                x = next.min(x);
                break;
            }
            x = next;
        }
        if (self.f(x) - y).abs() > 1e-12 * y.max(1.0) {
            // fall back to bisection
            let (mut lo, mut hi) = (0.0, exp_only.min(y / b));
            for _ in 0..400 {
                let mid = 0.5 * (lo + hi);
                if self.f(mid) < y {
                    lo = mid
                } else {
                    hi = mid
                }
                if hi - lo <= 1e-12 * hi.max(1e-300) {
                    break;
                }
            }
            x = 0.5 * (lo + hi);
        }
        x
    }

    /// `κ = f⁻¹(ψ₀)`.
    pub fn kappa(&self) -> f64 {
        self.f_inv(self.psi0())
    }
}

impl fmt::Display for ProperFunctionPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ψ(R) = {} + {}·({}^R − 1) + {}·R",
            self.psi0, self.a, self.c, self.b
        )
    }
}

#[derive(Serialize, Deserialize)]
struct PairRepr {
    psi0: String,
    a: String,
    #[serde(rename = "C")]
    c: String,
    b: String,
}

impl Serialize for ProperFunctionPair {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PairRepr {
            psi0: self.psi0.to_string(),
            a: self.a.to_string(),
            c: self.c.to_string(),
            b: self.b.to_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ProperFunctionPair {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let r = PairRepr::deserialize(d)?;
        let p = |s: &str| parse_rational(s).map_err(D::Error::custom);
        ProperFunctionPair::new(p(&r.psi0)?, p(&r.a)?, p(&r.c)?, p(&r.b)?).map_err(D::Error::custom)
    }
}

/// Majorizes `(R, bound)` samples by a family member. With a hint `(D, C)`
/// the result is `ψ₀ = D`, `f(R) = D·(C^R − 1) + R`, so `ψ(R) ≥ D·C^R` for all
/// `R ≥ 0`; `ψ₀` is raised further if a sample still exceeds `ψ`. Without a
/// hint the result is `ψ₀ = max bound`, `f(R) = R`.
pub fn envelope(
    samples: &[(f64, f64)],
    hint: Option<(Rational64, Rational64)>,
) -> Result<ProperFunctionPair, CompressionError> {
    if let Some(&(r, v)) = samples
        .iter()
        .find(|(r, v)| !(r.is_finite() && v.is_finite() && *r >= 0.0 && *v >= 0.0))
    {
        return Err(CompressionError::Fit(format!(
            "sample (R={r}, bound={v}) is not a finite nonnegative pair"
        )));
    }
    let pair = match hint {
        Some((d, c)) => {
            if c <= Rational64::from_integer(1) {
                return Err(CompressionError::InvalidFamily("hint C must exceed 1".into()));
            }
            if d < Rational64::zero() {
                return Err(CompressionError::InvalidFamily("hint D must be nonnegative".into()));
            }
            ProperFunctionPair::new(d, d, c, Rational64::from_integer(1))?
        }
        None => {
            let top = samples.iter().map(|&(_, v)| v).fold(0.0f64, f64::max);
            ProperFunctionPair::constant_plus_linear(rational_at_least(top))?
        }
    };
    let excess = samples
        .iter()
        .map(|&(r, v)| v - pair.psi(r))
        .fold(0.0f64, f64::max);
    if excess > 0.0 {
        let [psi0, a, c, b] = pair.rationals();
        let raised = psi0 + rational_at_least(excess);
        return ProperFunctionPair::new(raised, a, c, b);
    }
    Ok(pair)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: i64) -> Rational64 {
        Rational64::from_integer(x)
    }

    #[test]
    fn hint_envelope_majorizes_exponential() {
        let p = envelope(&[], Some((r(2), r(3)))).unwrap();
        assert_eq!(p.rationals(), [r(2), r(2), r(3), r(1)]);
        for k in 0..200 {
            let x = k as f64 * 0.1;
            assert!(p.psi(x) >= 2.0 * 3f64.powf(x) * (1.0 - 1e-14));
        }
    }

    #[test]
    fn sample_only_envelopes() {
        let p = envelope(&[(0.0, 0.0), (3.0, 0.0)], None).unwrap();
        assert_eq!(p.rationals(), [r(0), r(0), r(2), r(1)]);
        let p = envelope(&[(1.0, 10.0)], None).unwrap();
        assert_eq!(p.psi0(), 10.0);
        assert_eq!(p.f(7.0), 7.0);
        assert!(envelope(&[(1.0, f64::NAN)], None).is_err());
    }

    #[test]
    fn inverse_roundtrip() {
        let p = ProperFunctionPair::new(r(2), r(2), r(3), r(1)).unwrap();
        for y in [0.0, 1e-9, 0.5, 3.0, 1e3, 1e12, 1e200] {
            let x = p.f_inv(y);
            assert!((p.f(x) - y).abs() <= 1e-12 * y.max(1.0), "{y}");
        }
        let q = ProperFunctionPair::natural_base(r(0), r(1), r(0)).unwrap();
        assert!((q.f_inv(std::f64::consts::E - 1.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn derivative_condition_enforced() {
        assert!(ProperFunctionPair::new(r(0), Rational64::new(1, 2), r(2), r(0)).is_err());
        assert!(ProperFunctionPair::new(r(0), r(0), r(2), Rational64::new(1, 2)).is_err());
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("3/4").unwrap(), Rational64::new(3, 4));
        assert_eq!(parse_rational("1.25").unwrap(), Rational64::new(5, 4));
        assert_eq!(parse_rational("-0.5").unwrap(), Rational64::new(-1, 2));
        assert_eq!(parse_rational("7").unwrap(), r(7));
        assert!(parse_rational("x").is_err());
        let json = r#"{"psi0":"2","a":"2","C":"3","b":"1"}"#;
        let p: ProperFunctionPair = serde_json::from_str(json).unwrap();
        assert_eq!(serde_json::to_string(&p).unwrap(), json);
    }
}
