use serde::Serialize;

use super::ObstructionError;
use crate::compression::SublinearFn;

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct DavisIndex {
    pub n: u64,
    /// `½(n/K − ε − R)`
    pub inner_radius: f64,
    /// `φ(2(K(n + S + 1) + ε + R))`
    pub compressed_radius: f64,
}

const SCAN_LIMIT: u64 = 100_000_000;

/// Least `n` at which a quasi-isometry `(K, ε)` with `R`-dense image and
/// chamber offset `S` would force the compressed image of the `n`-ball of
/// radius `φ(2(K(n+S+1)+ε+R))` to be strictly inside half the guaranteed
/// inner ball, with `R` also below that half radius.
pub fn davis_index(k: f64, eps: f64, r: f64, s: u64, phi: &SublinearFn) -> Result<DavisIndex, ObstructionError> {
    phi.certify()?;
    let ok = |x: f64| x.is_finite() && x >= 0.0;
    if !(k >= 1.0 && k.is_finite() && ok(eps) && ok(r) && r > 0.0) {
        return Err(ObstructionError::InvalidInput(format!(
            "need K ≥ 1, ε ≥ 0 and R > 0 finite (K = {k}, ε = {eps}, R = {r})"
        )));
    }
    for n in 1..SCAN_LIMIT {
        let nf = n as f64;
        let inner = 0.5 * (nf / k - eps - r);
        if r >= inner {
            continue;
        }
        let outer = phi.eval(2.0 * (k * (nf + s as f64 + 1.0) + eps + r));
        if outer < inner {
            return Ok(DavisIndex {
                n,
                inner_radius: inner,
                compressed_radius: outer,
            });
        }
    }
    Err(ObstructionError::ScanLimit(SCAN_LIMIT))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn oracle(k: f64, eps: f64, r: f64, s: f64, phi: impl Fn(f64) -> f64) -> u64 {
        (1..10_000u64)
            .find(|&n| {
                let h = (n as f64 / k - eps - r) / 2.0;
                r < h && phi(2.0 * (k * (n as f64 + s + 1.0) + eps + r)) < h
            })
            .unwrap()
    }

    #[test]
    fn agrees_with_direct_scan() {
        let log = davis_index(1.0, 0.0, 1.0, 0, &SublinearFn::Log).unwrap();
        assert_eq!(log.n, oracle(1.0, 0.0, 1.0, 0.0, f64::ln_1p));
        let zero = davis_index(1.0, 0.0, 1.0, 0, &SublinearFn::Zero).unwrap();
        assert_eq!(zero.n, oracle(1.0, 0.0, 1.0, 0.0, |_| 0.0));
        let sqrt = SublinearFn::Power { c: 1.0, p: 0.5 };
        let big = davis_index(2.0, 1.0, 2.0, 3, &sqrt).unwrap();
        assert_eq!(big.n, oracle(2.0, 1.0, 2.0, 3.0, f64::sqrt));
        assert!(big.compressed_radius < big.inner_radius);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(davis_index(0.5, 0.0, 1.0, 0, &SublinearFn::Log).is_err());
        assert!(davis_index(1.0, 0.0, 0.0, 0, &SublinearFn::Log).is_err());
        assert!(davis_index(1.0, 0.0, 1.0, 0, &SublinearFn::Power { c: 1.0, p: 1.0 }).is_err());
    }
}
