use serde::Serialize;

use super::family::ProperFunctionPair;
use super::sublinear::SublinearFn;

/// The one-dimensional compression
/// `ĥ(x) = x` on `[0, ψ₀]` and `ĥ(x) = φ(f⁻¹(x − ψ₀)) + ψ₀` beyond, optionally
/// precomposed with `x ↦ log(1 + x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HHat {
    pair: ProperFunctionPair,
    phi: SublinearFn,
    log_pre: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ContractModuli {
    /// `κ = f⁻¹(ψ₀)`
    pub kappa: f64,
    /// `φ*(R) = φ̄(R + κ) + ψ₀` evaluated at the requested radius
    pub shifted: f64,
    /// `φ̄(R) + ψ₀`, the unshifted form
    pub unshifted: f64,
}

impl HHat {
    pub fn new(pair: ProperFunctionPair, phi: SublinearFn) -> Self {
        Self {
            pair,
            phi,
            log_pre: false,
        }
    }

    /// `ĥ ∘ log(1 + ·)`; still 1-Lipschitz-compatible with the same contract.
    pub fn log_precomposed(pair: ProperFunctionPair, phi: SublinearFn) -> Self {
        Self {
            pair,
            phi,
            log_pre: true,
        }
    }

    pub fn pair(&self) -> &ProperFunctionPair {
        &self.pair
    }

    pub fn phi(&self) -> &SublinearFn {
        &self.phi
    }

    pub fn is_log_precomposed(&self) -> bool {
        self.log_pre
    }

    /// The un-precomposed profile.
    pub fn core(&self, x: f64) -> f64 {
        let psi0 = self.pair.psi0();
        if x <= psi0 {
            x
        } else {
            self.phi.eval(self.pair.f_inv(x - psi0)) + psi0
        }
    }

    pub fn core_inverse(&self, y: f64) -> f64 {
        let psi0 = self.pair.psi0();
        if y <= psi0 {
            y
        } else {
            match self.phi.inverse(y - psi0) {
                Some(u) => self.pair.f(u) + psi0,
                None => f64::INFINITY,
            }
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        if self.log_pre {
            self.core(x.ln_1p())
        } else {
            self.core(x)
        }
    }

    pub fn inverse(&self, y: f64) -> f64 {
        let x = self.core_inverse(y);
        if self.log_pre {
            x.exp_m1()
        } else {
            x
        }
    }

    pub fn kappa(&self) -> f64 {
        self.pair.kappa()
    }

    /// `φ*(R) = φ̄(R + κ) + ψ₀` as a symbolic function.
    pub fn phi_star(&self) -> SublinearFn {
        SublinearFn::affine(self.phi.clone(), 1.0, self.kappa(), self.pair.psi0())
    }

    pub fn phi_star_at(&self, r: f64) -> f64 {
        self.phi.modulus(r + self.kappa()) + self.pair.psi0()
    }

    pub fn moduli(&self, r: f64) -> ContractModuli {
        ContractModuli {
            kappa: self.kappa(),
            shifted: self.phi_star_at(r),
            unshifted: self.phi.modulus(r) + self.pair.psi0(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    fn r(x: i64) -> Rational64 {
        Rational64::from_integer(x)
    }

    #[test]
    fn natural_exponential_profile() {
        let pair = ProperFunctionPair::natural_base(r(0), r(1), r(0)).unwrap();
        let h = HHat::new(pair, SublinearFn::Log);
        assert!((h.eval(std::f64::consts::E - 1.0) - 2f64.ln()).abs() < 1e-12);
        assert_eq!(h.eval(0.0), 0.0);
    }

    #[test]
    fn identity_branch_and_continuity() {
        let pair = ProperFunctionPair::new(r(2), r(2), r(3), r(1)).unwrap();
        let h = HHat::new(pair, SublinearFn::Log);
        assert_eq!(h.eval(1.5), 1.5);
        assert_eq!(h.eval(2.0), 2.0);
        assert!((h.eval(2.0 + 1e-12) - 2.0).abs() < 1e-11);
        for x in [0.1, 2.5, 10.0, 1e5] {
            assert!((h.inverse(h.eval(x)) - x).abs() < 1e-8 * x.max(1.0));
        }
    }
}
