use serde::Serialize;

use crate::error::{Error, Result};

/// Smallest admissible distance of `a` from the degenerate value 1/2.
pub const A_GUARD: f64 = 1e-9;

/// Above this `|s|` the profile switches to log-domain evaluation.
pub const LOG_DOMAIN_S: f64 = 300.0;

/// The family parameter `a > 1/2` and the derived constant `K = sqrt(a^2 - 1/4)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CatenoidParams {
    a: f64,
    #[serde(rename = "K")]
    k: f64,
}

/// Builds validated parameters.
///
/// ```
/// let p = catenoid::geometry::make_params(1.0).unwrap();
/// assert!((p.k() - 3f64.sqrt() / 2.0).abs() < 1e-15);
/// assert!(catenoid::geometry::make_params(0.4).is_err());
/// ```
pub fn make_params(a: f64) -> Result<CatenoidParams> {
    if !a.is_finite() || !(a > 0.5 + A_GUARD) {
        return Err(Error::Domain(format!("the family parameter must satisfy a > 1/2 (+{A_GUARD:e}), got a = {a}")));
    }
    // a - 1/2 is exact for a near 1/2, so K keeps full relative accuracy.
    let k = ((a - 0.5) * (a + 0.5)).sqrt();
    Ok(CatenoidParams { a, k })
}

impl CatenoidParams {
    pub fn a(&self) -> f64 {
        self.a
    }

    /// `K(a) = sqrt(a^2 - 1/4)`.
    pub fn k(&self) -> f64 {
        self.k
    }

    /// `eps = a - 1/2`, the distance to the degenerate limit.
    pub fn eps(&self) -> f64 {
        self.a - 0.5
    }

    /// `B(s)^2 = a cosh(2s) - 1/2`, written as `eps + 2a sinh(s)^2`.
    pub fn b_sq(&self, s: f64) -> f64 {
        let sh = s.sinh();
        self.eps() + 2.0 * self.a * sh * sh
    }

    /// `(A(s), B(s))`; infinite once `e^{2|s|}` overflows.
    pub fn ab(&self, s: f64) -> (f64, f64) {
        if s.abs() > LOG_DOMAIN_S {
            let (la, lb) = self.log_ab(s);
            return (la.exp(), lb.exp());
        }
        let b2 = self.b_sq(s);
        ((1.0 + b2).sqrt(), b2.sqrt())
    }

    /// `(ln A(s), ln B(s))`, accurate for every `s`.
    pub fn log_ab(&self, s: f64) -> (f64, f64) {
        let t = s.abs();
        if t <= LOG_DOMAIN_S {
            let b2 = self.b_sq(s);
            return (0.5 * (1.0 + b2).ln(), 0.5 * b2.ln());
        }
        let base = (0.5 * self.a).ln() + 2.0 * t;
        let e4 = (-4.0 * t).exp();
        let e2 = (-2.0 * t).exp() / self.a;
        (0.5 * (base + (e4 + e2).ln_1p()), 0.5 * (base + (e4 - e2).ln_1p()))
    }

    /// `a sinh(2s)`, the common numerator of `A'` and `B'`.
    pub fn a_sinh2s(&self, s: f64) -> f64 {
        self.a * (2.0 * s).sinh()
    }

    pub fn a_prime(&self, s: f64) -> f64 {
        self.a_sinh2s(s) / self.ab(s).0
    }

    pub fn b_prime(&self, s: f64) -> f64 {
        self.a_sinh2s(s) / self.ab(s).1
    }

    /// `B''` differentiated directly from `B' = a sinh(2s)/B`.
    pub fn b_second(&self, s: f64) -> f64 {
        let b = self.ab(s).1;
        let num = self.a_sinh2s(s);
        2.0 * self.a * (2.0 * s).cosh() / b - num * num / (b * b * b)
    }

    /// `|II|^2 = 2K^2 / B^4`.
    pub fn ii_sq(&self, s: f64) -> f64 {
        let b2 = self.b_sq(s);
        2.0 * self.k * self.k / (b2 * b2)
    }

    /// The integrand `phi'(s) = K / (A^2 B)`.
    pub fn phi_density(&self, s: f64) -> f64 {
        if s.abs() > LOG_DOMAIN_S {
            let (la, lb) = self.log_ab(s);
            return self.k * (-(2.0 * la + lb)).exp();
        }
        let b2 = self.b_sq(s);
        self.k / ((1.0 + b2) * b2.sqrt())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_values() {
        assert!((make_params(1.0).unwrap().k() - 0.866_025_403_784_438_6).abs() < 1e-15);
        let p = make_params(0.5 + 1e-6).unwrap();
        assert!((p.k() - 1.000_000_5e-3).abs() < 1e-12);
    }

    #[test]
    fn guard() {
        assert!(make_params(0.4).unwrap_err().is_domain());
        assert!(make_params(0.5).is_err());
        assert!(make_params(0.5 + 5e-10).is_err());
        assert!(make_params(f64::NAN).is_err());
        assert!(make_params(f64::INFINITY).is_err());
    }

    #[test]
    fn k_invariant() {
        for a in [0.51, 0.6, 1.0, 7.5, 1e4, 1e6] {
            let p = make_params(a).unwrap();
            assert!((p.k() * p.k() - (a * a - 0.25)).abs() <= 1e-15 * a * a);
        }
    }

    #[test]
    fn origin_values() {
        let p = make_params(1.0).unwrap();
        let (a, b) = p.ab(0.0);
        assert!((a - 1.5f64.sqrt()).abs() < 1e-15);
        assert!((b - 0.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(p.a_prime(0.0), 0.0);
        assert_eq!(p.b_prime(0.0), 0.0);
        assert!((p.ii_sq(0.0) - 6.0).abs() < 1e-14);
    }

    #[test]
    fn log_domain_matches_direct() {
        let p = make_params(3.0).unwrap();
        for s in [250.0, 299.0] {
            let (la, lb) = p.log_ab(s);
            let base = (0.5 * p.a()).ln() + 2.0 * s;
            assert!((2.0 * la - base).abs() < 1e-12);
            assert!((2.0 * lb - base).abs() < 1e-12);
        }
        let (la, lb) = p.log_ab(400.0);
        assert!(la >= lb);
        assert!((2.0 * lb - ((1.5f64).ln() + 800.0)).abs() < 1e-12);
        assert!(p.phi_density(400.0) >= 0.0);
    }
}
