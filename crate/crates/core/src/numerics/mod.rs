//! Numerical kernels: adaptive quadrature, bracketed root finding, an
//! embedded Runge–Kutta integrator and the Gamma function.
//!
//! Everything here is a pure function of its inputs and works in `f64`.

mod gamma;
mod ode;
mod quadrature;
mod roots;

pub use gamma::gamma_fn;
pub use ode::{ode_solve, Dopri5};
pub use quadrature::integrate;
pub use roots::{expand_bracket, find_root, try_expand_bracket, try_find_root, Bracket, Direction};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Accuracy contract shared by the kernels.
///
/// `abs_tol` and `rel_tol` combine as `max(abs_tol, rel_tol * |value|)`.
/// `max_iter` bounds root-finder iterations and bracket doublings,
/// `max_subdiv` bounds the number of quadrature panels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_iter: usize,
    pub max_subdiv: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { abs_tol: 1e-12, rel_tol: 1e-12, max_iter: 200, max_subdiv: 2000 }
    }
}

impl Tolerance {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Result<Self> {
        Tolerance { abs_tol, rel_tol, ..Default::default() }.validated()
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn with_max_subdiv(mut self, max_subdiv: usize) -> Self {
        self.max_subdiv = max_subdiv;
        self
    }

    /// Checks the invariants `abs_tol > 0`, `rel_tol >= 0`, `max_iter >= 1`.
    pub fn validated(self) -> Result<Self> {
        if !(self.abs_tol > 0.0) || !self.abs_tol.is_finite() {
            return Err(Error::Domain(format!("abs_tol must be positive, got {}", self.abs_tol)));
        }
        if !(self.rel_tol >= 0.0) || !self.rel_tol.is_finite() {
            return Err(Error::Domain(format!("rel_tol must be non-negative, got {}", self.rel_tol)));
        }
        if self.max_iter == 0 || self.max_subdiv == 0 {
            return Err(Error::Domain("max_iter and max_subdiv must be at least 1".into()));
        }
        Ok(self)
    }

    /// The admissible error for a quantity of magnitude `value`.
    pub fn bound(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_tolerance_matches_contract() {
        let t = Tolerance::default();
        assert_eq!((t.abs_tol, t.rel_tol, t.max_iter, t.max_subdiv), (1e-12, 1e-12, 200, 2000));
        assert!(t.validated().is_ok());
    }

    #[test]
    fn invalid_tolerances_are_rejected() {
        assert!(Tolerance::new(0.0, 1e-12).is_err());
        assert!(Tolerance::new(1e-12, -1.0).is_err());
        assert!(Tolerance::new(f64::NAN, 0.0).is_err());
        assert!(Tolerance::default().with_max_iter(0).validated().is_err());
    }
}
