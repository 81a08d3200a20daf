use serde::Serialize;

use crate::error::Result;
use crate::free_boundary::{radius, FreeBoundarySolution};
use crate::geometry::CatenoidParams;
use crate::numerics::Tolerance;

/// The mode-`k` radial Robin problem
/// `-(B f')' + B (2 + k^2/B^2 - |II|^2) f = mu B f` on `[-s0, s0]`,
/// with outward derivative `coth(r) f` at both ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SLProblem {
    pub params: CatenoidParams,
    pub k: u32,
    pub s0: f64,
    pub robin_coef: f64,
    pub boundary: FreeBoundarySolution,
}

/// Assembles the mode-`k` problem from the free-boundary solution.
pub fn build_problem(params: &CatenoidParams, k: u32, tol: &Tolerance) -> Result<SLProblem> {
    let boundary = radius(params, tol)?;
    Ok(problem_from_boundary(params, k, boundary))
}

/// Assembles a problem from an already solved boundary; reused across modes.
pub fn problem_from_boundary(params: &CatenoidParams, k: u32, boundary: FreeBoundarySolution) -> SLProblem {
    SLProblem { params: *params, k, s0: boundary.s0, robin_coef: boundary.robin_coef(), boundary }
}

impl SLProblem {
    /// `p(s) = B(s)`.
    pub fn leading(&self, s: f64) -> f64 {
        self.params.ab(s).1
    }

    /// `w(s) = B(s)`.
    pub fn weight(&self, s: f64) -> f64 {
        self.params.ab(s).1
    }

    /// `q(s) = B (2 + k^2/B^2 - |II|^2) = 2B + k^2/B - 2K^2/B^3`.
    pub fn potential(&self, s: f64) -> f64 {
        let b = self.params.ab(s).1;
        let kk = self.params.k();
        let m = self.k as f64;
        2.0 * b + m * m / b - 2.0 * kk * kk / (b * b * b)
    }
}
