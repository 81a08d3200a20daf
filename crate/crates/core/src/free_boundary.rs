//! The free-boundary condition `tanh phi(s) = B K / (a sinh 2s)`: its root
//! `s0(a)`, the boundary radius `r(a)` and residual diagnostics.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{phi, unit_normal, CatenoidParams, LOG_DOMAIN_S};
use crate::numerics::{try_expand_bracket, try_find_root, Bracket, Direction, Tolerance};

/// Largest bracket width accepted for `s0`, relative to `1 + s0`.
pub const S0_ROOT_TOL: f64 = 1e-13;

// Rough leading terms of s0 in the two limits, used only to seed the bracket.
const SEED_RHO: f64 = 1.5;
const SEED_SHIFT: f64 = 0.86;

/// Above this value of `A cosh phi` the radius is evaluated in log form.
const LOG_RADIUS_X: f64 = 1e8;

/// `R(s) = B K / (a sinh 2s)`, strictly decreasing on `s > 0`.
pub fn boundary_ratio(params: &CatenoidParams, s: f64) -> f64 {
    if s > LOG_DOMAIN_S {
        let (_, lb) = params.log_ab(s);
        let ln_sinh2 = 2.0 * s - std::f64::consts::LN_2 + (-(-4.0 * s).exp()).ln_1p();
        return params.k() * (lb - params.a().ln() - ln_sinh2).exp();
    }
    params.ab(s).1 * params.k() / params.a_sinh2s(s)
}

/// `tanh phi(s) - R(s)`; negative near `0+`, positive for large `s`.
///
/// ```
/// use catenoid::free_boundary::fb_residual;
/// use catenoid::geometry::make_params;
/// use catenoid::numerics::Tolerance;
/// let p = make_params(1.0).unwrap();
/// assert!(fb_residual(&p, 0.1, &Tolerance::default()).unwrap() < 0.0);
/// assert!(fb_residual(&p, 10.0, &Tolerance::default()).unwrap() > 0.0);
/// ```
pub fn fb_residual(params: &CatenoidParams, s: f64, tol: &Tolerance) -> Result<f64> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::Domain(format!("the free-boundary residual needs s > 0, got {s}")));
    }
    Ok(phi(params, s, tol)?.tanh() - boundary_ratio(params, s))
}

fn seed_guess(params: &CatenoidParams) -> f64 {
    let eps = params.eps();
    if eps < 0.25 {
        SEED_RHO * eps.sqrt()
    } else {
        params.a().ln() + SEED_SHIFT
    }
}

/// The unique positive root `s0(a)` of [`fb_residual`].
pub fn solve_s0(params: &CatenoidParams, tol: &Tolerance) -> Result<f64> {
    let f = |s: f64| fb_residual(params, s, tol);
    let mut seed = 0.5 * seed_guess(params);
    let mut f_seed = f(seed)?;
    let mut tries = 0;
    while f_seed >= 0.0 {
        tries += 1;
        if tries > tol.max_iter {
            return Err(Error::NoSignChange { seed, last: seed, iterations: tries });
        }
        seed *= 0.25;
        f_seed = f(seed)?;
    }
    let bracket = try_expand_bracket(f, seed, Direction::Up, tol)?;
    let root_tol = Tolerance {
        abs_tol: tol.abs_tol.min(S0_ROOT_TOL),
        rel_tol: tol.rel_tol.min(S0_ROOT_TOL),
        ..*tol
    };
    try_find_root(f, bracket, &root_tol)
}

/// Free-boundary data of one member of the family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FreeBoundarySolution {
    pub a: f64,
    pub s0: f64,
    pub r: f64,
    pub phi_s0: f64,
    pub residual_fb: f64,
    pub residual_nu0: f64,
}

impl FreeBoundarySolution {
    /// `coth r`, the Robin coefficient of the boundary condition.
    pub fn robin_coef(&self) -> f64 {
        1.0 / self.r.tanh()
    }
}

/// Solves for `s0` and evaluates `r = arccosh(A(s0) cosh phi(s0))`.
///
/// ```
/// use catenoid::free_boundary::radius;
/// use catenoid::geometry::make_params;
/// use catenoid::numerics::Tolerance;
/// let sol = radius(&make_params(1.0).unwrap(), &Tolerance::default()).unwrap();
/// assert!(sol.residual_fb.abs() <= 1e-11);
/// assert!(sol.robin_coef() > 1.0);
/// ```
pub fn radius(params: &CatenoidParams, tol: &Tolerance) -> Result<FreeBoundarySolution> {
    let s0 = solve_s0(params, tol)?;
    let phi_s0 = phi(params, s0, tol)?;
    let residual_fb = phi_s0.tanh() - boundary_ratio(params, s0);
    let residual_nu0 = unit_normal(params, s0, 0.0, tol)?.n0;
    Ok(FreeBoundarySolution { a: params.a(), s0, r: boundary_distance(params, s0, phi_s0), phi_s0, residual_fb, residual_nu0 })
}

/// `arccosh(A(s) cosh phi)` without cancellation near 1 or overflow at large `s`.
fn boundary_distance(params: &CatenoidParams, s: f64, ph: f64) -> f64 {
    let (la, _) = params.log_ab(s);
    // ln cosh(phi) = |phi| + ln((1 + e^{-2|phi|}) / 2)
    let ln_cosh = ph.abs() + (-2.0 * ph.abs()).exp().ln_1p() - std::f64::consts::LN_2;
    let ln_x = la + ln_cosh;
    if ln_x > LOG_RADIUS_X.ln() {
        let u = (-2.0 * ln_x).exp();
        return std::f64::consts::LN_2 + ln_x + (-u / (2.0 * (1.0 + (1.0 - u).sqrt()))).ln_1p();
    }
    let (a, b) = params.ab(s);
    let sh = (0.5 * ph).sinh();
    let y = b * b / (a + 1.0) * ph.cosh() + 2.0 * sh * sh;
    (y + (y * (y + 2.0)).sqrt()).ln_1p()
}

/// `dr/da` by a centered difference with step `1e-6 a`, kept inside the guard near `a = 1/2`.
pub fn radius_derivative(params: &CatenoidParams, tol: &Tolerance) -> Result<f64> {
    let a = params.a();
    let delta = (1e-6 * a).min(0.5 * (params.eps() - crate::geometry::A_GUARD));
    let up = radius(&crate::geometry::make_params(a + delta)?, tol)?;
    let down = radius(&crate::geometry::make_params(a - delta)?, tol)?;
    Ok((up.r - down.r) / (2.0 * delta))
}

/// Bisection-only root of [`fb_residual`] on `[lo, hi]`; an oracle for tests.
pub fn solve_s0_bisection(params: &CatenoidParams, lo: f64, hi: f64, width: f64, tol: &Tolerance) -> Result<f64> {
    let f = |s: f64| fb_residual(params, s, tol);
    let b = Bracket::new(lo, hi, f(lo)?, f(hi)?)?;
    let (mut lo, mut hi) = (b.lo, b.hi);
    let rising = b.f_lo < 0.0;
    while hi - lo > width {
        let mid = 0.5 * (lo + hi);
        if (f(mid)? < 0.0) == rising {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Number of sign changes of the residual over `n` equispaced samples of `(0, s_max]`.
pub fn count_sign_changes(params: &CatenoidParams, s_max: f64, n: usize, tol: &Tolerance) -> Result<usize> {
    let mut prev: Option<f64> = None;
    let mut changes = 0;
    for i in 1..=n {
        let v = fb_residual(params, s_max * i as f64 / n as f64, tol)?;
        if let Some(p) = prev {
            if (p < 0.0 && v >= 0.0) || (p >= 0.0 && v < 0.0) {
                changes += 1;
            }
        }
        prev = Some(v);
    }
    Ok(changes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::make_params;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn residual_rejects_non_positive_s() {
        let p = make_params(1.0).unwrap();
        assert!(fb_residual(&p, 0.0, &tol()).unwrap_err().is_domain());
        assert!(fb_residual(&p, -1.0, &tol()).is_err());
    }

    #[test]
    fn ratio_blows_up_like_inverse_s() {
        let p = make_params(1.0).unwrap();
        let s = 1e-6;
        let lead = p.ab(0.0).1 * p.k() / (2.0 * s);
        assert!((boundary_ratio(&p, s) / lead - 1.0).abs() < 1e-6);
    }

    #[test]
    fn ratio_log_branch_is_continuous() {
        let p = make_params(2.0).unwrap();
        let below = boundary_ratio(&p, LOG_DOMAIN_S);
        let above = boundary_ratio(&p, LOG_DOMAIN_S * (1.0 + 1e-15));
        assert!((below / above - 1.0).abs() < 1e-10);
    }

    #[test]
    fn s0_at_one_matches_bisection_oracle() {
        let p = make_params(1.0).unwrap();
        let oracle = solve_s0_bisection(&p, 0.1, 10.0, 1e-13, &tol()).unwrap();
        let s0 = solve_s0(&p, &tol()).unwrap();
        assert!((s0 - oracle).abs() < 1e-12);
        assert!((s0 - 1.026_745_723_432_774_8).abs() < 1e-11);
    }

    #[test]
    fn radius_at_one() {
        let sol = radius(&make_params(1.0).unwrap(), &tol()).unwrap();
        assert!((sol.r - 1.488_414_929_374_705_5).abs() < 1e-10);
        assert!(sol.residual_nu0.abs() < 1e-9);
    }

    #[test]
    fn log_and_direct_radius_agree_at_threshold() {
        let p = make_params(3.0).unwrap();
        let x = 2e8_f64;
        let direct = (x + (x * x - 1.0).sqrt()).ln();
        // boundary_distance with phi = 0 at the s where A = x.
        let s = (((x * x - 0.5) / p.a()).acosh()) / 2.0;
        let got = boundary_distance(&p, s, 0.0);
        assert!((got - direct).abs() < 1e-12 * direct);
    }

    #[test]
    fn robin_coefficient_exceeds_one() {
        for a in [0.51, 2.0, 50.0] {
            let sol = radius(&make_params(a).unwrap(), &tol()).unwrap();
            assert!(sol.robin_coef() > 1.0);
        }
    }
}
