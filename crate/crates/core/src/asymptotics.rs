//! Closed-form constants of the two limits `a -> infinity` and `a -> 1/2`,
//! their numerical cross-checks, and empirical convergence tables.

use std::f64::consts::{PI, SQRT_2};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::free_boundary::radius;
use crate::geometry::make_params;
use crate::numerics::{find_root, gamma_fn, integrate, Bracket, Tolerance};

/// Truncation point of the `I_inf` quadrature.
pub const I_INF_CUTOFF: f64 = 30.0;

/// Constants of the large-`a` law `r = 3/2 ln a + d_inf + o(1)` and of the
/// degenerate law `r = c_* sqrt(a - 1/2) (1 + o(1))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticConstants {
    /// `int_0^inf cosh(2t)^{-3/2} dt = Gamma(3/4)^2 / sqrt(2 pi)`
    #[serde(rename = "I_inf")]
    pub i_inf: f64,
    /// `ln(2 sqrt(2 pi) / Gamma(3/4)^2)`
    pub d_inf: f64,
    /// `ln(sqrt(2) / I_inf)`, the limit of `s0 - ln a`.
    pub s0_shift: f64,
    /// The positive fixed point of `coth`.
    pub sigma_star: f64,
    /// `sinh(sigma_star)`, the limit of `s0 / sqrt(eps)`.
    pub rho_star: f64,
    /// `sigma_star cosh(sigma_star)`, the limit of `r / sqrt(eps)`.
    pub c_star: f64,
}

/// Computes the constants from their closed forms.
///
/// ```
/// let c = catenoid::asymptotics::constants(&catenoid::numerics::Tolerance::default()).unwrap();
/// assert!((c.d_inf - 1.205_523_810_902_027).abs() < 1e-12);
/// assert!((c.sigma_star - 1.0 / c.sigma_star.tanh()).abs() < 1e-12);
/// ```
pub fn constants(tol: &Tolerance) -> Result<AsymptoticConstants> {
    let g34 = gamma_fn(0.75)?;
    let i_inf = g34 * g34 / (2.0 * PI).sqrt();
    let d_inf = (2.0 * (2.0 * PI).sqrt() / (g34 * g34)).ln();
    let s0_shift = (SQRT_2 / i_inf).ln();
    let sigma_star = coth_fixed_point(tol)?;
    Ok(AsymptoticConstants {
        i_inf,
        d_inf,
        s0_shift,
        sigma_star,
        rho_star: sigma_star.sinh(),
        c_star: sigma_star * sigma_star.cosh(),
    })
}

/// `d_inf` from the `Gamma(1/4)` form, `ln(sqrt(2) Gamma(1/4)^2 / pi^{3/2})`.
pub fn d_inf_quarter_form() -> Result<f64> {
    let g14 = gamma_fn(0.25)?;
    Ok((SQRT_2 * g14 * g14 / PI.powf(1.5)).ln())
}

fn coth_fixed_point(tol: &Tolerance) -> Result<f64> {
    let f = |s: f64| s - 1.0 / s.tanh();
    let root_tol = Tolerance { abs_tol: 1e-15, rel_tol: 0.0, ..*tol };
    find_root(f, Bracket::evaluate(f, 1.0, 1.5)?, &root_tol)
}

/// Cross-check residuals of [`AsymptoticConstants`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConstantChecks {
    /// `d_inf` minus its `Gamma(1/4)` form.
    pub d_inf_forms_gap: f64,
    /// `sigma_star - coth(sigma_star)`
    pub sigma_residual: f64,
    /// `asinh(rho_star) - sqrt(1 + rho_star^2) / rho_star`
    pub rho_residual: f64,
    /// `sqrt(1 + rho_star^2) - cosh(sigma_star)`
    pub rho_cosh_gap: f64,
    /// `c_star - (rho_star + 1/rho_star)`
    pub c_star_rho_gap: f64,
    /// `c_star - sigma_star cosh(sigma_star)`
    pub c_star_cosh_gap: f64,
    /// `I_inf` quadrature minus closed form.
    pub i_inf_quadrature_gap: f64,
}

pub fn constant_checks(c: &AsymptoticConstants, tol: &Tolerance) -> Result<ConstantChecks> {
    let rho = c.rho_star;
    let hyp = (1.0 + rho * rho).sqrt();
    Ok(ConstantChecks {
        d_inf_forms_gap: c.d_inf - d_inf_quarter_form()?,
        sigma_residual: c.sigma_star - 1.0 / c.sigma_star.tanh(),
        rho_residual: rho.asinh() - hyp / rho,
        rho_cosh_gap: hyp - c.sigma_star.cosh(),
        c_star_rho_gap: c.c_star - (rho + 1.0 / rho),
        c_star_cosh_gap: c.c_star - c.sigma_star * c.sigma_star.cosh(),
        i_inf_quadrature_gap: verify_i_inf(tol)?.gap,
    })
}

/// Numerical evaluation of `I_inf` against its closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IInfCheck {
    /// `int_0^30 cosh(2t)^{-3/2} dt`
    pub quadrature_value: f64,
    /// `Gamma(3/4)^2 / sqrt(2 pi)`
    pub closed_form: f64,
    pub gap: f64,
    /// `2^{3/2} e^{-90} / 3`, bounding the truncated tail.
    pub tail_bound: f64,
    /// `(1/sqrt 2) int_0^1 u^{-1/4} (1+u)^{-3/2} du`
    pub substituted_value: f64,
    /// `int_0^inf u^{-1/4} (1+u)^{-3/2} du`, as twice the integral over `[0, 1]`.
    pub beta_integral: f64,
    /// `2 Gamma(3/4)^2 / sqrt(pi)`
    pub beta_closed_form: f64,
}

pub fn verify_i_inf(tol: &Tolerance) -> Result<IInfCheck> {
    let quadrature_value = integrate(|t| (2.0 * t).cosh().powf(-1.5), 0.0, I_INF_CUTOFF, tol)?;
    let g34 = gamma_fn(0.75)?;
    let closed_form = g34 * g34 / (2.0 * PI).sqrt();
    // u = v^4 removes the endpoint singularity: u^{-1/4}(1+u)^{-3/2} du = 4 v^2 (1+v^4)^{-3/2} dv.
    let unit = integrate(|v| 4.0 * v * v * (1.0 + v.powi(4)).powf(-1.5), 0.0, 1.0, tol)?;
    Ok(IInfCheck {
        quadrature_value,
        closed_form,
        gap: quadrature_value - closed_form,
        tail_bound: 2f64.powf(1.5) * (-3.0 * I_INF_CUTOFF).exp() / 3.0,
        substituted_value: unit / SQRT_2,
        beta_integral: 2.0 * unit,
        beta_closed_form: 2.0 * g34 * g34 / PI.sqrt(),
    })
}

/// Which quantity a [`ConvergenceRow`] tracks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    /// `r - 3/2 ln a` against `d_inf`
    RadiusShift,
    /// `s0 - ln a` against `s0_shift`
    S0Shift,
    /// `r / sqrt(eps)` against `c_star`
    RadiusRatio,
    /// `s0 / sqrt(eps)` against `rho_star`
    S0Ratio,
}

impl Quantity {
    pub fn as_str(self) -> &'static str {
        match self {
            Quantity::RadiusShift => "r_shift",
            Quantity::S0Shift => "s0_shift",
            Quantity::RadiusRatio => "r_ratio",
            Quantity::S0Ratio => "s0_ratio",
        }
    }
}

/// One row of a convergence study. `scaled_gap` is `gap * a` on the
/// large-`a` side and `gap / eps` on the degenerate side, so it stays
/// bounded exactly when the remainder has the expected order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub a: f64,
    pub quantity: Quantity,
    pub value: f64,
    pub target: f64,
    pub gap: f64,
    pub scaled_gap: f64,
}

fn row(a: f64, quantity: Quantity, value: f64, target: f64, scale: f64) -> ConvergenceRow {
    let gap = value - target;
    ConvergenceRow { a, quantity, value, target, gap, scaled_gap: gap * scale }
}

/// `r - 3/2 ln a` and `s0 - ln a` for each `a`, two rows per grid point in grid order.
pub fn large_a_table(a_grid: &[f64], tol: &Tolerance) -> Result<Vec<ConvergenceRow>> {
    let c = constants(tol)?;
    let rows: Result<Vec<[ConvergenceRow; 2]>> = a_grid
        .par_iter()
        .map(|&a| {
            let fb = radius(&make_params(a)?, tol)?;
            let ln_a = a.ln();
            Ok([
                row(a, Quantity::RadiusShift, fb.r - 1.5 * ln_a, c.d_inf, a),
                row(a, Quantity::S0Shift, fb.s0 - ln_a, c.s0_shift, a),
            ])
        })
        .collect();
    Ok(rows?.into_iter().flatten().collect())
}

/// `r / sqrt(eps)` and `s0 / sqrt(eps)` at `a = 1/2 + eps`, two rows per grid point.
pub fn degenerate_table(eps_grid: &[f64], tol: &Tolerance) -> Result<Vec<ConvergenceRow>> {
    let c = constants(tol)?;
    let rows: Result<Vec<[ConvergenceRow; 2]>> = eps_grid
        .par_iter()
        .map(|&eps| {
            let params = make_params(0.5 + eps)?;
            let fb = radius(&params, tol)?;
            let e = params.eps();
            let root = e.sqrt();
            Ok([
                row(params.a(), Quantity::RadiusRatio, fb.r / root, c.c_star, 1.0 / e),
                row(params.a(), Quantity::S0Ratio, fb.s0 / root, c.rho_star, 1.0 / e),
            ])
        })
        .collect();
    Ok(rows?.into_iter().flatten().collect())
}

/// Least-squares coefficient of `1/a` in `r - 3/2 ln a - d_inf`. Exploratory:
/// there is no reference value for it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct D1Estimate {
    pub d1_hat: f64,
    /// `sqrt(sum (y - d1 x)^2 / sum x^2)` with `x = 1/a`, in units of `d1`.
    pub fit_residual: f64,
    pub n_points: usize,
}

/// Fits `y = d1 x` through the origin to `(a, y)` pairs with `x = 1/a`.
///
/// ```
/// use catenoid::asymptotics::fit_d1;
/// let pts: Vec<(f64, f64)> = [1e3, 1e4, 1e5, 1e6].iter().map(|&a| (a, 7.0 / a)).collect();
/// assert!((fit_d1(&pts).unwrap().d1_hat - 7.0).abs() < 1e-12);
/// ```
pub fn fit_d1(points: &[(f64, f64)]) -> Result<D1Estimate> {
    if points.len() < 4 {
        return Err(Error::IllConditionedFit(format!("need at least 4 points, got {}", points.len())));
    }
    let (lo, hi) = points.iter().fold((f64::INFINITY, 0.0_f64), |(lo, hi), p| (lo.min(p.0), hi.max(p.0)));
    if !(hi >= 10.0 * lo) {
        return Err(Error::IllConditionedFit(format!("grid [{lo}, {hi}] spans less than a decade")));
    }
    let sxx: f64 = points.iter().map(|p| (1.0 / p.0).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| p.1 / p.0).sum();
    let d1_hat = sxy / sxx;
    let ssr: f64 = points.iter().map(|p| (p.1 - d1_hat / p.0).powi(2)).sum();
    Ok(D1Estimate { d1_hat, fit_residual: (ssr / sxx).sqrt(), n_points: points.len() })
}

/// Runs the radius solver on `a_grid` and fits the `1/a` coefficient.
pub fn estimate_d1(a_grid: &[f64], tol: &Tolerance) -> Result<D1Estimate> {
    if a_grid.len() < 4 {
        return Err(Error::IllConditionedFit(format!("need at least 4 points, got {}", a_grid.len())));
    }
    let d_inf = constants(tol)?.d_inf;
    let points: Result<Vec<(f64, f64)>> = a_grid
        .par_iter()
        .map(|&a| Ok((a, radius(&make_params(a)?, tol)?.r - 1.5 * a.ln() - d_inf)))
        .collect();
    fit_d1(&points?)
}

/// `phi(s0) sqrt(a) / I_inf`, which tends to 1 as `a` grows.
pub fn phi_decay_ratio(a: f64, tol: &Tolerance) -> Result<f64> {
    let fb = radius(&make_params(a)?, tol)?;
    Ok(fb.phi_s0 * a.sqrt() / constants(tol)?.i_inf)
}

/// `n` points from `min` to `max` equally spaced in `ln`.
pub fn geometric_grid(min: f64, max: f64, n: usize) -> Result<Vec<f64>> {
    if !(min > 0.0 && max > min) || n < 2 {
        return Err(Error::Domain(format!("geometric grid needs 0 < min < max and n >= 2, got ({min}, {max}, {n})")));
    }
    let (l0, l1) = (min.ln(), max.ln());
    Ok((0..n)
        .map(|i| match i {
            0 => min,
            i if i == n - 1 => max,
            i => (l0 + (l1 - l0) * i as f64 / (n - 1) as f64).exp(),
        })
        .collect())
}

/// Everything the asymptotics report shows.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymptoticReport {
    pub constants: AsymptoticConstants,
    pub checks: ConstantChecks,
    pub i_inf: IInfCheck,
    pub large_a: Vec<ConvergenceRow>,
    pub degenerate: Vec<ConvergenceRow>,
    pub d1: Option<D1Estimate>,
}

pub fn asymptotic_report(large_grid: &[f64], eps_grid: &[f64], d1_grid: &[f64], tol: &Tolerance) -> Result<AsymptoticReport> {
    let constants = constants(tol)?;
    Ok(AsymptoticReport {
        checks: constant_checks(&constants, tol)?,
        constants,
        i_inf: verify_i_inf(tol)?,
        large_a: large_a_table(large_grid, tol)?,
        degenerate: degenerate_table(eps_grid, tol)?,
        d1: if d1_grid.is_empty() { None } else { Some(estimate_d1(d1_grid, tol)?) },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn closed_forms() {
        // 30-digit reference values from an arbitrary-precision evaluation.
        let c = constants(&tol()).unwrap();
        assert!((c.i_inf - 0.599_070_117_367_796_1).abs() < 1e-13);
        assert!((c.d_inf - 1.205_523_810_902_027_3).abs() < 1e-12);
        assert!((c.s0_shift - 0.858_950_220_622_054_7).abs() < 1e-12);
        assert!((c.sigma_star - 1.199_678_640_257_733_8).abs() < 1e-13);
        assert!((c.rho_star - 1.508_879_561_538_32).abs() < 1e-12);
        assert!((c.c_star - 2.171_622_980_887_501_5).abs() < 1e-12);
    }

    #[test]
    fn cross_checks_are_tight() {
        let c = constants(&tol()).unwrap();
        let k = constant_checks(&c, &tol()).unwrap();
        assert!(k.d_inf_forms_gap.abs() <= 1e-11);
        assert!(k.sigma_residual.abs() <= 1e-12);
        assert!(k.rho_residual.abs() <= 1e-11);
        assert!(k.c_star_rho_gap.abs() <= 1e-12);
        assert!(k.c_star_cosh_gap.abs() <= 1e-13);
        assert!(k.i_inf_quadrature_gap.abs() <= 1e-10);
    }

    #[test]
    fn beta_routes() {
        let v = verify_i_inf(&tol()).unwrap();
        assert!(v.tail_bound < 1e-38);
        assert!((v.substituted_value - v.closed_form).abs() < 1e-9);
        assert!((v.beta_integral - v.beta_closed_form).abs() < 1e-9);
    }

    #[test]
    fn sigma_bracket_changes_sign() {
        let f = |s: f64| s - 1.0 / s.tanh();
        assert!(f(1.0) < 0.0 && f(1.5) > 0.0);
    }

    #[test]
    fn fit_rejects_narrow_grids() {
        let pts: Vec<(f64, f64)> = [1e3, 2e3, 3e3, 5e3].iter().map(|&a| (a, 1.0 / a)).collect();
        assert!(matches!(fit_d1(&pts), Err(Error::IllConditionedFit(_))));
        assert!(matches!(fit_d1(&pts[..3]), Err(Error::IllConditionedFit(_))));
    }

    #[test]
    fn geometric_grid_endpoints() {
        let g = geometric_grid(1e2, 1e6, 5).unwrap();
        assert_eq!(g[0], 1e2);
        assert_eq!(g[4], 1e6);
        assert!((g[2] - 1e4).abs() < 1e-8);
        assert!(geometric_grid(1.0, 1.0, 3).is_err());
        assert!(geometric_grid(1.0, 2.0, 1).is_err());
    }
}
