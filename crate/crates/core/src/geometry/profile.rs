use serde::Serialize;

use super::CatenoidParams;
use crate::error::Result;
use crate::numerics::{integrate, Tolerance};

/// Pointwise meridian data at arc-length coordinate `s`.
#[allow(non_snake_case)]
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeridianState {
    pub s: f64,
    pub A: f64,
    pub B: f64,
    pub A_prime: f64,
    pub B_prime: f64,
    pub phi: f64,
    pub II_sq: f64,
}

/// Evaluates the meridian profile at `s`.
///
/// ```
/// use catenoid::geometry::{make_params, meridian_state};
/// use catenoid::numerics::Tolerance;
/// let m = meridian_state(&make_params(1.0).unwrap(), 0.0, &Tolerance::default()).unwrap();
/// assert_eq!(m.phi, 0.0);
/// assert!((m.II_sq - 6.0).abs() < 1e-14);
/// ```
pub fn meridian_state(params: &CatenoidParams, s: f64, tol: &Tolerance) -> Result<MeridianState> {
    let (a, b) = params.ab(s);
    let num = params.a_sinh2s(s);
    Ok(MeridianState {
        s,
        A: a,
        B: b,
        A_prime: num / a,
        B_prime: num / b,
        phi: phi(params, s, tol)?,
        II_sq: params.ii_sq(s),
    })
}

/// The angular profile `phi(s)`, integrated from 0 to `|s|` and extended oddly.
pub fn phi(params: &CatenoidParams, s: f64, tol: &Tolerance) -> Result<f64> {
    let t = s.abs();
    if t == 0.0 {
        return Ok(0.0);
    }
    let mut total = 0.0;
    let mut lo = 0.0;
    for hi in breakpoints(params, t) {
        total += integrate(|x| params.phi_density(x), lo, hi, tol)?;
        lo = hi;
    }
    Ok(total.copysign(s))
}

/// `phi(s2) - phi(s1)` by one direct quadrature over `[s1, s2]`.
pub fn phi_between(params: &CatenoidParams, s1: f64, s2: f64, tol: &Tolerance) -> Result<f64> {
    integrate(|x| params.phi_density(x), s1, s2, tol)
}

/// `phi` at every point of `grid`, accumulating increments between
/// neighbouring values of `|s|`.
pub fn phi_on_grid(params: &CatenoidParams, grid: &[f64], tol: &Tolerance) -> Result<Vec<f64>> {
    let mut order: Vec<usize> = (0..grid.len()).collect();
    order.sort_by(|&i, &j| grid[i].abs().total_cmp(&grid[j].abs()));
    let mut out = vec![0.0; grid.len()];
    let (mut t_prev, mut acc) = (0.0_f64, 0.0);
    for i in order {
        let t = grid[i].abs();
        if t > t_prev {
            acc += if t_prev == 0.0 { phi(params, t, tol)? } else { phi_between(params, t_prev, t, tol)? };
            t_prev = t;
        }
        out[i] = acc.copysign(grid[i]);
    }
    Ok(out)
}

/// Panel edges for the `phi` quadrature: geometric refinement of the core of
/// width `sqrt(eps / a)` near the neck, then doubling out to `t`.
fn breakpoints(params: &CatenoidParams, t: f64) -> Vec<f64> {
    let core = (params.eps() / params.a()).sqrt().min(1.0);
    let mut pts = Vec::new();
    let mut x = core;
    while x < 1.0 && x < t {
        pts.push(x);
        x *= 4.0;
    }
    let mut x = 1.0;
    while x < t {
        if pts.last().map_or(true, |&p| p < x) {
            pts.push(x);
        }
        x *= 2.0;
    }
    pts.push(t);
    pts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::make_params;

    fn simpson(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> f64 {
        let h = (hi - lo) / n as f64;
        let mut acc = f(lo) + f(hi);
        for i in 1..n {
            acc += f(lo + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        acc * h / 3.0
    }

    #[test]
    fn phi_against_simpson_oracle() {
        let p = make_params(2.0).unwrap();
        let k = 15f64.sqrt() / 2.0;
        let oracle = simpson(|t| k / ((2.0 * (2.0 * t).cosh() + 0.5) * (2.0 * (2.0 * t).cosh() - 0.5).sqrt()), 0.0, 1.0, 1_000_000);
        let value = phi(&p, 1.0, &Tolerance::default()).unwrap();
        assert!((value - oracle).abs() < 1e-12, "{value} vs {oracle}");
    }

    #[test]
    fn phi_is_odd_and_increasing() {
        let p = make_params(0.7).unwrap();
        let tol = Tolerance::default();
        let mut prev = f64::NEG_INFINITY;
        for i in -20..=20 {
            let s = i as f64 * 0.15;
            let v = phi(&p, s, &tol).unwrap();
            assert_eq!(v, -phi(&p, -s, &tol).unwrap());
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn grid_accumulation_matches_pointwise() {
        let p = make_params(1.3).unwrap();
        let tol = Tolerance::default();
        let grid = [0.4, -1.2, 0.0, 2.5, -0.4, 0.9];
        let acc = phi_on_grid(&p, &grid, &tol).unwrap();
        for (s, v) in grid.iter().zip(acc) {
            assert!((v - phi(&p, *s, &tol).unwrap()).abs() < 1e-13);
        }
    }

    #[test]
    fn near_degenerate_phi_is_resolved() {
        // At a = 1/2 + eps the integrand is a plateau of width ~sqrt(eps).
        let p = make_params(0.5 + 1e-8).unwrap();
        let tol = Tolerance::default();
        let whole = phi(&p, 0.3, &tol).unwrap();
        let pieces: f64 = [0.0, 1e-5, 1e-4, 1e-3, 1e-2, 0.3]
            .windows(2)
            .map(|w| phi_between(&p, w[0], w[1], &tol).unwrap())
            .sum();
        assert!((whole - pieces).abs() < 1e-13);
    }

    #[test]
    fn far_tail_is_finite() {
        let p = make_params(1.0).unwrap();
        let tol = Tolerance::default();
        let v40 = phi(&p, 40.0, &tol).unwrap();
        let v500 = phi(&p, 500.0, &tol).unwrap();
        assert!((v500 - v40).abs() < 1e-15);
    }
}
