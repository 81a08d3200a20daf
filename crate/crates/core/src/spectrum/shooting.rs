use serde::{Deserialize, Serialize};

use super::SLProblem;
use crate::error::{Error, Result};
use crate::numerics::{try_find_root, Bracket, Dopri5, Tolerance};

/// Symmetry class of a radial solution under `s -> -s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub const BOTH: [Parity; 2] = [Parity::Even, Parity::Odd];

    pub fn as_str(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }

    /// Cauchy data `(f, B f')` at `s = 0`: `f = 1, f' = 0` or `f = 0, f' = 1`.
    fn initial_state(self, b0: f64) -> [f64; 2] {
        match self {
            Parity::Even => [1.0, 0.0],
            Parity::Odd => [0.0, b0],
        }
    }
}

/// End-point data of a half-interval shot from `s = 0` to `s = s0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShootResult {
    pub f_s0: f64,
    pub fp_s0: f64,
    /// Sign changes of `f` on `(0, s0)`.
    pub n_zeros_half: usize,
}

impl ShootResult {
    /// `f'(s0) - c f(s0)`; zero exactly at eigenvalues of the given parity.
    pub fn robin_match(&self, robin_coef: f64) -> f64 {
        self.fp_s0 - robin_coef * self.f_s0
    }

    /// Number of eigenvalues of this parity strictly below the shooting `mu`.
    ///
    /// The Prüfer angle at `s0` has passed `z` multiples of pi; one more
    /// eigenvalue lies below `mu` once it also passes the Robin angle, which
    /// happens exactly when `f'/f < c` (or `f(s0) = 0`).
    pub fn count_below(&self, robin_coef: f64) -> usize {
        if self.f_s0 == 0.0 {
            return self.n_zeros_half + 1;
        }
        self.n_zeros_half + usize::from(self.fp_s0 / self.f_s0 < robin_coef)
    }
}

// Rescale the linear state before it can overflow.
const RESCALE_ABOVE: f64 = 1e100;
const SEGMENTS: usize = 8;

struct HalfShot {
    end: ShootResult,
    samples: Vec<f64>,
}

/// Integrates `f' = g/B, g' = (q - mu B) f` over `[0, s0]`, recording `f` at
/// the ascending points `grid` (all in `(0, s0]`).
fn shoot_half(problem: &SLProblem, parity: Parity, mu: f64, grid: &[f64], tol: &Tolerance) -> Result<HalfShot> {
    let params = problem.params;
    let m2 = (problem.k as f64).powi(2);
    let k2 = params.k() * params.k();
    let rhs = |s: f64, y: &[f64; 2]| {
        let b = params.b_sq(s).sqrt();
        let q = 2.0 * b + m2 / b - 2.0 * k2 / (b * b * b);
        [y[1] / b, (q - mu * b) * y[0]]
    };
    let solver = Dopri5::new(*tol);
    let s0 = problem.s0;
    let mut y = parity.initial_state(params.ab(0.0).1);
    let mut samples = Vec::with_capacity(grid.len());
    let mut zeros = 0;
    let mut last_sign = 0.0_f64;
    let mut next = 0;

    for seg in 0..SEGMENTS {
        let lo = s0 * seg as f64 / SEGMENTS as f64;
        let hi = if seg + 1 == SEGMENTS { s0 } else { s0 * (seg + 1) as f64 / SEGMENTS as f64 };
        let start = next;
        while next < grid.len() && grid[next] <= hi {
            next += 1;
        }
        let stops = &grid[start..next];
        y = solver.integrate_observed(rhs, lo, hi, y, stops, |_, state, at_stop| {
            if state[0] != 0.0 {
                let sign = state[0].signum();
                if last_sign != 0.0 && sign != last_sign {
                    zeros += 1;
                }
                last_sign = sign;
            }
            if at_stop {
                samples.push(state[0]);
            }
        })?;
        let size = y[0].abs().max(y[1].abs());
        if size > RESCALE_ABOVE {
            y = [y[0] / size, y[1] / size];
            for v in samples.iter_mut() {
                *v /= size;
            }
        }
    }
    let b_end = params.ab(s0).1;
    Ok(HalfShot { end: ShootResult { f_s0: y[0], fp_s0: y[1] / b_end, n_zeros_half: zeros }, samples })
}

/// Shoots the parity-`parity` solution at eigenvalue candidate `mu`.
pub fn shoot_parity(problem: &SLProblem, parity: Parity, mu: f64, tol: &Tolerance) -> Result<ShootResult> {
    Ok(shoot_half(problem, parity, mu, &[], tol)?.end)
}

/// [`shoot_parity`] that also returns `f` on the ascending grid `grid ⊂ (0, s0]`.
pub fn shoot_parity_sampled(
    problem: &SLProblem,
    parity: Parity,
    mu: f64,
    grid: &[f64],
    tol: &Tolerance,
) -> Result<(ShootResult, Vec<f64>)> {
    let shot = shoot_half(problem, parity, mu, grid, tol)?;
    Ok((shot.end, shot.samples))
}

/// Number of eigenvalues of parity `parity` strictly below `mu`.
pub fn count_below(problem: &SLProblem, parity: Parity, mu: f64, tol: &Tolerance) -> Result<usize> {
    Ok(shoot_parity(problem, parity, mu, tol)?.count_below(problem.robin_coef))
}

/// Number of eigenvalues (both parities) strictly below `mu`.
pub fn count_below_total(problem: &SLProblem, mu: f64, tol: &Tolerance) -> Result<usize> {
    Ok(count_below(problem, Parity::Even, mu, tol)? + count_below(problem, Parity::Odd, mu, tol)?)
}

/// One eigenvalue with its eigenfunction sampled on `[-s0, s0]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SLEigenpair {
    pub mu: f64,
    /// Zeros of the eigenfunction in `(-s0, s0)`.
    pub n_zeros: usize,
    pub parity: Parity,
    /// `(s, f(s))`, max-norm 1, `f(s0) > 0` for even and `f'(0) > 0` for odd.
    pub samples: Vec<(f64, f64)>,
    /// `f'(s0) - coth(r) f(s0)` for the normalized eigenfunction.
    pub robin_residual: f64,
}

/// Default number of eigenfunction samples on `[-s0, s0]`.
pub const DEFAULT_SAMPLES: usize = 401;

fn mu_tolerance(tol: &Tolerance) -> Tolerance {
    Tolerance { abs_tol: 1e-14, rel_tol: 1e-13, ..*tol }
}

/// Searches downwards from -1 for a `mu` with no eigenvalue of this parity below it.
fn lower_bound(problem: &SLProblem, parity: Parity, tol: &Tolerance) -> Result<f64> {
    let mut mu = -1.0;
    for _ in 0..tol.max_iter.max(64) {
        if count_below(problem, parity, mu, tol)? == 0 {
            return Ok(mu);
        }
        mu *= 2.0;
    }
    Err(Error::IncompleteSpectrum { found: vec![], reason: format!("no lower spectral bound found above {mu:e}") })
}

/// Searches upwards from 1 for a `mu` with at least `n` eigenvalues of this parity below it.
fn upper_bound(problem: &SLProblem, parity: Parity, n: usize, tol: &Tolerance) -> Result<f64> {
    let mut mu = 1.0;
    for _ in 0..tol.max_iter.max(64) {
        if count_below(problem, parity, mu, tol)? >= n {
            return Ok(mu);
        }
        mu *= 2.0;
    }
    Err(Error::IncompleteSpectrum { found: vec![], reason: format!("fewer than {n} eigenvalues below {mu:e}") })
}

/// Locates the `n`-th eigenvalue (0-based) of one parity inside `[lo, hi]`,
/// where `count(lo) <= n < count(hi)`.
fn nth_eigenvalue(problem: &SLProblem, parity: Parity, n: usize, lo: f64, hi: f64, tol: &Tolerance) -> Result<f64> {
    let count = |mu: f64| count_below(problem, parity, mu, tol);
    let (mut lo, mut hi) = (lo, hi);
    let (mut c_lo, mut c_hi) = (count(lo)?, count(hi)?);
    let mut iterations = 0;
    while c_lo != n || c_hi != n + 1 {
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        if iterations > 200 || !(mid > lo && mid < hi) {
            return Err(Error::IncompleteSpectrum {
                found: vec![],
                reason: format!("could not isolate eigenvalue {n} ({}) in [{lo}, {hi}]", parity.as_str()),
            });
        }
        let c_mid = count(mid)?;
        if c_mid <= n {
            lo = mid;
            c_lo = c_mid;
        } else {
            hi = mid;
            c_hi = c_mid;
        }
    }
    let c = problem.robin_coef;
    let rho = |mu: f64| Ok(shoot_parity(problem, parity, mu, tol)?.robin_match(c));
    let bracket = Bracket::new(lo, hi, rho(lo)?, rho(hi)?).map_err(|e| Error::IncompleteSpectrum {
        found: vec![],
        reason: format!("Robin match does not change sign around eigenvalue {n} ({}): {e}", parity.as_str()),
    })?;
    try_find_root(rho, bracket, &mu_tolerance(tol))
}

/// Eigenvalues `mu < mu_max` of one parity, in increasing order.
pub fn parity_eigenvalues_below(problem: &SLProblem, parity: Parity, mu_max: f64, tol: &Tolerance) -> Result<Vec<f64>> {
    if !mu_max.is_finite() {
        return Err(Error::Domain(format!("mu_max must be finite, got {mu_max}")));
    }
    let total = count_below(problem, parity, mu_max, tol)?;
    collect(problem, parity, total, mu_max, tol)
}

/// The lowest `m` eigenvalues of one parity.
pub fn parity_lowest(problem: &SLProblem, parity: Parity, m: usize, tol: &Tolerance) -> Result<Vec<f64>> {
    if m == 0 {
        return Ok(vec![]);
    }
    let hi = upper_bound(problem, parity, m, tol)?;
    collect(problem, parity, m, hi, tol)
}

fn collect(problem: &SLProblem, parity: Parity, m: usize, hi: f64, tol: &Tolerance) -> Result<Vec<f64>> {
    let mut found = Vec::with_capacity(m);
    if m == 0 {
        return Ok(found);
    }
    let mut lo = lower_bound(problem, parity, tol)?.min(hi);
    for n in 0..m {
        match nth_eigenvalue(problem, parity, n, lo, hi, tol) {
            Ok(mu) => {
                found.push(mu);
                lo = mu;
            }
            Err(Error::IncompleteSpectrum { reason, .. }) => return Err(Error::IncompleteSpectrum { found, reason }),
            Err(e) => return Err(e),
        }
    }
    Ok(found)
}

fn merge_incomplete(err: Error, mut other: Vec<f64>) -> Error {
    match err {
        Error::IncompleteSpectrum { mut found, reason } => {
            found.append(&mut other);
            found.sort_by(f64::total_cmp);
            Error::IncompleteSpectrum { found, reason }
        }
        e => e,
    }
}

/// All eigenvalues `mu < mu_max` of both parities with sampled eigenfunctions, sorted.
///
/// ```
/// use catenoid::geometry::make_params;
/// use catenoid::numerics::Tolerance;
/// use catenoid::spectrum::{build_problem, eigenvalues_below};
/// let tol = Tolerance::default();
/// let problem = build_problem(&make_params(1.0).unwrap(), 1, &tol).unwrap();
/// let pairs = eigenvalues_below(&problem, 1.0, &tol).unwrap();
/// assert_eq!(pairs.len(), 2);
/// assert!(pairs[0].mu < 0.0 && pairs[1].mu.abs() < 1e-6);
/// ```
pub fn eigenvalues_below(problem: &SLProblem, mu_max: f64, tol: &Tolerance) -> Result<Vec<SLEigenpair>> {
    eigenvalues_below_sampled(problem, mu_max, DEFAULT_SAMPLES, tol)
}

pub fn eigenvalues_below_sampled(problem: &SLProblem, mu_max: f64, n_samples: usize, tol: &Tolerance) -> Result<Vec<SLEigenpair>> {
    let even = parity_eigenvalues_below(problem, Parity::Even, mu_max, tol);
    let odd = parity_eigenvalues_below(problem, Parity::Odd, mu_max, tol);
    let (even, odd) = match (even, odd) {
        (Ok(e), Ok(o)) => (e, o),
        (Err(e), Ok(o)) => return Err(merge_incomplete(e, o)),
        (Ok(e), Err(o)) => return Err(merge_incomplete(o, e)),
        (Err(e), Err(_)) => return Err(e),
    };
    pairs_for(problem, even, odd, usize::MAX, n_samples, tol)
}

/// The lowest `m` eigenpairs over both parities, sorted.
pub fn lowest_eigenpairs(problem: &SLProblem, m: usize, tol: &Tolerance) -> Result<Vec<SLEigenpair>> {
    lowest_eigenpairs_sampled(problem, m, DEFAULT_SAMPLES, tol)
}

pub fn lowest_eigenpairs_sampled(problem: &SLProblem, m: usize, n_samples: usize, tol: &Tolerance) -> Result<Vec<SLEigenpair>> {
    let even = parity_lowest(problem, Parity::Even, m, tol)?;
    let odd = parity_lowest(problem, Parity::Odd, m, tol)?;
    pairs_for(problem, even, odd, m, n_samples, tol)
}

fn pairs_for(
    problem: &SLProblem,
    even: Vec<f64>,
    odd: Vec<f64>,
    limit: usize,
    n_samples: usize,
    tol: &Tolerance,
) -> Result<Vec<SLEigenpair>> {
    let mut all: Vec<(f64, Parity)> = even
        .into_iter()
        .map(|mu| (mu, Parity::Even))
        .chain(odd.into_iter().map(|mu| (mu, Parity::Odd)))
        .collect();
    all.sort_by(|x, y| x.0.total_cmp(&y.0));
    all.truncate(limit);
    all.into_iter().map(|(mu, parity)| eigenpair(problem, parity, mu, n_samples, tol)).collect()
}

/// Uniform grid on `[-s0, s0]` with an odd number of points, so `s = 0` is a node.
pub fn symmetric_grid(s0: f64, n_samples: usize) -> Vec<f64> {
    let n = if n_samples % 2 == 0 { n_samples + 1 } else { n_samples.max(3) };
    let half = (n - 1) / 2;
    (0..n)
        .map(|j| {
            let i = j as isize - half as isize;
            if i == half as isize {
                s0
            } else if -i == half as isize {
                -s0
            } else {
                s0 * i as f64 / half as f64
            }
        })
        .collect()
}

/// Builds the normalized eigenfunction of parity `parity` at eigenvalue `mu`.
pub fn eigenpair(problem: &SLProblem, parity: Parity, mu: f64, n_samples: usize, tol: &Tolerance) -> Result<SLEigenpair> {
    let grid = symmetric_grid(problem.s0, n_samples);
    let half = (grid.len() - 1) / 2;
    let positive = &grid[half + 1..];
    let (end, vals) = shoot_parity_sampled(problem, parity, mu, positive, tol)?;
    let f0 = match parity {
        Parity::Even => 1.0,
        Parity::Odd => 0.0,
    };
    let reflect = match parity {
        Parity::Even => 1.0,
        Parity::Odd => -1.0,
    };
    let mut f: Vec<f64> = Vec::with_capacity(grid.len());
    f.extend(vals.iter().rev().map(|v| reflect * v));
    f.push(f0);
    f.extend(vals.iter().copied());

    let max = f.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let sign = match parity {
        Parity::Even if end.f_s0 < 0.0 => -1.0,
        _ => 1.0,
    };
    let scale = sign / max;
    let samples = grid.iter().zip(f.iter()).map(|(&s, &v)| (s, v * scale)).collect();
    let n_zeros = match parity {
        Parity::Even => 2 * end.n_zeros_half,
        Parity::Odd => 2 * end.n_zeros_half + 1,
    };
    Ok(SLEigenpair { mu, n_zeros, parity, samples, robin_residual: end.robin_match(problem.robin_coef) * scale })
}

/// Weighted Wronskian diagnostics of the even and odd solutions at `mu`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WronskianDiag {
    /// `max |B W - (B W)(0)|` over the accepted integration points.
    pub max_drift: f64,
    /// `(B W)(0) = -B(0)` for `W = f_o f_e' - f_e f_o'`.
    pub w_value: f64,
}

/// Integrates both parity solutions together and tracks `B (f_o f_e' - f_e f_o')`.
pub fn wronskian_diag(problem: &SLProblem, mu: f64, tol: &Tolerance) -> Result<WronskianDiag> {
    let params = problem.params;
    let m2 = (problem.k as f64).powi(2);
    let k2 = params.k() * params.k();
    let rhs = |s: f64, y: &[f64; 4]| {
        let b = params.b_sq(s).sqrt();
        let q = 2.0 * b + m2 / b - 2.0 * k2 / (b * b * b) - mu * b;
        [y[1] / b, q * y[0], y[3] / b, q * y[2]]
    };
    let b0 = params.ab(0.0).1;
    let y0 = [1.0, 0.0, 0.0, b0];
    let bw = |y: &[f64; 4]| y[2] * y[1] - y[0] * y[3];
    let w0 = bw(&y0);
    let mut drift = 0.0_f64;
    Dopri5::new(*tol).integrate_observed(rhs, 0.0, problem.s0, y0, &[], |_, y, _| {
        drift = drift.max((bw(y) - w0).abs());
    })?;
    Ok(WronskianDiag { max_drift: drift, w_value: w0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::make_params;
    use crate::spectrum::build_problem;

    fn problem(a: f64, k: u32) -> SLProblem {
        build_problem(&make_params(a).unwrap(), k, &Tolerance::default()).unwrap()
    }

    #[test]
    fn count_is_monotone_in_mu() {
        let p = problem(1.0, 0);
        let tol = Tolerance::default();
        let mut prev = 0;
        for i in -40..40 {
            let c = count_below_total(&p, i as f64 * 0.5, &tol).unwrap();
            assert!(c >= prev);
            prev = c;
        }
    }

    #[test]
    fn mode_one_at_a_equal_one() {
        let p = problem(1.0, 1);
        let pairs = eigenvalues_below(&p, 1.0, &Tolerance::default()).unwrap();
        assert_eq!(pairs.len(), 2);
        assert!((pairs[0].mu + 0.993_337).abs() < 1e-5);
        assert!(pairs[1].mu.abs() < 1e-9);
        assert_eq!((pairs[0].n_zeros, pairs[1].n_zeros), (0, 1));
        assert_eq!(pairs[1].parity, Parity::Odd);
        for pair in &pairs {
            assert!(pair.robin_residual.abs() <= 1e-8);
        }
    }

    #[test]
    fn grid_is_symmetric() {
        let g = symmetric_grid(1.3, 10);
        assert_eq!(g.len(), 11);
        assert_eq!((g[0], g[5], g[10]), (-1.3, 0.0, 1.3));
        for i in 0..11 {
            assert_eq!(g[i], -g[10 - i]);
        }
    }

    #[test]
    fn wronskian_is_conserved() {
        let p = problem(1.0, 1);
        let d = wronskian_diag(&p, -0.3, &Tolerance::default()).unwrap();
        assert!(d.max_drift <= 1e-8 * d.w_value.abs());
        assert!((d.w_value + p.params.ab(0.0).1).abs() < 1e-15);
    }
}
