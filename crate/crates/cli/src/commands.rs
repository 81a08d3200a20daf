//! Row builders shared by the single-shot subcommands and the sweep driver.

use catenoid::asymptotics::{self, ConvergenceRow, D1Estimate};
use catenoid::free_boundary::radius;
use catenoid::geometry::{fstar_with_phi, make_params, phi_on_grid};
use catenoid::numerics::Tolerance;
use catenoid::spectrum::{build_problem, eigenvalues_below, ModeIndexRow, KERNEL_THRESHOLD};
use catenoid::Error;

use crate::output::{Cell, Table};

pub const PROFILE_COLUMNS: [&str; 9] = ["s", "A", "B", "phi", "II_sq", "fstar", "x0", "x1", "x2"];
pub const RADIUS_COLUMNS: [&str; 7] = ["a", "s0", "r", "phi_s0", "residual_fb", "residual_nu0", "robin_coef"];
pub const SPECTRUM_COLUMNS: [&str; 5] = ["n", "mu", "parity", "n_zeros", "robin_residual"];
pub const INDEX_COLUMNS: [&str; 7] = ["a", "k", "n_negative_radial", "kernel_dim_radial", "mu0", "mu1", "failure"];
pub const CONVERGENCE_COLUMNS: [&str; 7] = ["a", "eps", "quantity", "value", "target", "gap", "scaled_gap"];
pub const CONSTANTS_COLUMNS: [&str; 13] = [
    "I_inf",
    "d_inf",
    "s0_shift",
    "sigma_star",
    "rho_star",
    "c_star",
    "d_inf_forms_gap",
    "sigma_residual",
    "rho_residual",
    "rho_cosh_gap",
    "c_star_rho_gap",
    "c_star_cosh_gap",
    "i_inf_quadrature_gap",
];

pub const EXPLORATORY: &str = "EXPLORATORY: numerical evidence on the listed grid only";

/// Meridian slice `theta = 0` on `n` uniform points of `[s_min, s_max]`;
/// the default interval is `[-s0, s0]`.
pub fn profile_rows(a: f64, s_range: Option<(f64, f64)>, n: usize, tol: &Tolerance) -> Result<Vec<Vec<Cell>>, Error> {
    if n < 2 {
        return Err(Error::Domain(format!("profile needs n >= 2, got {n}")));
    }
    let params = make_params(a)?;
    let (lo, hi) = match s_range {
        Some(r) => r,
        None => {
            let s0 = radius(&params, tol)?.s0;
            (-s0, s0)
        }
    };
    if !(lo.is_finite() && hi.is_finite() && hi > lo) {
        return Err(Error::Domain(format!("profile needs s_min < s_max, got [{lo}, {hi}]")));
    }
    let grid: Vec<f64> = (0..n)
        .map(|i| match i {
            0 => lo,
            i if i == n - 1 => hi,
            i => lo + (hi - lo) * i as f64 / (n - 1) as f64,
        })
        .collect();
    let phis = phi_on_grid(&params, &grid, tol)?;
    Ok(grid
        .iter()
        .zip(&phis)
        .map(|(&s, &ph)| {
            let (big_a, big_b) = params.ab(s);
            vec![
                s.into(),
                big_a.into(),
                big_b.into(),
                ph.into(),
                params.ii_sq(s).into(),
                fstar_with_phi(&params, s, ph).into(),
                (big_a * ph.cosh()).into(),
                (big_a * ph.sinh()).into(),
                big_b.into(),
            ]
        })
        .collect())
}

pub fn radius_row(a: f64, tol: &Tolerance) -> Result<Vec<Cell>, Error> {
    let fb = radius(&make_params(a)?, tol)?;
    Ok(vec![
        a.into(),
        fb.s0.into(),
        fb.r.into(),
        fb.phi_s0.into(),
        fb.residual_fb.into(),
        fb.residual_nu0.into(),
        fb.robin_coef().into(),
    ])
}

/// Eigenvalues below `mu_max` with their counts.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumRows {
    pub rows: Vec<Vec<Cell>>,
    pub negatives: usize,
    pub kernel: usize,
    /// Set when only part of the spectrum could be isolated; `rows` then holds
    /// the isolated eigenvalues without eigenfunction data.
    pub failure: Option<Error>,
}

pub fn spectrum_rows(a: f64, k: u32, mu_max: f64, tol: &Tolerance) -> Result<SpectrumRows, Error> {
    if !mu_max.is_finite() {
        return Err(Error::Domain(format!("mu_max must be finite, got {mu_max}")));
    }
    let problem = build_problem(&make_params(a)?, k, tol)?;
    let (mus, rows, failure) = match eigenvalues_below(&problem, mu_max, tol) {
        Ok(pairs) => {
            let rows = pairs
                .iter()
                .enumerate()
                .map(|(n, e)| vec![n.into(), e.mu.into(), e.parity.as_str().into(), e.n_zeros.into(), e.robin_residual.into()])
                .collect();
            (pairs.iter().map(|e| e.mu).collect::<Vec<_>>(), rows, None)
        }
        Err(Error::IncompleteSpectrum { found, reason }) => {
            let rows = found.iter().enumerate().map(|(n, &mu)| vec![n.into(), mu.into(), Cell::Empty, Cell::Empty, Cell::Empty]).collect();
            (found.clone(), rows, Some(Error::IncompleteSpectrum { found, reason }))
        }
        Err(e) => return Err(e),
    };
    Ok(SpectrumRows {
        rows,
        negatives: mus.iter().filter(|&&m| m < -KERNEL_THRESHOLD).count(),
        kernel: mus.iter().filter(|&&m| m.abs() < KERNEL_THRESHOLD).count(),
        failure,
    })
}

pub fn index_row(r: &ModeIndexRow) -> Vec<Cell> {
    vec![
        r.a.into(),
        r.k.into(),
        r.n_negative_radial.into(),
        r.kernel_dim_radial.into(),
        r.mu0.into(),
        r.mu1.into(),
        r.failure.clone().into(),
    ]
}

/// `eps` is filled for rows of the degenerate table.
pub fn convergence_row(r: &ConvergenceRow, eps: Option<f64>) -> Vec<Cell> {
    vec![
        r.a.into(),
        eps.map_or(Cell::Empty, Cell::Float),
        r.quantity.as_str().into(),
        r.value.into(),
        r.target.into(),
        r.gap.into(),
        r.scaled_gap.into(),
    ]
}

pub fn constants_table(tol: &Tolerance) -> Result<Table, Error> {
    let c = asymptotics::constants(tol)?;
    let k = asymptotics::constant_checks(&c, tol)?;
    let mut t = Table::new(&CONSTANTS_COLUMNS);
    t.push(
        [
            c.i_inf,
            c.d_inf,
            c.s0_shift,
            c.sigma_star,
            c.rho_star,
            c.c_star,
            k.d_inf_forms_gap,
            k.sigma_residual,
            k.rho_residual,
            k.rho_cosh_gap,
            k.c_star_rho_gap,
            k.c_star_cosh_gap,
            k.i_inf_quadrature_gap,
        ]
        .into_iter()
        .map(Cell::Float)
        .collect(),
    );
    Ok(t)
}

pub fn d1_footer(d1: &D1Estimate) -> String {
    format!(
        "d1_hat={} fit_residual={} n_points={} ({EXPLORATORY})",
        crate::output::format_float(d1.d1_hat),
        crate::output::format_float(d1.fit_residual),
        d1.n_points
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_midpoint_is_the_neck() {
        let rows = profile_rows(1.0, Some((-1.0, 1.0)), 3, &Tolerance::default()).unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[1][0], Cell::Float(0.0));
        assert_eq!(rows[1][3], Cell::Float(0.0));
        assert_eq!(rows[1][5], Cell::Float(0.0));
    }

    #[test]
    fn profile_rejects_bad_requests() {
        let tol = Tolerance::default();
        assert!(profile_rows(1.0, None, 1, &tol).unwrap_err().is_domain());
        assert!(profile_rows(1.0, Some((1.0, -1.0)), 5, &tol).unwrap_err().is_domain());
        assert!(profile_rows(0.4, None, 5, &tol).unwrap_err().is_domain());
    }

    #[test]
    fn spectrum_counts_at_one() {
        let s = spectrum_rows(1.0, 1, 1.0, &Tolerance::default()).unwrap();
        assert_eq!((s.negatives, s.kernel, s.rows.len()), (1, 1, 2));
        assert!(s.failure.is_none());
    }
}
