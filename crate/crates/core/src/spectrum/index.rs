use rayon::prelude::*;
use serde::Serialize;

use super::{count_below_total, lowest_eigenpairs, problem_from_boundary};
use crate::error::Result;
use crate::free_boundary::radius;
use crate::geometry::make_params;
use crate::numerics::Tolerance;

/// Eigenvalues with `|mu|` below this count as kernel.
pub const KERNEL_THRESHOLD: f64 = 1e-6;

/// Radial negative count and kernel dimension of one angular mode.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeIndexRow {
    pub a: f64,
    pub k: u32,
    pub n_negative_radial: usize,
    pub kernel_dim_radial: usize,
    pub mu0: f64,
    pub mu1: f64,
    /// Set when the row could not be computed; counts are then zero and the `mu` NaN.
    pub failure: Option<String>,
}

impl ModeIndexRow {
    /// 1 for `k = 0`, 2 otherwise (the `cos` and `sin` copies).
    pub fn angular_multiplicity(&self) -> usize {
        if self.k == 0 {
            1
        } else {
            2
        }
    }
}

/// Counts and lowest two eigenvalues for one `(a, k)`.
pub fn mode_index_row(a: f64, k: u32, tol: &Tolerance) -> Result<ModeIndexRow> {
    let params = make_params(a)?;
    let problem = problem_from_boundary(&params, k, radius(&params, tol)?);
    let below_neg = count_below_total(&problem, -KERNEL_THRESHOLD, tol)?;
    let below_pos = count_below_total(&problem, KERNEL_THRESHOLD, tol)?;
    let pairs = lowest_eigenpairs(&problem, 2, tol)?;
    Ok(ModeIndexRow {
        a,
        k,
        n_negative_radial: below_neg,
        kernel_dim_radial: below_pos - below_neg,
        mu0: pairs[0].mu,
        mu1: pairs[1].mu,
        failure: None,
    })
}

/// Rows for every `a` in `a_grid` and `k = 0..=k_max`, in grid order;
/// rows are computed concurrently and failures are recorded per row.
pub fn mode_index_table(a_grid: &[f64], k_max: u32, tol: &Tolerance) -> Vec<ModeIndexRow> {
    let cells: Vec<(f64, u32)> = a_grid.iter().flat_map(|&a| (0..=k_max).map(move |k| (a, k))).collect();
    cells
        .par_iter()
        .map(|&(a, k)| {
            mode_index_row(a, k, tol).unwrap_or_else(|e| ModeIndexRow {
                a,
                k,
                n_negative_radial: 0,
                kernel_dim_radial: 0,
                mu0: f64::NAN,
                mu1: f64::NAN,
                failure: Some(e.to_string()),
            })
        })
        .collect()
}

/// `n(k=0) + 2 sum_{k>=1} n(k)` over the rows belonging to `a`.
pub fn index_total(rows: &[ModeIndexRow], a: f64) -> usize {
    rows.iter().filter(|r| r.a == a).map(|r| r.angular_multiplicity() * r.n_negative_radial).sum()
}

/// `dim(k=0) + 2 sum_{k>=1} dim(k)` over the rows belonging to `a`.
pub fn nullity_total(rows: &[ModeIndexRow], a: f64) -> usize {
    rows.iter().filter(|r| r.a == a).map(|r| r.angular_multiplicity() * r.kernel_dim_radial).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn totals_apply_angular_multiplicity() {
        let row = |k, n| ModeIndexRow { a: 1.0, k, n_negative_radial: n, kernel_dim_radial: 0, mu0: 0.0, mu1: 0.0, failure: None };
        let rows = vec![row(0, 2), row(1, 1), row(2, 0), row(3, 0)];
        assert_eq!(index_total(&rows, 1.0), 4);
        assert_eq!(index_total(&rows, 2.0), 0);
    }

    #[test]
    fn failures_are_recorded() {
        let rows = mode_index_table(&[0.3], 0, &Tolerance::default());
        assert_eq!(rows.len(), 1);
        assert!(rows[0].failure.as_deref().unwrap().contains("a > 1/2"));
    }
}
