//! The mode-`k` radial Robin Sturm–Liouville problem: parity-split shooting
//! with oscillation counts, a finite-volume oracle, Wronskian diagnostics,
//! the second-variation form and mode-by-mode index tables.

mod fd;
mod index;
mod problem;
mod quadratic;
mod shooting;

pub use fd::{fd_matrix, fd_spectrum, Tridiagonal};
pub use index::{index_total, mode_index_row, mode_index_table, nullity_total, ModeIndexRow, KERNEL_THRESHOLD};
pub use problem::{build_problem, problem_from_boundary, SLProblem};
pub use quadratic::{l2_norm_sq, quadratic_form, SampledField};
pub use shooting::{
    count_below, count_below_total, eigenpair, eigenvalues_below, eigenvalues_below_sampled, lowest_eigenpairs,
    lowest_eigenpairs_sampled, parity_eigenvalues_below, parity_lowest, shoot_parity, shoot_parity_sampled,
    symmetric_grid, wronskian_diag, Parity, SLEigenpair, ShootResult, WronskianDiag, DEFAULT_SAMPLES,
};
