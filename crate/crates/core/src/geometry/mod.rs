//! The catenoid family in the hyperboloid model: parameters, meridian
//! profiles, embedding, unit normal, the Killing–Jacobi profile `f*` and
//! finite-difference checks of the pointwise identities.

mod params;
mod profile;
mod surface;

pub use params::{make_params, CatenoidParams, A_GUARD, LOG_DOMAIN_S};
pub use profile::{meridian_state, phi, phi_between, phi_on_grid, MeridianState};
pub use surface::{
    chord_sq, embed, fd_step, fstar, fstar_prime_with_phi, fstar_with_phi, induced_metric_fd, killing_jacobi,
    laplace_eigen_residual, laplace_eigen_residual_with_step, minkowski, normal_conditions, surface_frame,
    time_coordinate_increment, time_coordinate_slope_fd, unit_normal, AmbientPoint, Generator, InducedMetric,
    NormalConditions, NormalVector, SurfaceFrame,
};
