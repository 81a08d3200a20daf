use thiserror::Error;

/// Errors raised by the numerical kernels and the geometric layers built on them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid bracket [{lo}, {hi}]: f(lo) = {f_lo:e}, f(hi) = {f_hi:e} do not change sign")]
    InvalidBracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("no sign change found expanding from {seed} after {iterations} doublings (last point {last})")]
    NoSignChange { seed: f64, last: f64, iterations: usize },

    #[error("{what} did not converge: {detail}")]
    NonConvergence { what: &'static str, detail: String },

    #[error("ODE step size underflow at s = {s} (step {step:e})")]
    StepUnderflow { s: f64, step: f64 },

    #[error("non-finite value in {what} at {at}")]
    NonFinite { what: &'static str, at: f64 },

    /// Eigenvalue bracketing failed; `found` holds the eigenvalues that were
    /// isolated before the failure.
    #[error("incomplete spectrum ({reason}); {} eigenvalue(s) isolated", found.len())]
    IncompleteSpectrum { found: Vec<f64>, reason: String },

    #[error("degenerate matrix: {0}")]
    DegenerateMatrix(String),

    #[error("ill-conditioned fit: {0}")]
    IllConditionedFit(String),
}

impl Error {
    /// True when the failure is caused by bad input rather than by a solver.
    pub fn is_domain(&self) -> bool {
        matches!(self, Error::Domain(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
