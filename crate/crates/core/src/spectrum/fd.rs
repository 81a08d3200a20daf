use super::SLProblem;
use crate::error::{Error, Result};

/// Symmetric tridiagonal matrix stored as diagonal and off-diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl Tridiagonal {
    /// Number of eigenvalues strictly below `x` (Sturm sequence of `T - x I`).
    pub fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut q = 1.0_f64;
        for i in 0..self.diag.len() {
            let e2 = if i == 0 { 0.0 } else { self.off[i - 1] * self.off[i - 1] };
            q = self.diag[i] - x - if i == 0 { 0.0 } else { e2 / q };
            if q == 0.0 {
                q = -f64::EPSILON * (self.diag[i].abs() + x.abs()).max(f64::MIN_POSITIVE);
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Gershgorin interval containing the spectrum.
    pub fn bounds(&self) -> (f64, f64) {
        let n = self.diag.len();
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 } + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// The `j`-th smallest eigenvalue by bisection on the Sturm count.
    pub fn eigenvalue(&self, j: usize) -> f64 {
        let (mut lo, mut hi) = self.bounds();
        let scale = lo.abs().max(hi.abs());
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if hi - lo <= 4.0 * f64::EPSILON * scale || !(mid > lo && mid < hi) {
                break;
            }
            if self.count_below(mid) > j {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

/// Second-order finite-volume discretization of the problem on `n_grid`
/// uniform intervals of `[-s0, s0]`.
///
/// Node `i` carries the cell `[s_i - h/2, s_i + h/2]` clipped to the domain,
/// so the end cells have half width; this is the symmetric form of the
/// ghost-point Robin closure. The lumped mass `M = diag(w_i B(s_i))` is folded
/// in as `M^{-1/2} K M^{-1/2}`, leaving a symmetric tridiagonal matrix with
/// the same eigenvalues as the generalized problem `K f = mu M f`.
pub fn fd_matrix(problem: &SLProblem, n_grid: usize) -> Result<Tridiagonal> {
    if n_grid < 200 {
        return Err(Error::Domain(format!("n_grid must be at least 200, got {n_grid}")));
    }
    let s0 = problem.s0;
    let h = 2.0 * s0 / n_grid as f64;
    let node = |i: usize| -s0 + 2.0 * s0 * i as f64 / n_grid as f64;
    let n = n_grid + 1;
    let mut stiff_diag = vec![0.0; n];
    let mut stiff_off = vec![0.0; n - 1];
    let mut mass = vec![0.0; n];
    for i in 0..n {
        let s = node(i);
        let cell = if i == 0 || i == n - 1 { 0.5 * h } else { h };
        let w = problem.weight(s);
        if !(w > 0.0) || !w.is_finite() {
            return Err(Error::DegenerateMatrix(format!("weight {w} at s = {s}")));
        }
        mass[i] = cell * w;
        stiff_diag[i] += cell * problem.potential(s);
    }
    for i in 0..n - 1 {
        let p = problem.leading(0.5 * (node(i) + node(i + 1))) / h;
        stiff_diag[i] += p;
        stiff_diag[i + 1] += p;
        stiff_off[i] = -p;
    }
    let boundary = problem.robin_coef * problem.leading(s0);
    stiff_diag[0] -= boundary;
    stiff_diag[n - 1] -= boundary;

    let inv_sqrt: Vec<f64> = mass.iter().map(|m| 1.0 / m.sqrt()).collect();
    let diag = (0..n).map(|i| stiff_diag[i] * inv_sqrt[i] * inv_sqrt[i]).collect();
    let off = (0..n - 1).map(|i| stiff_off[i] * inv_sqrt[i] * inv_sqrt[i + 1]).collect();
    Ok(Tridiagonal { diag, off })
}

/// The lowest `m_eigs` eigenvalues of the finite-volume discretization.
pub fn fd_spectrum(problem: &SLProblem, n_grid: usize, m_eigs: usize) -> Result<Vec<f64>> {
    let t = fd_matrix(problem, n_grid)?;
    if m_eigs > t.diag.len() {
        return Err(Error::Domain(format!("asked for {m_eigs} eigenvalues of a {}-point grid", t.diag.len())));
    }
    Ok((0..m_eigs).map(|j| t.eigenvalue(j)).collect())
}
