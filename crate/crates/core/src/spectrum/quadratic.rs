use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::free_boundary::radius;
use crate::geometry::CatenoidParams;
use crate::numerics::Tolerance;

/// A function on the annulus sampled on a uniform `s`-grid spanning
/// `[-s0, s0]` times a periodic uniform `theta`-grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledField {
    pub s: Vec<f64>,
    pub n_theta: usize,
    /// Row-major: `values[i * n_theta + j] = u(s[i], theta_j)`.
    pub values: Vec<f64>,
}

impl SampledField {
    pub fn theta(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.n_theta as f64
    }

    pub fn from_fn(s0: f64, n_s: usize, n_theta: usize, mut u: impl FnMut(f64, f64) -> f64) -> Self {
        let s: Vec<f64> = (0..n_s).map(|i| -s0 + 2.0 * s0 * i as f64 / (n_s - 1) as f64).collect();
        let mut values = Vec::with_capacity(n_s * n_theta);
        for &si in &s {
            for j in 0..n_theta {
                values.push(u(si, 2.0 * PI * j as f64 / n_theta as f64));
            }
        }
        SampledField { s, n_theta, values }
    }

    /// `u(s, theta) = radial(s) * angular(theta)` from radial samples `(s, f(s))`.
    pub fn separable(radial: &[(f64, f64)], n_theta: usize, angular: impl Fn(f64) -> f64) -> Self {
        let s = radial.iter().map(|p| p.0).collect();
        let mut values = Vec::with_capacity(radial.len() * n_theta);
        for &(_, f) in radial {
            for j in 0..n_theta {
                values.push(f * angular(2.0 * PI * j as f64 / n_theta as f64));
            }
        }
        SampledField { s, n_theta, values }
    }

    fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n_theta..(i + 1) * self.n_theta]
    }

    fn validate(&self) -> Result<f64> {
        let n = self.s.len();
        if n < 3 || self.n_theta < 3 || self.values.len() != n * self.n_theta {
            return Err(Error::Domain(format!(
                "sampled field needs at least 3x3 points and a full value table, got {n} x {} with {} values",
                self.n_theta,
                self.values.len()
            )));
        }
        let h = (self.s[n - 1] - self.s[0]) / (n - 1) as f64;
        for w in self.s.windows(2) {
            if ((w[1] - w[0]) - h).abs() > 1e-9 * h {
                return Err(Error::Domain("sampled field needs a uniform s-grid".into()));
            }
        }
        Ok(h)
    }
}

/// `int u^2 dtheta` by the rectangle rule (exact for trigonometric polynomials of low degree).
fn ring_l2(row: &[f64]) -> f64 {
    row.iter().map(|v| v * v).sum::<f64>() * 2.0 * PI / row.len() as f64
}

/// `int u_theta^2 dtheta` from the discrete Fourier coefficients of one ring.
fn ring_dtheta_l2(row: &[f64]) -> f64 {
    let n = row.len();
    let mut acc = 0.0;
    for m in 1..n.div_ceil(2) {
        let (mut re, mut im) = (0.0, 0.0);
        for (j, v) in row.iter().enumerate() {
            let ang = 2.0 * PI * (m * j) as f64 / n as f64;
            re += v * ang.cos();
            im -= v * ang.sin();
        }
        // Modes m and n - m contribute equally for real data.
        acc += 2.0 * (m * m) as f64 * (re * re + im * im);
    }
    acc * 2.0 * PI / (n * n) as f64
}

fn trapezoid(values: &[f64], h: f64) -> f64 {
    let n = values.len();
    h * (values.iter().sum::<f64>() - 0.5 * (values[0] + values[n - 1]))
}

/// `int int u^2 B ds dtheta`.
pub fn l2_norm_sq(params: &CatenoidParams, u: &SampledField) -> Result<f64> {
    let h = u.validate()?;
    let rings: Vec<f64> = (0..u.s.len()).map(|i| ring_l2(u.row(i)) * params.ab(u.s[i]).1).collect();
    Ok(trapezoid(&rings, h))
}

/// The second variation
/// `S(u, u) = int (|grad u|^2 - (|II|^2 - 2) u^2) dA - coth(r) int_boundary u^2 dL`
/// with `dA = B ds dtheta` and `dL = B(s0) dtheta` on both boundary circles.
///
/// `s`-derivatives are second-order differences (one-sided at the ends) and
/// the `s`-integral is the trapezoid rule, so the result is second-order in
/// the `s`-spacing; the `theta` direction is treated spectrally.
pub fn quadratic_form(params: &CatenoidParams, u: &SampledField, tol: &Tolerance) -> Result<f64> {
    let h = u.validate()?;
    let fb = radius(params, tol)?;
    let n = u.s.len();
    let ends = [u.s[0], u.s[n - 1]];
    if ends.iter().any(|e| (e.abs() - fb.s0).abs() > 1e-9 * (1.0 + fb.s0)) || ends[0] > 0.0 {
        return Err(Error::Domain(format!("sampled field must span [-s0, s0] = [{}, {}]", -fb.s0, fb.s0)));
    }
    let nt = u.n_theta;
    let mut bulk = vec![0.0; n];
    let mut ds_row = vec![0.0; nt];
    for i in 0..n {
        for (j, d) in ds_row.iter_mut().enumerate() {
            let at = |k: usize| u.values[k * nt + j];
            *d = if i == 0 {
                (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h)
            } else if i == n - 1 {
                (3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)) / (2.0 * h)
            } else {
                (at(i + 1) - at(i - 1)) / (2.0 * h)
            };
        }
        let s = u.s[i];
        let b = params.ab(s).1;
        let row = u.row(i);
        bulk[i] = b * ring_l2(&ds_row) + ring_dtheta_l2(row) / b - (params.ii_sq(s) - 2.0) * b * ring_l2(row);
    }
    let boundary = params.ab(ends[0]).1 * ring_l2(u.row(0)) + params.ab(ends[1]).1 * ring_l2(u.row(n - 1));
    Ok(trapezoid(&bulk, h) - fb.robin_coef() * boundary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_integrals_of_trigonometric_data() {
        let n = 16;
        let row: Vec<f64> = (0..n).map(|j| (3.0 * 2.0 * PI * j as f64 / n as f64).cos()).collect();
        assert!((ring_l2(&row) - PI).abs() < 1e-13);
        assert!((ring_dtheta_l2(&row) - 9.0 * PI).abs() < 1e-12);
        let flat = vec![2.0; n];
        assert!(ring_dtheta_l2(&flat).abs() < 1e-12);
    }

    #[test]
    fn trapezoid_is_exact_for_linear() {
        let v: Vec<f64> = (0..11).map(|i| i as f64 * 0.1).collect();
        assert!((trapezoid(&v, 0.1) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_grids() {
        let p = crate::geometry::make_params(1.0).unwrap();
        let u = SampledField { s: vec![0.0, 1.0], n_theta: 4, values: vec![0.0; 8] };
        assert!(l2_norm_sq(&p, &u).unwrap_err().is_domain());
    }
}
