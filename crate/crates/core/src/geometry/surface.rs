use serde::{Deserialize, Serialize};

use super::profile::{phi, phi_between};
use super::CatenoidParams;
use crate::error::{Error, Result};
use crate::numerics::Tolerance;

/// The Lorentzian pairing `-u0 v0 + u1 v1 + u2 v2 + u3 v3`.
pub fn minkowski(u: &[f64; 4], v: &[f64; 4]) -> f64 {
    -u[0] * v[0] + u[1] * v[1] + u[2] * v[2] + u[3] * v[3]
}

/// A point of the upper unit hyperboloid in Minkowski 4-space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmbientPoint {
    pub x0: f64,
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl AmbientPoint {
    pub fn to_array(&self) -> [f64; 4] {
        [self.x0, self.x1, self.x2, self.x3]
    }

    /// `<x, x>_L + 1`, zero on the hyperboloid.
    pub fn hyperboloid_defect(&self) -> f64 {
        let x = self.to_array();
        minkowski(&x, &x) + 1.0
    }

    /// Hyperbolic distance to `other`.
    pub fn distance(&self, other: &AmbientPoint) -> f64 {
        (-minkowski(&self.to_array(), &other.to_array())).max(1.0).acosh()
    }
}

/// Unit normal of the surface, in Minkowski components.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalVector {
    pub n0: f64,
    pub n1: f64,
    pub n2: f64,
    pub n3: f64,
}

impl NormalVector {
    pub fn to_array(&self) -> [f64; 4] {
        [self.n0, self.n1, self.n2, self.n3]
    }
}

/// Embedding, unit normal and coordinate tangents at one `(s, theta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceFrame {
    pub point: AmbientPoint,
    pub normal: NormalVector,
    pub t_s: [f64; 4],
    pub t_theta: [f64; 4],
}

pub fn surface_frame(params: &CatenoidParams, s: f64, theta: f64, tol: &Tolerance) -> Result<SurfaceFrame> {
    let ph = phi(params, s, tol)?;
    Ok(frame_with_phi(params, s, theta, ph))
}

fn frame_with_phi(params: &CatenoidParams, s: f64, theta: f64, ph: f64) -> SurfaceFrame {
    let (a, b) = params.ab(s);
    let k = params.k();
    let num = params.a_sinh2s(s);
    let (ch, sh) = (ph.cosh(), ph.sinh());
    let (ct, st) = (theta.cos(), theta.sin());
    let point = AmbientPoint { x0: a * ch, x1: a * sh, x2: b * ct, x3: b * st };

    let n2 = k / b;
    let normal = NormalVector {
        n0: k * ch / a - num * sh / (a * b),
        n1: k * sh / a - num * ch / (a * b),
        n2: ct * n2,
        n3: st * n2,
    };

    let (ap, bp) = (num / a, num / b);
    let a_phi = k / (a * b);
    let t_s = [ap * ch + a_phi * sh, ap * sh + a_phi * ch, bp * ct, bp * st];
    let t_theta = [0.0, 0.0, -b * st, b * ct];
    SurfaceFrame { point, normal, t_s, t_theta }
}

/// The embedding `(A cosh phi, A sinh phi, B cos theta, B sin theta)`.
///
/// ```
/// use catenoid::geometry::{embed, make_params};
/// use catenoid::numerics::Tolerance;
/// let x = embed(&make_params(1.0).unwrap(), 0.0, 0.0, &Tolerance::default()).unwrap();
/// assert!((x.x0 - 1.5f64.sqrt()).abs() < 1e-15 && x.x1 == 0.0);
/// ```
pub fn embed(params: &CatenoidParams, s: f64, theta: f64, tol: &Tolerance) -> Result<AmbientPoint> {
    Ok(surface_frame(params, s, theta, tol)?.point)
}

/// The unit normal, oriented so that `n2 = K/B > 0` along `theta = 0`.
pub fn unit_normal(params: &CatenoidParams, s: f64, theta: f64, tol: &Tolerance) -> Result<NormalVector> {
    Ok(surface_frame(params, s, theta, tol)?.normal)
}

/// Residuals of the four defining conditions of the unit normal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalConditions {
    /// `<nu, nu> - 1`
    pub unit: f64,
    /// `<nu, Phi>`
    pub position: f64,
    /// `<nu, Phi_s>`
    pub tangent_s: f64,
    /// `<nu, Phi_theta>`
    pub tangent_theta: f64,
}

impl NormalConditions {
    pub fn max_abs(&self) -> f64 {
        self.unit.abs().max(self.position.abs()).max(self.tangent_s.abs()).max(self.tangent_theta.abs())
    }
}

pub fn normal_conditions(params: &CatenoidParams, s: f64, theta: f64, tol: &Tolerance) -> Result<NormalConditions> {
    let f = surface_frame(params, s, theta, tol)?;
    let n = f.normal.to_array();
    Ok(NormalConditions {
        unit: minkowski(&n, &n) - 1.0,
        position: minkowski(&n, &f.point.to_array()),
        tangent_s: minkowski(&n, &f.t_s),
        tangent_theta: minkowski(&n, &f.t_theta),
    })
}

/// The radial Killing–Jacobi profile
/// `f*(s) = (K sinh phi + a B sinh(2s) cosh phi) / (A B)`.
pub fn fstar(params: &CatenoidParams, s: f64, tol: &Tolerance) -> Result<f64> {
    Ok(fstar_with_phi(params, s, phi(params, s, tol)?))
}

/// [`fstar`] with a precomputed `phi(s)`.
pub fn fstar_with_phi(params: &CatenoidParams, s: f64, ph: f64) -> f64 {
    let (a, b) = params.ab(s);
    (params.k() * ph.sinh() + b * params.a_sinh2s(s) * ph.cosh()) / (a * b)
}

/// Derivative of `f*` in `s`.
pub fn fstar_prime_with_phi(params: &CatenoidParams, s: f64, ph: f64) -> f64 {
    // f* = x0' with x0 = A cosh(phi); x0'' = A'' cosh + 2 A' phi' sinh + A (phi'' sinh + phi'^2 cosh).
    let (a, b) = params.ab(s);
    let k = params.k();
    let num = params.a_sinh2s(s);
    let ap = num / a;
    let app = (2.0 * params.a() * (2.0 * s).cosh() - ap * ap) / a;
    let bp = num / b;
    let d = k / (a * a * b);
    let dp = -d * (2.0 * ap / a + bp / b);
    let (ch, sh) = (ph.cosh(), ph.sinh());
    app * ch + 2.0 * ap * d * sh + a * (dp * sh + d * d * ch)
}

/// Rotation generators `L_ij = x_i d_j - x_j d_i` of the ball centred at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Generator {
    L12,
    L13,
    L23,
}

impl Generator {
    pub fn indices(self) -> (usize, usize) {
        match self {
            Generator::L12 => (1, 2),
            Generator::L13 => (1, 3),
            Generator::L23 => (2, 3),
        }
    }

    /// The Killing field at `x`.
    pub fn field(self, x: &AmbientPoint) -> [f64; 4] {
        let (i, j) = self.indices();
        let x = x.to_array();
        let mut v = [0.0; 4];
        v[j] = x[i];
        v[i] = -x[j];
        v
    }
}

/// The normal component `<L, nu>` of a rotation generator, paired directly.
pub fn killing_jacobi(params: &CatenoidParams, generator: Generator, s: f64, theta: f64, tol: &Tolerance) -> Result<f64> {
    let f = surface_frame(params, s, theta, tol)?;
    Ok(minkowski(&generator.field(&f.point), &f.normal.to_array()))
}

/// `x0(s + ds) - x0(s)` for the time coordinate `x0 = A cosh phi`, free of
/// the cancellation of subtracting two large values.
pub fn time_coordinate_increment(params: &CatenoidParams, s: f64, ds: f64, tol: &Tolerance) -> Result<f64> {
    let s1 = s + ds;
    let (a0, _) = params.ab(s);
    let (a1, _) = params.ab(s1);
    let phi0 = phi(params, s, tol)?;
    let dphi = phi_between(params, s, s1, tol)?;
    let phi1 = phi0 + dphi;
    let d_a = 2.0 * params.a() * (s + s1).sinh() * (s1 - s).sinh() / (a1 + a0);
    Ok(d_a * phi1.cosh() + a0 * 2.0 * (0.5 * (phi1 + phi0)).sinh() * (0.5 * dphi).sinh())
}

/// First-derivative finite-difference step `max(1e-5, |s| 1e-7)`.
pub fn fd_step(s: f64) -> f64 {
    (s.abs() * 1e-7).max(1e-5)
}

/// Centered difference of `x0 = A cosh phi` with step `h`.
pub fn time_coordinate_slope_fd(params: &CatenoidParams, s: f64, h: f64, tol: &Tolerance) -> Result<f64> {
    Ok(time_coordinate_increment(params, s - h, 2.0 * h, tol)? / (2.0 * h))
}

/// `(1/B)(B x0')' - 2 x0` at `s` by centered differences; zero for the exact surface.
pub fn laplace_eigen_residual(params: &CatenoidParams, s: f64, tol: &Tolerance) -> Result<f64> {
    laplace_eigen_residual_with_step(params, s, fd_step(s), tol)
}

pub fn laplace_eigen_residual_with_step(params: &CatenoidParams, s: f64, h: f64, tol: &Tolerance) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::Domain(format!("finite-difference step must be positive, got {h}")));
    }
    let fwd = time_coordinate_increment(params, s, h, tol)?;
    let bwd = time_coordinate_increment(params, s - h, h, tol)?;
    let x0 = params.ab(s).0 * phi(params, s, tol)?.cosh();
    let d1 = (fwd + bwd) / (2.0 * h);
    let d2 = (fwd - bwd) / (h * h);
    let (_, b) = params.ab(s);
    Ok(d2 + params.b_prime(s) / b * d1 - 2.0 * x0)
}

/// Squared Minkowski chord `|Phi(p) - Phi(q)|^2` between two parameter points.
pub fn chord_sq(params: &CatenoidParams, p: (f64, f64), q: (f64, f64), tol: &Tolerance) -> Result<f64> {
    let (s1, t1) = p;
    let (s2, t2) = q;
    let (a1, b1) = params.ab(s1);
    let (a2, b2) = params.ab(s2);
    let dphi = phi_between(params, s2, s1, tol)?;
    let db = 2.0 * params.a() * (s1 + s2).sinh() * (s1 - s2).sinh() / (b1 + b2);
    let sh = (0.5 * dphi).sinh();
    let sn = (0.5 * (t1 - t2)).sin();
    Ok(2.0 * (a1 * a2 * 2.0 * sh * sh + b1 * b2 * 2.0 * sn * sn + db * db / (a1 * a2 + b1 * b2 + 1.0)))
}

/// Induced metric from centered differences of the embedding.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InducedMetric {
    pub g_ss: f64,
    pub g_s_theta: f64,
    pub g_theta_theta: f64,
}

pub fn induced_metric_fd(params: &CatenoidParams, s: f64, theta: f64, tol: &Tolerance) -> Result<InducedMetric> {
    let h = fd_step(s);
    let g_ss = chord_sq(params, (s + h, theta), (s - h, theta), tol)? / (4.0 * h * h);

    // Only the x2, x3 components of the theta difference are non-zero.
    let (_, b) = params.ab(s);
    let (_, bp) = params.ab(s + h);
    let (_, bm) = params.ab(s - h);
    let db = 2.0 * params.a() * (2.0 * s).sinh() * (2.0 * h).sinh() / (bp + bm);
    // With the sum-to-product form of the theta difference, T_s = (db/2h)(cos, sin)
    // and T_theta = B (sin h / h)(-sin, cos); the common scale is factored out so
    // the angular pairing is not swamped by products of size B B'.
    let (c, sn) = (theta.cos(), theta.sin());
    let g_s_theta = db / (2.0 * h) * b * (h.sin() / h) * (c * -sn + sn * c);
    let g_theta_theta = chord_sq(params, (s, theta + h), (s, theta - h), tol)? / (4.0 * h * h);
    Ok(InducedMetric { g_ss, g_s_theta, g_theta_theta })
}
