use super::Tolerance;
use crate::error::{Error, Result};

// Dormand–Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A2: [f64; 1] = [1.0 / 5.0];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0];
const A6: [f64; 5] = [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0];
const B: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
// B - B*, the embedded error weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;

/// Adaptive explicit Runge–Kutta integrator (Dormand–Prince 5(4)).
///
/// Local error is controlled in the RMS norm with per-component scale
/// `abs_tol + rel_tol * max(|y|, |y_new|)`. The step sequence depends only
/// on the inputs, so repeated runs are bit-identical.
#[derive(Debug, Clone, Copy)]
pub struct Dopri5 {
    pub tol: Tolerance,
    pub max_steps: usize,
}

impl Dopri5 {
    pub fn new(tol: Tolerance) -> Self {
        Dopri5 { tol, max_steps: 2_000_000 }
    }

    pub fn integrate<const N: usize, F>(&self, rhs: F, s_from: f64, s_to: f64, y0: [f64; N]) -> Result<[f64; N]>
    where
        F: FnMut(f64, &[f64; N]) -> [f64; N],
    {
        self.integrate_observed(rhs, s_from, s_to, y0, &[], |_, _, _| {})
    }

    /// Integrates from `s_from` to `s_to`, calling `observe(s, y, at_stop)`
    /// at the initial point and after every accepted step.
    ///
    /// Steps are shortened to land exactly on each entry of `stops`, which
    /// must be ordered in the direction of integration; `at_stop` is true
    /// on those landings.
    pub fn integrate_observed<const N: usize, F, O>(
        &self,
        mut rhs: F,
        s_from: f64,
        s_to: f64,
        y0: [f64; N],
        stops: &[f64],
        mut observe: O,
    ) -> Result<[f64; N]>
    where
        F: FnMut(f64, &[f64; N]) -> [f64; N],
        O: FnMut(f64, &[f64; N], bool),
    {
        let span = s_to - s_from;
        let at_start = stops.first().is_some_and(|&s| s == s_from);
        observe(s_from, &y0, at_start);
        if span == 0.0 {
            return Ok(y0);
        }
        let dir = span.signum();
        let mut next_stop = stops
            .iter()
            .position(|&s| (s - s_from) * dir > 0.0)
            .unwrap_or(stops.len());

        let mut s = s_from;
        let mut y = y0;
        let mut k1 = rhs(s, &y);
        check_finite(&k1, s)?;
        let mut h = self.initial_step(&mut rhs, s, &y, &k1, dir, span.abs())?;
        let mut rejected_last = false;

        for _ in 0..self.max_steps {
            let (target, landing_stop) = match stops.get(next_stop) {
                Some(&stop) if (stop - s_to) * dir < 0.0 => (stop, true),
                _ => (s_to, false),
            };
            let remaining = target - s;
            if remaining.abs() <= 16.0 * f64::EPSILON * target.abs().max(s.abs()) {
                // Already there to rounding: land without a sub-ulp step.
                s = target;
                if landing_stop {
                    next_stop += 1;
                    observe(s, &y, true);
                    continue;
                }
                return Ok(y);
            }
            let last = h.abs() >= remaining.abs();
            let h_step = if last { remaining } else { h };
            if h_step.abs() <= 16.0 * f64::EPSILON * s.abs().max(f64::MIN_POSITIVE.sqrt()) {
                return Err(Error::StepUnderflow { s, step: h_step });
            }

            let (y_new, k7, err) = step(&mut rhs, s, &y, &k1, h_step, &self.tol);
            if !err.is_finite() {
                h = h_step * MIN_FACTOR;
                rejected_last = true;
                continue;
            }
            if err > 1.0 {
                h = h_step * (SAFETY * err.powf(-0.2)).max(MIN_FACTOR);
                rejected_last = true;
                continue;
            }

            s = if last { target } else { s + h_step };
            y = y_new;
            k1 = k7;
            check_finite(&y, s)?;
            let at_stop = last && landing_stop;
            if at_stop {
                next_stop += 1;
            }
            observe(s, &y, at_stop || (last && stops.get(next_stop) == Some(&s)));
            if last && !landing_stop {
                return Ok(y);
            }
            let mut factor = if err == 0.0 { MAX_FACTOR } else { SAFETY * err.powf(-0.2) };
            factor = factor.clamp(MIN_FACTOR, MAX_FACTOR);
            if rejected_last {
                factor = factor.min(1.0);
            }
            rejected_last = false;
            // A step shortened to hit a stop does not shrink the next one.
            h = if last { dir * h.abs().max((h_step * factor).abs()) } else { h_step * factor };
        }
        Err(Error::NonConvergence {
            what: "ODE integration",
            detail: format!("exceeded {} steps between {s_from} and {s_to}", self.max_steps),
        })
    }

    /// Starting step from the Hairer–Nørsett–Wanner heuristic.
    fn initial_step<const N: usize, F>(
        &self,
        rhs: &mut F,
        s: f64,
        y: &[f64; N],
        f0: &[f64; N],
        dir: f64,
        span: f64,
    ) -> Result<f64>
    where
        F: FnMut(f64, &[f64; N]) -> [f64; N],
    {
        let scale = |i: usize| self.tol.abs_tol + self.tol.rel_tol * y[i].abs();
        let d0 = rms((0..N).map(|i| y[i] / scale(i)));
        let d1 = rms((0..N).map(|i| f0[i] / scale(i)));
        let mut h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        h0 = h0.min(span);
        let mut y1 = [0.0; N];
        for i in 0..N {
            y1[i] = y[i] + dir * h0 * f0[i];
        }
        let f1 = rhs(s + dir * h0, &y1);
        check_finite(&f1, s + dir * h0)?;
        let d2 = rms((0..N).map(|i| (f1[i] - f0[i]) / scale(i))) / h0;
        let h1 = if d1.max(d2) <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / d1.max(d2)).powf(0.2)
        };
        Ok(dir * (100.0 * h0).min(h1).min(span))
    }
}

fn rms(it: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = it.fold((0.0, 0usize), |(acc, n), v| (acc + v * v, n + 1));
    if n == 0 {
        0.0
    } else {
        (sum / n as f64).sqrt()
    }
}

fn check_finite<const N: usize>(y: &[f64; N], s: f64) -> Result<()> {
    if y.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite { what: "ODE state", at: s })
    }
}

fn combine<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for i in 0..N {
        let mut acc = 0.0;
        for (w, k) in terms {
            acc += w * k[i];
        }
        out[i] += h * acc;
    }
    out
}

#[allow(clippy::type_complexity)]
fn step<const N: usize, F>(rhs: &mut F, s: f64, y: &[f64; N], k1: &[f64; N], h: f64, tol: &Tolerance) -> ([f64; N], [f64; N], f64)
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    let k2 = rhs(s + C[1] * h, &combine(y, h, &[(A2[0], k1)]));
    let k3 = rhs(s + C[2] * h, &combine(y, h, &[(A3[0], k1), (A3[1], &k2)]));
    let k4 = rhs(s + C[3] * h, &combine(y, h, &[(A4[0], k1), (A4[1], &k2), (A4[2], &k3)]));
    let k5 = rhs(s + C[4] * h, &combine(y, h, &[(A5[0], k1), (A5[1], &k2), (A5[2], &k3), (A5[3], &k4)]));
    let k6 = rhs(
        s + C[5] * h,
        &combine(y, h, &[(A6[0], k1), (A6[1], &k2), (A6[2], &k3), (A6[3], &k4), (A6[4], &k5)]),
    );
    let y_new = combine(y, h, &[(B[0], k1), (B[2], &k3), (B[3], &k4), (B[4], &k5), (B[5], &k6)]);
    let k7 = rhs(s + h, &y_new);

    let ks = [k1, &k2, &k3, &k4, &k5, &k6, &k7];
    let mut sum = 0.0;
    for i in 0..N {
        let mut e = 0.0;
        for (w, k) in E.iter().zip(ks.iter()) {
            e += w * k[i];
        }
        let sc = tol.abs_tol + tol.rel_tol * y[i].abs().max(y_new[i].abs());
        sum += (h * e / sc).powi(2);
    }
    (y_new, k7, (sum / N as f64).sqrt())
}

/// Integrates `y' = rhs(s, y)` from `s_from` to `s_to` with [`Dopri5`].
///
/// ```
/// use catenoid::numerics::{ode_solve, Tolerance};
/// let y = ode_solve(|_, y: &[f64; 1]| [y[0]], 0.0, 1.0, [1.0], &Tolerance::default()).unwrap();
/// assert!((y[0] - std::f64::consts::E).abs() < 1e-10);
/// ```
pub fn ode_solve<const N: usize, F>(rhs: F, s_from: f64, s_to: f64, y0: [f64; N], tol: &Tolerance) -> Result<[f64; N]>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    Dopri5::new(*tol).integrate(rhs, s_from, s_to, y0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E as EULER, FRAC_PI_2};

    fn rk4<const N: usize>(f: impl Fn(f64, &[f64; N]) -> [f64; N], s0: f64, s1: f64, y0: [f64; N], n: usize) -> [f64; N] {
        let h = (s1 - s0) / n as f64;
        let mut y = y0;
        for i in 0..n {
            let s = s0 + i as f64 * h;
            let k1 = f(s, &y);
            let k2 = f(s + h / 2.0, &combine(&y, h / 2.0, &[(1.0, &k1)]));
            let k3 = f(s + h / 2.0, &combine(&y, h / 2.0, &[(1.0, &k2)]));
            let k4 = f(s + h, &combine(&y, h, &[(1.0, &k3)]));
            y = combine(&y, h, &[(1.0 / 6.0, &k1), (1.0 / 3.0, &k2), (1.0 / 3.0, &k3), (1.0 / 6.0, &k4)]);
        }
        y
    }

    #[test]
    fn exponential() {
        let y = ode_solve(|_, y: &[f64; 1]| [y[0]], 0.0, 1.0, [1.0], &Tolerance::default()).unwrap();
        assert!((y[0] - EULER).abs() < 1e-10);
    }

    #[test]
    fn harmonic_oscillator_quarter_period() {
        let y = ode_solve(|_, y: &[f64; 2]| [y[1], -y[0]], 0.0, FRAC_PI_2, [0.0, 1.0], &Tolerance::default()).unwrap();
        assert!((y[0] - 1.0).abs() < 1e-10);
        assert!(y[1].abs() < 1e-10);
    }

    #[test]
    fn backwards_integration() {
        let y = ode_solve(|_, y: &[f64; 1]| [y[0]], 1.0, 0.0, [EULER], &Tolerance::default()).unwrap();
        assert!((y[0] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn rk4_oracle_is_fourth_order() {
        let f = |_: f64, y: &[f64; 1]| [y[0]];
        let e1 = (rk4(f, 0.0, 1.0, [1.0], 20)[0] - EULER).abs();
        let e2 = (rk4(f, 0.0, 1.0, [1.0], 40)[0] - EULER).abs();
        assert!(e1 / e2 >= 8.0, "ratio {}", e1 / e2);
    }

    #[test]
    fn stops_are_hit_exactly() {
        let stops = [0.25, 0.5, 0.75, 1.0];
        let mut seen = Vec::new();
        Dopri5::new(Tolerance::default())
            .integrate_observed(|_, y: &[f64; 1]| [y[0]], 0.0, 1.0, [1.0], &stops, |s, y, at| {
                if at {
                    seen.push((s, y[0]));
                }
            })
            .unwrap();
        assert_eq!(seen.iter().map(|p| p.0).collect::<Vec<_>>(), stops.to_vec());
        for (s, y) in seen {
            assert!((y - s.exp()).abs() < 1e-11);
        }
    }

    #[test]
    fn deterministic() {
        let run = || ode_solve(|s, y: &[f64; 2]| [y[1], -s * y[0]], 0.0, 5.0, [1.0, 0.0], &Tolerance::default()).unwrap();
        assert_eq!(run(), run());
    }

    #[test]
    fn blow_up_is_reported() {
        // y' = y^2, y(0) = 1 blows up at s = 1.
        let err = ode_solve(|_, y: &[f64; 1]| [y[0] * y[0]], 0.0, 2.0, [1.0], &Tolerance::default()).unwrap_err();
        assert!(matches!(err, Error::StepUnderflow { .. } | Error::NonFinite { .. } | Error::NonConvergence { .. }));
    }
}
