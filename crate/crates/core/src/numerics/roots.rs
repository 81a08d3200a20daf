use serde::{Deserialize, Serialize};

use super::Tolerance;
use crate::error::{Error, Result};

/// A sign-changing interval: `lo < hi` and `f_lo * f_hi < 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

impl Bracket {
    pub fn new(lo: f64, hi: f64, f_lo: f64, f_hi: f64) -> Result<Self> {
        let b = Bracket { lo, hi, f_lo, f_hi };
        b.check()?;
        Ok(b)
    }

    /// Evaluates `f` at both ends and validates the result.
    pub fn evaluate<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64) -> Result<Self> {
        let (f_lo, f_hi) = (f(lo), f(hi));
        Bracket::new(lo, hi, f_lo, f_hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    fn check(&self) -> Result<()> {
        let signs_differ = (self.f_lo < 0.0 && self.f_hi > 0.0) || (self.f_lo > 0.0 && self.f_hi < 0.0);
        if !(self.lo < self.hi) || !signs_differ {
            return Err(Error::InvalidBracket { lo: self.lo, hi: self.hi, f_lo: self.f_lo, f_hi: self.f_hi });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Up,
    Down,
}

/// Brent's method on a valid bracket.
///
/// Inverse quadratic / secant steps are taken only while they stay inside
/// the shrinking bracket and make enough progress; otherwise the step is a
/// bisection. On exit the bracket around the returned root is no wider than
/// `tol.abs_tol + tol.rel_tol * |x| + 4 eps |x|`.
///
/// ```
/// use catenoid::numerics::{find_root, Bracket, Tolerance};
/// let f = |x: f64| x * x - 2.0;
/// let b = Bracket::evaluate(f, 1.0, 2.0).unwrap();
/// let x = find_root(f, b, &Tolerance::new(1e-14, 0.0).unwrap()).unwrap();
/// assert!((x - 2f64.sqrt()).abs() < 1e-13);
/// ```
pub fn find_root<F: FnMut(f64) -> f64>(mut f: F, bracket: Bracket, tol: &Tolerance) -> Result<f64> {
    try_find_root(|x| Ok(f(x)), bracket, tol)
}

/// [`find_root`] for fallible functions; the first error aborts the search.
pub fn try_find_root<F>(mut f: F, bracket: Bracket, tol: &Tolerance) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    bracket.check()?;
    let Bracket { lo, hi, f_lo, f_hi } = bracket;
    let (mut a, mut b, mut c) = (lo, hi, hi);
    let (mut fa, mut fb, mut fc) = (f_lo, f_hi, f_hi);
    let (mut d, mut e) = (0.0_f64, 0.0_f64);

    for _ in 0..tol.max_iter {
        if (fb > 0.0 && fc > 0.0) || (fb < 0.0 && fc < 0.0) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * (tol.abs_tol + tol.rel_tol * b.abs());
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b)?;
        if !fb.is_finite() {
            return Err(Error::NonFinite { what: "root-finding target", at: b });
        }
    }
    Err(Error::NonConvergence {
        what: "root finding",
        detail: format!("bracket [{}, {}] still open after {} iterations", b.min(c), b.max(c), tol.max_iter),
    })
}

/// Walks away from `seed` with doubling strides until `f` changes sign.
///
/// The probe points are `seed ± d (2^k - 1)` with `d = |seed|` (or 1 when
/// the seed is zero), so for a positive seed moving up they are exactly
/// `seed * 2^k`. Exact zeros are stepped over.
pub fn expand_bracket<F: FnMut(f64) -> f64>(mut f: F, seed: f64, direction: Direction, tol: &Tolerance) -> Result<Bracket> {
    try_expand_bracket(|x| Ok(f(x)), seed, direction, tol)
}

pub fn try_expand_bracket<F>(mut f: F, seed: f64, direction: Direction, tol: &Tolerance) -> Result<Bracket>
where
    F: FnMut(f64) -> Result<f64>,
{
    let stride = if seed == 0.0 { 1.0 } else { seed.abs() };
    let sign = match direction {
        Direction::Up => 1.0,
        Direction::Down => -1.0,
    };
    let mut prev = seed;
    let mut f_prev = f(seed)?;
    let mut x = seed;
    let mut scale = 1.0;
    for _ in 0..tol.max_iter {
        scale *= 2.0;
        x = seed + sign * stride * (scale - 1.0);
        let fx = f(x)?;
        if !fx.is_finite() {
            return Err(Error::NonFinite { what: "bracket expansion", at: x });
        }
        if fx == 0.0 {
            continue;
        }
        if f_prev != 0.0 && (fx > 0.0) != (f_prev > 0.0) {
            return if prev < x { Bracket::new(prev, x, f_prev, fx) } else { Bracket::new(x, prev, fx, f_prev) };
        }
        prev = x;
        f_prev = fx;
    }
    Err(Error::NoSignChange { seed, last: x, iterations: tol.max_iter })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tight() -> Tolerance {
        Tolerance::new(1e-14, 0.0).unwrap()
    }

    #[test]
    fn sqrt_two() {
        let f = |x: f64| x * x - 2.0;
        let x = find_root(f, Bracket::evaluate(f, 1.0, 2.0).unwrap(), &tight()).unwrap();
        assert!((x - std::f64::consts::SQRT_2).abs() < 1e-13);
    }

    #[test]
    fn coth_fixed_point_against_bisection() {
        let f = |s: f64| s - 1.0 / s.tanh();
        // Plain bisection oracle.
        let (mut lo, mut hi) = (1.0_f64, 1.5_f64);
        while hi - lo > 1e-13 {
            let mid = 0.5 * (lo + hi);
            if f(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let oracle = 0.5 * (lo + hi);
        assert!(f(oracle).abs() < 1e-12);
        let x = find_root(f, Bracket::evaluate(f, 1.0, 1.5).unwrap(), &tight()).unwrap();
        assert!((x - oracle).abs() < 1e-12);
        assert!((x - 1.199_678_64).abs() < 1e-8);
    }

    #[test]
    fn odd_linear_root_at_origin() {
        let x = find_root(|x| x, Bracket::new(-1.0, 1.0, -1.0, 1.0).unwrap(), &tight()).unwrap();
        assert!(x.abs() < 1e-14);
    }

    #[test]
    fn residual_is_bounded_by_slope_times_width() {
        let tol = Tolerance::new(1e-10, 0.0).unwrap();
        for (f, lo, hi, slope) in [
            (Box::new(|x: f64| x.exp() - 3.0) as Box<dyn Fn(f64) -> f64>, 0.0, 2.0, 3.0),
            (Box::new(|x: f64| x.powi(3) - x - 1.0), 1.0, 2.0, 4.3),
            (Box::new(|x: f64| x.cos() - x), 0.0, 1.0, 1.7),
        ] {
            let x = find_root(&f, Bracket::evaluate(&f, lo, hi).unwrap(), &tol).unwrap();
            assert!(f(x).abs() <= slope * (tol.abs_tol + 4.0 * f64::EPSILON * x.abs()));
        }
    }

    #[test]
    fn bracket_without_sign_change_is_rejected() {
        assert!(matches!(Bracket::evaluate(|x| x * x + 1.0, -1.0, 1.0), Err(Error::InvalidBracket { .. })));
        assert!(Bracket::new(1.0, 0.0, -1.0, 1.0).is_err());
        let bad = Bracket { lo: 0.0, hi: 1.0, f_lo: 1.0, f_hi: 2.0 };
        assert!(matches!(find_root(|x| x, bad, &tight()), Err(Error::InvalidBracket { .. })));
    }

    #[test]
    fn expansion_up_and_down() {
        let tol = Tolerance::default();
        let up = expand_bracket(|x| x - 5.0, 1.0, Direction::Up, &tol).unwrap();
        assert!(up.lo < 5.0 && up.hi > 5.0);
        let down = expand_bracket(|x| x + 3.0, 1.0, Direction::Down, &tol).unwrap();
        assert!(down.lo < -3.0 && down.hi > -3.0);
        assert_eq!((up.lo, up.hi), (4.0, 8.0));
    }

    #[test]
    fn expansion_gives_up() {
        let tol = Tolerance::default().with_max_iter(20);
        let err = expand_bracket(|x| x * x + 1.0, 1.0, Direction::Up, &tol).unwrap_err();
        assert!(matches!(err, Error::NoSignChange { iterations: 20, .. }));
    }
}
