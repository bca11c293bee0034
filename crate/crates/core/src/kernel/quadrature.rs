//! Adaptive Simpson quadrature plus the two variants the kernel bounds need:
//! semi-infinite ranges with a caller-supplied tail bound, and periodic
//! trapezoid sums over a full turn of the azimuth.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::vec3::Vec3;

/// Relative and absolute tolerance pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            rel: 1e-9,
            abs: 1e-14,
        }
    }
}

const INITIAL_PANELS: usize = 16;
const MAX_DEPTH: u32 = 40;
const MAX_TAIL_PANELS: usize = 400;

struct Segment {
    a: f64,
    m: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
}

fn simpson_rec<F: Fn(f64) -> f64>(
    f: &F,
    s: Segment,
    eps: f64,
    depth: u32,
    exhausted: &mut bool,
) -> f64 {
    let lm = 0.5 * (s.a + s.m);
    let rm = 0.5 * (s.m + s.b);
    let (flm, frm) = (f(lm), f(rm));
    let left = (s.m - s.a) / 6.0 * (s.fa + 4.0 * flm + s.fm);
    let right = (s.b - s.m) / 6.0 * (s.fm + 4.0 * frm + s.fb);
    let delta = left + right - s.whole;

    // Interval can no longer be halved in floating point.
    let unsplittable = lm <= s.a || rm >= s.b || lm >= s.m || rm <= s.m;
    if delta.abs() <= 15.0 * eps || unsplittable {
        return left + right + delta / 15.0;
    }
    if depth == 0 {
        *exhausted = true;
        return left + right + delta / 15.0;
    }
    let l = Segment {
        a: s.a,
        m: lm,
        b: s.m,
        fa: s.fa,
        fm: flm,
        fb: s.fm,
        whole: left,
    };
    let r = Segment {
        a: s.m,
        m: rm,
        b: s.b,
        fa: s.fm,
        fm: frm,
        fb: s.fb,
        whole: right,
    };
    simpson_rec(f, l, 0.5 * eps, depth - 1, exhausted)
        + simpson_rec(f, r, 0.5 * eps, depth - 1, exhausted)
}

fn segments<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Vec<Segment> {
    let h = (b - a) / INITIAL_PANELS as f64;
    let mut out = Vec::with_capacity(INITIAL_PANELS);
    let mut fa = f(a);
    for k in 0..INITIAL_PANELS {
        let lo = a + h * k as f64;
        let hi = if k + 1 == INITIAL_PANELS {
            b
        } else {
            a + h * (k + 1) as f64
        };
        let m = 0.5 * (lo + hi);
        let (fm, fb) = (f(m), f(hi));
        out.push(Segment {
            a: lo,
            m,
            b: hi,
            fa,
            fm,
            fb,
            whole: (hi - lo) / 6.0 * (fa + 4.0 * fm + fb),
        });
        fa = fb;
    }
    out
}

/// Integrates `f` over `[a, b]` with an absolute error target `eps`.
fn simpson_abs<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, eps: f64) -> Result<f64> {
    let mut exhausted = false;
    let panel_eps = eps / INITIAL_PANELS as f64;
    let total: f64 = segments(f, a, b)
        .into_iter()
        .map(|s| simpson_rec(f, s, panel_eps, MAX_DEPTH, &mut exhausted))
        .sum();
    if exhausted {
        return Err(Error::Numerical(format!(
            "adaptive Simpson on [{a}, {b}] hit depth {MAX_DEPTH} before reaching {eps:e}"
        )));
    }
    if !total.is_finite() {
        return Err(Error::Numerical(format!(
            "adaptive Simpson on [{a}, {b}] produced a non-finite value"
        )));
    }
    Ok(total)
}

/// Adaptive Simpson on a finite interval.
///
/// The absolute target is `max(tol.abs, tol.rel * |coarse estimate|)`, where the
/// coarse estimate is a 16-panel composite Simpson sum.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain(format!(
            "integration bounds must be finite, got [{a}, {b}]"
        )));
    }
    if a == b {
        return Ok(0.0);
    }
    if b < a {
        return integrate(f, b, a, tol).map(|v| -v);
    }
    let coarse: f64 = segments(&f, a, b).iter().map(|s| s.whole).sum();
    let eps = tol.abs.max(tol.rel * coarse.abs());
    simpson_abs(&f, a, b, eps)
}

/// Integrates `f` over `[a, ∞)`.
///
/// The range is covered by panels of geometrically growing length starting at
/// `scale`; integration stops once `tail_bound(b)`, an upper bound for
/// `∫_b^∞ |f|`, falls below the running tolerance.
pub fn integrate_to_infinity<F, T>(
    f: F,
    a: f64,
    scale: f64,
    tail_bound: T,
    tol: Tolerance,
) -> Result<f64>
where
    F: Fn(f64) -> f64,
    T: Fn(f64) -> f64,
{
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::Domain(format!(
            "panel scale must be positive, got {scale}"
        )));
    }
    let mut lo = a;
    let mut width = scale;
    let mut total = 0.0f64;
    for _ in 0..MAX_TAIL_PANELS {
        let hi = lo + width;
        let coarse: f64 = segments(&f, lo, hi).iter().map(|s| s.whole).sum();
        let eps = tol.abs.max(tol.rel * total.abs().max(coarse.abs()));
        total += simpson_abs(&f, lo, hi, eps)?;
        lo = hi;
        width *= 2.0;
        if tail_bound(lo) <= tol.abs.max(tol.rel * total.abs()) {
            return Ok(total);
        }
    }
    Err(Error::Numerical(format!(
        "tail bound still {:e} at z = {lo:e} after {MAX_TAIL_PANELS} panels",
        tail_bound(lo)
    )))
}

/// `∫_0^{2π} f(φ) dφ` by the `n`-point periodic trapezoid rule, exact for
/// trigonometric polynomials of degree below `n`.
pub fn periodic_integral<F: Fn(f64) -> f64>(f: F, n: usize) -> f64 {
    let h = 2.0 * PI / n as f64;
    (0..n).map(|k| f(h * k as f64)).sum::<f64>() * h
}

/// Vector-valued variant of [`periodic_integral`].
pub fn periodic_integral_vec<F: Fn(f64) -> Vec3>(f: F, n: usize) -> Vec3 {
    let h = 2.0 * PI / n as f64;
    (0..n).map(|k| f(h * k as f64)).sum::<Vec3>() * h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let v = integrate(|x| x * x * x - 2.0 * x, 0.0, 2.0, Tolerance::default()).unwrap();
        assert!((v - 0.0).abs() < 1e-13);
        let v = integrate(|x| x * x, 0.0, 3.0, Tolerance::default()).unwrap();
        assert!((v - 9.0).abs() < 1e-12);
    }

    #[test]
    fn reversed_bounds_flip_sign() {
        let v = integrate(f64::exp, 1.0, 0.0, Tolerance::default()).unwrap();
        assert!((v + (1f64.exp() - 1.0)).abs() < 1e-9);
    }

    #[test]
    fn peaked_integrand() {
        // ∫_{-1}^{1} 1/(1e-4 + x²) dx = 2·atan(1/0.01)/0.01
        let exact = 2.0 * (1.0f64 / 0.01).atan() / 0.01;
        let v = integrate(|x| 1.0 / (1e-4 + x * x), -1.0, 1.0, Tolerance::default()).unwrap();
        assert!(((v - exact) / exact).abs() < 1e-8, "{v} vs {exact}");
    }

    #[test]
    fn semi_infinite_power_tail() {
        // ∫_0^∞ (1+z)^{-3} dz = 1/2, tail ∫_b^∞ = (1+b)^{-2}/2
        let v = integrate_to_infinity(
            |z| (1.0 + z).powi(-3),
            0.0,
            1.0,
            |b| 0.5 * (1.0 + b).powi(-2),
            Tolerance::default(),
        )
        .unwrap();
        assert!((v - 0.5).abs() < 1e-9);
    }

    #[test]
    fn periodic_rule_kills_first_harmonic() {
        let v = periodic_integral(|p| p.cos() + 2.0 * p.sin() + 1.0, 8);
        assert!((v - 2.0 * PI).abs() < 1e-13);
    }

    #[test]
    fn non_finite_bounds_rejected() {
        assert!(matches!(
            integrate(|x| x, 0.0, f64::INFINITY, Tolerance::default()),
            Err(Error::Domain(_))
        ));
    }
}
