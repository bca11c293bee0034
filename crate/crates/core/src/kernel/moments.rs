//! Integrated angular weights `Φ_K` and `Ψ_K`.
//!
//! For `x = |v - v*| > 0`:
//!
//! * `Φ_K(x) = π ∫_0^K (1 - cos G(z/x^γ)) dz`, the part of the jump measure kept by the cutoff;
//! * `Ψ_K(x) = π ∫_K^∞ (1 - cos G(z/x^γ)) dz`, the part removed by it.
//!
//! They govern the drift `∫_0^K ∫_0^{2π} c dφ dz = -(v - v*) Φ_K(x)` and the
//! mean-square jump size `x² Φ_K(x)`.

use std::f64::consts::PI;

use super::angular::SoftPotentialParams;
use super::geometry::CutoffLevel;
use super::quadrature::{integrate, integrate_to_infinity, Tolerance};
use crate::error::{Error, Result};

/// `(Φ_K(x), Ψ_K(x))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularMoments {
    pub phi_k: f64,
    pub psi_k: f64,
}

#[inline]
fn one_minus_cos(theta: f64) -> f64 {
    2.0 * (0.5 * theta).sin().powi(2)
}

fn check_x(x: f64) -> Result<()> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Domain(format!(
            "angular moments need x > 0, got {x}"
        )));
    }
    Ok(())
}

/// `π ∫_0^upper (1 - cos G(z/x^γ)) dz` for any `upper >= 0`.
pub fn phi_truncated(params: &SoftPotentialParams, x: f64, upper: f64) -> Result<f64> {
    check_x(x)?;
    if !(upper >= 0.0) {
        return Err(Error::Domain(format!(
            "upper limit must be >= 0, got {upper}"
        )));
    }
    let s = x.powf(-params.gamma());
    let v = integrate(
        |z| one_minus_cos(params.g(z * s)),
        0.0,
        upper,
        Tolerance::default(),
    )?;
    Ok(PI * v)
}

/// `π ∫_lower^∞ (1 - cos G(z/x^γ)) dz`.
pub fn psi_tail(params: &SoftPotentialParams, x: f64, lower: f64) -> Result<f64> {
    check_x(x)?;
    let s = x.powf(-params.gamma());
    // 1 - cos G <= G²/2, and ∫_b^∞ G(zs)² dz = g_squared_tail(bs)/s.
    let tail = |b: f64| 0.5 * params.g_squared_tail(b * s) / s;
    let v = integrate_to_infinity(
        |z| one_minus_cos(params.g(z * s)),
        lower,
        lower.max(1.0 / s),
        tail,
        Tolerance::default(),
    )?;
    Ok(PI * v)
}

/// `(Φ_K(x), Ψ_K(x))` by adaptive quadrature.
pub fn angular_moments(
    params: &SoftPotentialParams,
    x: f64,
    cutoff: CutoffLevel,
) -> Result<AngularMoments> {
    Ok(AngularMoments {
        phi_k: phi_truncated(params, x, cutoff.value())?,
        psi_k: psi_tail(params, x, cutoff.value())?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::geometry::deviation_c;
    use crate::kernel::quadrature::periodic_integral_vec;
    use crate::vec3::Vec3;

    fn params() -> SoftPotentialParams {
        SoftPotentialParams::new(-0.5, 0.7).unwrap()
    }

    #[test]
    fn phi_vanishes_as_cutoff_shrinks() {
        let p = params();
        let mut prev = f64::INFINITY;
        for upper in [1e-1, 1e-3, 1e-6, 0.0] {
            let v = phi_truncated(&p, 1.3, upper).unwrap();
            assert!(v >= 0.0 && v < prev);
            prev = v;
        }
        assert_eq!(prev, 0.0);
    }

    #[test]
    fn psi_non_increasing_in_k() {
        let p = params();
        let vals: Vec<f64> = [1.0, 2.0, 4.0, 8.0]
            .iter()
            .map(|&k| {
                angular_moments(&p, 0.8, CutoffLevel::new(k).unwrap())
                    .unwrap()
                    .psi_k
            })
            .collect();
        for w in vals.windows(2) {
            assert!(w[1] <= w[0], "{vals:?}");
        }
        assert!(vals.iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn substitution_identity() {
        // Φ_K(x) = π x^γ ∫_0^{K/x^γ} (1 - cos G(u)) du
        let p = params();
        let k = 3.0;
        for x in [0.5, 1.0, 2.0] {
            let direct = phi_truncated(&p, x, k).unwrap();
            let scale = x.powf(p.gamma());
            let substituted = PI
                * scale
                * integrate(
                    |u| one_minus_cos(p.g(u)),
                    0.0,
                    k / scale,
                    Tolerance::default(),
                )
                .unwrap();
            assert!(
                (direct - substituted).abs() <= 1e-8 * direct,
                "x={x}: {direct} vs {substituted}"
            );
        }
    }

    #[test]
    fn phi_plus_psi_is_cutoff_free() {
        let p = params();
        for x in [0.3, 1.0, 4.0] {
            let a = angular_moments(&p, x, CutoffLevel::new(1.0).unwrap()).unwrap();
            let b = angular_moments(&p, x, CutoffLevel::new(10.0).unwrap()).unwrap();
            let (ta, tb) = (a.phi_k + a.psi_k, b.phi_k + b.psi_k);
            assert!((ta - tb).abs() <= 1e-8 * ta);
        }
    }

    #[test]
    fn drift_identity() {
        // ∫_0^K ∫_0^{2π} c dφ dz = -(v - v*) Φ_K(|v - v*|)
        let p = params();
        let k = CutoffLevel::new(4.0).unwrap();
        let (v, w) = (Vec3::new(0.3, -1.0, 2.0), Vec3::new(-0.5, 0.2, 0.1));
        let x = (v - w).norm();
        let comp = |axis: usize| {
            integrate(
                |z| {
                    periodic_integral_vec(|phi| deviation_c(&p, v, w, z, phi, Some(k)), 16)
                        .component(axis)
                },
                0.0,
                k.value(),
                Tolerance::default(),
            )
            .unwrap()
        };
        let lhs = Vec3::new(comp(0), comp(1), comp(2));
        let rhs = -(v - w) * angular_moments(&p, x, k).unwrap().phi_k;
        assert!(
            (lhs - rhs).norm() <= 1e-8 * rhs.norm(),
            "{lhs:?} vs {rhs:?}"
        );
    }

    #[test]
    fn nonpositive_x_rejected() {
        let p = params();
        assert!(angular_moments(&p, 0.0, CutoffLevel::new(1.0).unwrap()).is_err());
        assert!(phi_truncated(&p, -1.0, 1.0).is_err());
    }
}
