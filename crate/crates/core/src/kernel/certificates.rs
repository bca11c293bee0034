//! Numerical certificates for the kernel inequalities.
//!
//! Each certificate samples random inputs, evaluates the relevant quantity
//! (directly, or by quadrature through [`deviation_c`]) and reports a
//! statistic together with the threshold it must respect.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::angular::SoftPotentialParams;
use super::geometry::{deviation_a, deviation_c, tanaka_gap_on_grid, tanaka_phi0, CutoffLevel};
use super::quadrature::{
    integrate, integrate_to_infinity, periodic_integral, periodic_integral_vec, Tolerance,
};
use crate::error::Result;
use crate::rng::{stream_rng, CERTIFICATE_STREAM_BASE};
use crate::vec3::Vec3;

/// Azimuthal nodes for the inner `φ` integrals; the integrands are
/// trigonometric polynomials of degree <= 2, so 8 nodes are exact.
const PHI_NODES: usize = 8;

/// Allowed relative growth of an empirical maximum when the sample doubles.
pub const STABILITY_TOLERANCE: f64 = 0.10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub name: String,
    /// Observed value compared against `threshold`.
    pub statistic: f64,
    pub threshold: f64,
    pub passed: bool,
    pub detail: String,
}

impl Certificate {
    fn at_most(name: impl Into<String>, statistic: f64, threshold: f64, detail: String) -> Self {
        Certificate {
            name: name.into(),
            statistic,
            threshold,
            passed: statistic <= threshold,
            detail,
        }
    }
}

fn random_velocity<R: Rng>(rng: &mut R, half_width: f64) -> Vec3 {
    Vec3::new(
        rng.random_range(-half_width..half_width),
        rng.random_range(-half_width..half_width),
        rng.random_range(-half_width..half_width),
    )
}

/// `∫_0^∞ (G(z/x) - G(z/y))² dz / ((x-y)²/(x+y))`.
pub fn ineq_ratio(params: &SoftPotentialParams, x: f64, y: f64) -> Result<f64> {
    let m = x.max(y);
    let integral = integrate_to_infinity(
        |z| (params.g(z / x) - params.g(z / y)).powi(2),
        0.0,
        x.min(y),
        |b| m * params.g_squared_tail(b / m),
        Tolerance::default(),
    )?;
    Ok(integral * (x + y) / (x - y).powi(2))
}

/// `∫_0^∞ ∫_0^{2π} |c_K|² dφ dz / |v - v*|^{γ+2}`; `None` means no cutoff.
pub fn jump_square_ratio(
    params: &SoftPotentialParams,
    v: Vec3,
    v_star: Vec3,
    cutoff: Option<CutoffLevel>,
) -> Result<f64> {
    let x = (v - v_star).norm();
    let inner = |z: f64| {
        periodic_integral(
            |phi| deviation_c(params, v, v_star, z, phi, cutoff).norm_sq(),
            PHI_NODES,
        )
    };
    let integral = z_integral(params, x, cutoff, inner, x * x)?;
    Ok(integral / x.powf(params.gamma() + 2.0))
}

/// `∫_0^∞ |∫_0^{2π} c_K dφ| dz / |v - v*|^{γ+1}`; `None` means no cutoff.
pub fn drift_ratio(
    params: &SoftPotentialParams,
    v: Vec3,
    v_star: Vec3,
    cutoff: Option<CutoffLevel>,
) -> Result<f64> {
    let x = (v - v_star).norm();
    let inner = |z: f64| {
        periodic_integral_vec(
            |phi| deviation_c(params, v, v_star, z, phi, cutoff),
            PHI_NODES,
        )
        .norm()
    };
    let integral = z_integral(params, x, cutoff, inner, x)?;
    Ok(integral / x.powf(params.gamma() + 1.0))
}

/// Integrates an inner `φ`-integral over `z`, either on `[0, K]` or on `[0, ∞)`.
/// Both integrands are bounded by `(π/2) · weight · G(z/x^γ)²`, which gives the tail bound.
fn z_integral<F: Fn(f64) -> f64>(
    params: &SoftPotentialParams,
    x: f64,
    cutoff: Option<CutoffLevel>,
    inner: F,
    weight: f64,
) -> Result<f64> {
    let s = x.powf(-params.gamma());
    match cutoff {
        Some(k) => integrate(inner, 0.0, k.value(), Tolerance::default()),
        None => integrate_to_infinity(
            inner,
            0.0,
            1.0 / s,
            |b| FRAC_PI_2 * weight * params.g_squared_tail(b * s) / s,
            Tolerance::default(),
        ),
    }
}

/// Empirical maxima over the first `n` and all `2n` samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MaxStability {
    pub max_half: f64,
    pub max_full: f64,
}

impl MaxStability {
    pub fn from_values(values: &[f64]) -> Self {
        let half = values.len() / 2;
        let max = |s: &[f64]| s.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        MaxStability {
            max_half: max(&values[..half]),
            max_full: max(values),
        }
    }

    /// Relative growth of the maximum from `n` to `2n` samples.
    pub fn growth(&self) -> f64 {
        (self.max_full - self.max_half) / self.max_full
    }

    pub fn is_stable(&self) -> bool {
        self.max_full.is_finite() && self.growth() <= STABILITY_TOLERANCE
    }
}

fn ratio_certificate(name: String, values: &[f64]) -> Certificate {
    let s = MaxStability::from_values(values);
    Certificate {
        detail: format!(
            "max over {} = {:.6e}, over {} = {:.6e}",
            values.len() / 2,
            s.max_half,
            values.len(),
            s.max_full
        ),
        name,
        statistic: s.growth(),
        threshold: STABILITY_TOLERANCE,
        passed: s.is_stable(),
    }
}

/// Max absolute error of `|a| = sqrt((1 - cos θ)/2)|v - v*|` over `samples` draws.
pub fn magnitude_identity(samples: usize, seed: u64) -> Certificate {
    let mut rng = stream_rng(seed, CERTIFICATE_STREAM_BASE);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let v = random_velocity(&mut rng, 5.0);
        let w = random_velocity(&mut rng, 5.0);
        let theta = rng.random_range(0.0..PI);
        let phi = rng.random_range(0.0..TAU);
        let a = deviation_a(v, w, theta, phi);
        // sqrt((1 - cos θ)/2) = sin(θ/2) on [0, π], free of cancellation at small θ
        let expected = (0.5 * theta).sin() * (v - w).norm();
        worst = worst.max((a.norm() - expected).abs());
    }
    Certificate::at_most(
        "deviation_magnitude",
        worst,
        1e-12,
        format!("{samples} random (v, v*, theta, phi)"),
    )
}

/// Roundtrip error of `H(G(z))`, the value `G(0)` and the `G` envelope.
pub fn angular_map(params: &SoftPotentialParams) -> Vec<Certificate> {
    let zs = [0.0, 0.1, 1.0, 10.0, 1e4, 1e6];
    let roundtrip = zs
        .iter()
        .map(|&z| {
            let back = params.angular_h(params.g(z)).unwrap_or(f64::NAN);
            (back - z).abs() / z.max(1.0)
        })
        .fold(0.0, f64::max);

    let (c2, c3) = params.envelope_constants();
    let mut envelope_gap: f64 = 0.0;
    // log-spaced grid on (0, 1e6] plus z = 0
    for k in 0..=600 {
        let z = if k == 0 {
            0.0
        } else {
            10f64.powf(-6.0 + 12.0 * k as f64 / 600.0)
        };
        let g = params.g(z);
        let env = (1.0 + z).powf(-1.0 / params.nu());
        let below = (c2 * env - g) / g;
        let above = (g - c3 * env) / g;
        envelope_gap = envelope_gap.max(below).max(above);
    }

    vec![
        Certificate::at_most(
            "angular_roundtrip",
            roundtrip,
            1e-12,
            format!("relative |H(G(z)) - z| on z in {zs:?}"),
        ),
        Certificate::at_most(
            "angular_g_at_zero",
            (params.g(0.0) - FRAC_PI_2).abs(),
            0.0,
            "G(0) = pi/2".into(),
        ),
        Certificate::at_most(
            "angular_envelope",
            envelope_gap.max(0.0),
            1e-12,
            format!("c2 = {c2:.6}, c3 = {c3:.6} on z in [0, 1e6]"),
        ),
    ]
}

/// `max_φ |Γ(X,φ) - Γ(Y,φ+φ0)| - |X - Y|` over random pairs and a 64-point grid.
pub fn tanaka_alignment(samples: usize, seed: u64) -> Result<Certificate> {
    let mut rng = stream_rng(seed, CERTIFICATE_STREAM_BASE + 1);
    let mut worst = f64::NEG_INFINITY;
    for k in 0..samples {
        let x = random_velocity(&mut rng, 5.0);
        // every third pair is a small perturbation, where the bound is tightest
        let y = if k % 3 == 0 {
            x + random_velocity(&mut rng, 0.01)
        } else {
            random_velocity(&mut rng, 5.0)
        };
        if x.norm() == 0.0 || y.norm() == 0.0 {
            continue;
        }
        let phi0 = tanaka_phi0(x, y)?;
        let gap = tanaka_gap_on_grid(x, y, phi0, 64)?;
        worst = worst.max(gap - (x - y).norm());
    }
    Ok(Certificate::at_most(
        "tanaka_alignment",
        worst,
        1e-10,
        format!("{samples} random pairs, 64-point phi grid"),
    ))
}

/// Stability of the normalised quadrature ratios for `(ineq)`, `(ee4)` and `(ee5)`.
///
/// Each ratio is evaluated on `2 * samples` random inputs; the certificate
/// passes when the maximum over all of them exceeds the maximum over the first
/// `samples` by at most [`STABILITY_TOLERANCE`].
pub fn quadrature_ratios(
    params: &SoftPotentialParams,
    samples: usize,
    seed: u64,
) -> Result<Vec<Certificate>> {
    let total = 2 * samples;
    let mut rng = stream_rng(seed, CERTIFICATE_STREAM_BASE + 2);
    let pairs: Vec<(f64, f64)> = (0..total)
        .map(|_| {
            (
                10.0 - rng.random_range(0.0..10.0),
                10.0 - rng.random_range(0.0..10.0),
            )
        })
        .collect();
    let velocities: Vec<(Vec3, Vec3)> = (0..total)
        .map(|_| {
            (
                random_velocity(&mut rng, 5.0),
                random_velocity(&mut rng, 5.0),
            )
        })
        .collect();

    let mut out = Vec::new();

    let ineq: Vec<f64> = pairs
        .par_iter()
        .map(|&(x, y)| ineq_ratio(params, x, y))
        .collect::<Result<_>>()?;
    out.push(ratio_certificate("ineq_ratio".into(), &ineq));

    let cutoffs: Vec<Option<CutoffLevel>> = vec![
        Some(CutoffLevel::new(1.0)?),
        Some(CutoffLevel::new(10.0)?),
        Some(CutoffLevel::new(100.0)?),
        None,
    ];
    for cutoff in cutoffs {
        let label = match cutoff {
            Some(k) => format!("K={}", k.value()),
            None => "no cutoff".to_string(),
        };
        let squares: Vec<f64> = velocities
            .par_iter()
            .map(|&(v, w)| jump_square_ratio(params, v, w, cutoff))
            .collect::<Result<_>>()?;
        out.push(ratio_certificate(
            format!("jump_square_ratio ({label})"),
            &squares,
        ));
        let drifts: Vec<f64> = velocities
            .par_iter()
            .map(|&(v, w)| drift_ratio(params, v, w, cutoff))
            .collect::<Result<_>>()?;
        out.push(ratio_certificate(format!("drift_ratio ({label})"), &drifts));
    }
    Ok(out)
}

/// Pairwise balance of the `φ`-averaged generator: for random `(v_i, v_j, θ)`
/// the momentum and energy gained by `i` (colliding with `j`) and `j`
/// (colliding with `i`) cancel.
pub fn symmetrized_conservation(samples: usize, seed: u64) -> Certificate {
    let mut rng = stream_rng(seed, CERTIFICATE_STREAM_BASE + 3);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let vi = random_velocity(&mut rng, 5.0);
        let vj = random_velocity(&mut rng, 5.0);
        let theta = rng.random_range(0.0..FRAC_PI_2);
        let momentum = periodic_integral_vec(
            |phi| deviation_a(vi, vj, theta, phi) + deviation_a(vj, vi, theta, phi),
            PHI_NODES,
        );
        let energy = periodic_integral(
            |phi| {
                (vi + deviation_a(vi, vj, theta, phi)).norm_sq() - vi.norm_sq()
                    + (vj + deviation_a(vj, vi, theta, phi)).norm_sq()
                    - vj.norm_sq()
            },
            PHI_NODES,
        );
        let scale = 1.0 + vi.norm_sq() + vj.norm_sq();
        worst = worst.max(momentum.norm() / scale).max(energy.abs() / scale);
    }
    Certificate::at_most(
        "symmetrized_conservation",
        worst,
        1e-12,
        format!("{samples} random (v_i, v_j, theta)"),
    )
}

/// The full certificate suite. `ratio_samples` is the base sample size of the
/// quadrature stability checks.
pub fn run_all(
    params: &SoftPotentialParams,
    ratio_samples: usize,
    seed: u64,
) -> Result<Vec<Certificate>> {
    let mut out = vec![magnitude_identity(10_000, seed)];
    out.extend(angular_map(params));
    out.push(tanaka_alignment(10_000, seed)?);
    out.push(symmetrized_conservation(1_000, seed));
    out.extend(quadrature_ratios(params, ratio_samples, seed)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> SoftPotentialParams {
        SoftPotentialParams::new(-0.5, 0.7).unwrap()
    }

    #[test]
    fn ineq_ratio_is_symmetric_and_scale_free() {
        let p = params();
        let a = ineq_ratio(&p, 1.0, 3.0).unwrap();
        let b = ineq_ratio(&p, 3.0, 1.0).unwrap();
        let c = ineq_ratio(&p, 2.0, 6.0).unwrap();
        assert!((a - b).abs() <= 1e-8 * a);
        // both sides are homogeneous of degree one in (x, y)
        assert!((a - c).abs() <= 1e-7 * a, "{a} vs {c}");
    }

    #[test]
    fn jump_square_matches_phi_k() {
        // ∫∫|c_K|² = x² Φ_K(x)
        let p = params();
        let (v, w) = (Vec3::new(1.0, 0.5, -0.2), Vec3::new(-0.3, 0.0, 0.4));
        let x = (v - w).norm();
        let k = CutoffLevel::new(10.0).unwrap();
        let r = jump_square_ratio(&p, v, w, Some(k)).unwrap();
        let phi_k = crate::kernel::moments::angular_moments(&p, x, k)
            .unwrap()
            .phi_k;
        let expected = x * x * phi_k / x.powf(p.gamma() + 2.0);
        assert!((r - expected).abs() <= 1e-8 * expected);
    }

    #[test]
    fn cutoff_free_ratio_dominates_truncated() {
        let p = params();
        let (v, w) = (Vec3::new(2.0, 0.0, 0.0), Vec3::ZERO);
        let k = CutoffLevel::new(1.0).unwrap();
        assert!(
            jump_square_ratio(&p, v, w, None).unwrap()
                > jump_square_ratio(&p, v, w, Some(k)).unwrap()
        );
        assert!(drift_ratio(&p, v, w, None).unwrap() > drift_ratio(&p, v, w, Some(k)).unwrap());
    }

    #[test]
    fn small_suite_passes() {
        let p = params();
        assert!(magnitude_identity(500, 1).passed);
        assert!(angular_map(&p).iter().all(|c| c.passed));
        assert!(tanaka_alignment(500, 1).unwrap().passed);
        assert!(symmetrized_conservation(200, 1).passed);
    }
}
