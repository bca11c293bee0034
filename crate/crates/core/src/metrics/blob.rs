//! Blob (mollified) `L^p` norms of empirical measures.
//!
//! The mollifier is the normalised indicator `ψ_ε(x) = 3/(4πε³) · 1{|x| <= ε}`,
//! so `μ * ψ_ε` is piecewise constant: on any point of space it equals
//! `3/(4πε³N)` times the number of particles within distance `ε`.

use std::collections::HashMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::EmpiricalMeasure;
use crate::error::{Error, Result};

/// Accepted relative change between two successive grid refinements.
const REFINEMENT_TOLERANCE: f64 = 0.02;
/// Refinement doublings tried after the initial grid.
const MAX_DOUBLINGS: u32 = 3;
/// Literal constant of the cube-occupancy bound (`15^3`).
const CUBE_CONSTANT: f64 = 3375.0;

/// Blob width `ε`, norm exponent `p ∈ (1, 2)` and localisation exponent `δ ∈ (0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlobSpec {
    pub epsilon: f64,
    pub p: f64,
    pub delta: f64,
}

impl BlobSpec {
    pub fn new(epsilon: f64, p: f64, delta: f64) -> Result<Self> {
        let mut errs = Vec::new();
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            errs.push(format!(
                "blob epsilon in (0,1] violated: epsilon = {epsilon}"
            ));
        }
        if !(p > 1.0 && p < 2.0) {
            errs.push(format!("blob.p in (1,2) violated: p = {p}"));
        }
        if !(delta > 0.0 && delta < 1.0) {
            errs.push(format!("blob.delta in (0,1) violated: delta = {delta}"));
        }
        if errs.is_empty() {
            Ok(BlobSpec { epsilon, p, delta })
        } else {
            Err(Error::Config(errs))
        }
    }

    /// Spec with the particle-count scaled width `ε_N = N^{-(1-δ)/3}`.
    pub fn for_particles(n: usize, p: f64, delta: f64) -> Result<Self> {
        BlobSpec::new((n as f64).powf(-(1.0 - delta) / 3.0), p, delta)
    }

    /// Conjugate exponent `r = p/(p-1)`.
    pub fn conjugate(&self) -> f64 {
        self.p / (self.p - 1.0)
    }

    fn amplitude(&self) -> f64 {
        3.0 / (4.0 * PI * self.epsilon.powi(3))
    }
}

/// Exact `‖ψ_ε‖_{L^p} = (3/(4πε³))^{1/r}`, the norm of a single blob.
pub fn single_ball_norm(spec: &BlobSpec) -> f64 {
    spec.amplitude().powf(1.0 / spec.conjugate())
}

/// Midpoint-rule value of `‖μ * ψ_ε‖_{L^p}` on the origin-anchored grid of cell side `ε/refine`.
pub fn blob_lp_norm_at(m: &EmpiricalMeasure, spec: &BlobSpec, refine: u32) -> f64 {
    let h = spec.epsilon / refine as f64;
    let eps2 = spec.epsilon * spec.epsilon;
    let mut counts: HashMap<[i64; 3], u32> = HashMap::new();

    for c in m.points() {
        let kx0 = ((c.x - spec.epsilon) / h).floor() as i64;
        let kx1 = ((c.x + spec.epsilon) / h).floor() as i64;
        let ky0 = ((c.y - spec.epsilon) / h).floor() as i64;
        let ky1 = ((c.y + spec.epsilon) / h).floor() as i64;
        for kx in kx0..=kx1 {
            let dx = (kx as f64 + 0.5) * h - c.x;
            for ky in ky0..=ky1 {
                let dy = (ky as f64 + 0.5) * h - c.y;
                let rest = eps2 - dx * dx - dy * dy;
                if rest < 0.0 {
                    continue;
                }
                let s = rest.sqrt();
                // cell centres (kz + 1/2) h inside [c.z - s, c.z + s]
                let kz0 = ((c.z - s) / h - 0.5).ceil() as i64;
                let kz1 = ((c.z + s) / h - 0.5).floor() as i64;
                for kz in kz0..=kz1 {
                    *counts.entry([kx, ky, kz]).or_insert(0) += 1;
                }
            }
        }
    }

    // Sum through a histogram of occupancies so the result does not depend on
    // hash-map iteration order.
    let mut histogram: Vec<u64> = Vec::new();
    for &c in counts.values() {
        let c = c as usize;
        if histogram.len() <= c {
            histogram.resize(c + 1, 0);
        }
        histogram[c] += 1;
    }
    let scale = spec.amplitude() / m.len() as f64;
    let cell = h.powi(3);
    let power_sum: f64 = histogram
        .iter()
        .enumerate()
        .skip(1)
        .map(|(c, &cells)| cells as f64 * (scale * c as f64).powf(spec.p))
        .sum();
    (power_sum * cell).powf(1.0 / spec.p)
}

/// `‖μ * ψ_ε‖_{L^p}` by midpoint quadrature, refined until two successive
/// grids agree to 2%.
///
/// Starts at cell side `ε/grid_refine` and doubles the refinement up to three
/// times; the finer of the first agreeing pair is returned.
pub fn blob_lp_norm(m: &EmpiricalMeasure, spec: &BlobSpec, grid_refine: u32) -> Result<f64> {
    if grid_refine < 2 {
        return Err(Error::Domain(format!(
            "grid_refine must be >= 2, got {grid_refine}"
        )));
    }
    let mut refine = grid_refine;
    let mut values = vec![blob_lp_norm_at(m, spec, refine)];
    for _ in 0..MAX_DOUBLINGS {
        refine *= 2;
        let v = blob_lp_norm_at(m, spec, refine);
        let prev = *values.last().expect("nonempty");
        values.push(v);
        if (v - prev).abs() <= REFINEMENT_TOLERANCE * v {
            return Ok(v);
        }
    }
    Err(Error::Numerical(format!(
        "blob L^p norm did not settle to {:.0}% between refinements {}..={}: values {:?}",
        REFINEMENT_TOLERANCE * 100.0,
        grid_refine,
        refine,
        values
    )))
}

/// Upper bound on `‖μ_y * ψ_ε‖_{L^p}` from the occupancy of `x` in the cubes
/// `ε·([k₁,k₁+1) × [k₂,k₂+1) × [k₃,k₃+1))`:
///
/// `(3/4π)^{1/r} #I / (N ε^{3/r}) + 3375 (N^{-p} ε^{-3(p-1)} Σ_D #{i : x_i ∈ D}^p)^{1/p}`
///
/// with `I = {i : |x_i - y_i| > ε}`. Both clouds must lie in `B(0, N^{δ/3})`.
pub fn blob_lp_bound(
    x_cloud: &EmpiricalMeasure,
    y_cloud: &EmpiricalMeasure,
    spec: &BlobSpec,
) -> Result<f64> {
    let n = x_cloud.len();
    if y_cloud.len() != n {
        return Err(Error::Domain(format!(
            "blob bound needs equal-size clouds, got {n} and {}",
            y_cloud.len()
        )));
    }
    let radius = (n as f64).powf(spec.delta / 3.0);
    for (label, cloud) in [("x", x_cloud), ("y", y_cloud)] {
        if let Some(k) = cloud.points().iter().position(|p| p.norm() > radius) {
            return Err(Error::Domain(format!(
                "{label}[{k}] = {:?} lies outside B(0, N^(delta/3) = {radius})",
                cloud.points()[k]
            )));
        }
    }

    let eps = spec.epsilon;
    let r = spec.conjugate();
    let nf = n as f64;
    let mismatched = x_cloud
        .points()
        .iter()
        .zip(y_cloud.points())
        .filter(|(a, b)| (**a - **b).norm() > eps)
        .count();
    let first = (3.0 / (4.0 * PI)).powf(1.0 / r) * mismatched as f64 / (nf * eps.powf(3.0 / r));

    let mut cubes: HashMap<[i64; 3], u64> = HashMap::new();
    for p in x_cloud.points() {
        let key = [
            (p.x / eps).floor() as i64,
            (p.y / eps).floor() as i64,
            (p.z / eps).floor() as i64,
        ];
        *cubes.entry(key).or_insert(0) += 1;
    }
    let mut occupancy: Vec<u64> = cubes.into_values().collect();
    occupancy.sort_unstable();
    let power_sum: f64 = occupancy.iter().map(|&c| (c as f64).powf(spec.p)).sum();
    let second = CUBE_CONSTANT
        * (nf.powf(-spec.p) * eps.powf(-3.0 * (spec.p - 1.0)) * power_sum).powf(1.0 / spec.p);

    Ok(first + second)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vec3::Vec3;

    fn measure(pts: Vec<Vec3>) -> EmpiricalMeasure {
        EmpiricalMeasure::new(pts).unwrap()
    }

    #[test]
    fn spec_validation() {
        assert!(BlobSpec::new(0.1, 1.5, 0.5).is_ok());
        let Err(Error::Config(errs)) = BlobSpec::new(0.0, 2.0, 1.0) else {
            panic!()
        };
        assert_eq!(errs.len(), 3);
    }

    #[test]
    fn single_ball_closed_form() {
        for (eps, p) in [(0.1, 1.3), (0.05, 1.2), (0.5, 1.7)] {
            let spec = BlobSpec::new(eps, p, 0.5).unwrap();
            let m = measure(vec![Vec3::new(0.013, -0.2, 0.31)]);
            let v = blob_lp_norm(&m, &spec, 4).unwrap();
            let exact = single_ball_norm(&spec);
            assert!(
                ((v - exact) / exact).abs() < 0.02,
                "eps={eps} p={p}: {v} vs {exact}"
            );
        }
    }

    #[test]
    fn disjoint_pair_closed_form() {
        let spec = BlobSpec::new(0.1, 1.4, 0.5).unwrap();
        let m = measure(vec![Vec3::ZERO, Vec3::new(0.25, 0.0, 0.0)]);
        let v = blob_lp_norm(&m, &spec, 4).unwrap();
        let exact = 2f64.powf(1.0 / spec.p) * 0.5 * single_ball_norm(&spec);
        assert!(((v - exact) / exact).abs() < 0.02);
    }

    #[test]
    fn doubling_epsilon_scales_norm() {
        let m = measure(vec![Vec3::new(0.3, 0.1, -0.4)]);
        let s1 = BlobSpec::new(0.1, 1.5, 0.5).unwrap();
        let s2 = BlobSpec::new(0.2, 1.5, 0.5).unwrap();
        let ratio = blob_lp_norm(&m, &s1, 4).unwrap() / blob_lp_norm(&m, &s2, 4).unwrap();
        let expected = 2f64.powf(3.0 / s1.conjugate());
        assert!(((ratio - expected) / expected).abs() < 0.02);
    }

    #[test]
    fn refine_must_be_at_least_two() {
        let spec = BlobSpec::new(0.1, 1.5, 0.5).unwrap();
        assert!(blob_lp_norm(&measure(vec![Vec3::ZERO]), &spec, 1).is_err());
    }

    #[test]
    fn bound_single_particle() {
        let spec = BlobSpec::new(0.1, 1.4, 0.5).unwrap();
        let x = measure(vec![Vec3::new(0.05, 0.05, 0.05)]);
        let b = blob_lp_bound(&x, &x, &spec).unwrap();
        let expected = 3375.0 * 0.1f64.powf(-3.0 / spec.conjugate());
        assert!(((b - expected) / expected).abs() < 1e-12);
    }

    #[test]
    fn bound_first_term_when_all_mismatched() {
        let spec = BlobSpec::new(0.1, 1.4, 0.5).unwrap();
        let x = measure(vec![Vec3::ZERO, Vec3::new(0.5, 0.0, 0.0)]);
        let y = measure(vec![Vec3::new(0.0, 0.5, 0.0), Vec3::new(0.0, 0.0, 0.5)]);
        let b = blob_lp_bound(&x, &y, &spec).unwrap();
        let first =
            (3.0 / (4.0 * PI)).powf(1.0 / spec.conjugate()) * 0.1f64.powf(-3.0 / spec.conjugate());
        // two singly occupied cubes
        let second = 3375.0
            * (2f64.powf(-spec.p) * 0.1f64.powf(-3.0 * (spec.p - 1.0)) * 2.0).powf(1.0 / spec.p);
        assert!(((b - first - second) / b).abs() < 1e-12);
    }

    #[test]
    fn bound_rejects_points_outside_ball() {
        let spec = BlobSpec::new(0.1, 1.4, 0.5).unwrap();
        // N = 1 → radius 1
        let x = measure(vec![Vec3::ZERO]);
        let y = measure(vec![Vec3::new(1.5, 0.0, 0.0)]);
        let Err(Error::Domain(msg)) = blob_lp_bound(&x, &y, &spec) else {
            panic!()
        };
        assert!(msg.contains("y[0]"), "{msg}");
    }
}
