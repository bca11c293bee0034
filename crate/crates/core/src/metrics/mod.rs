//! Diagnostics on empirical measures.

pub mod assignment;
mod blob;
mod constants;

use serde::{Deserialize, Serialize};

pub use blob::{blob_lp_bound, blob_lp_norm, blob_lp_norm_at, single_ball_norm, BlobSpec};
pub use constants::{norm_constant_c, p_zero};

use crate::error::{Error, Result};
use crate::vec3::Vec3;

/// Uniformly weighted point cloud `N^{-1} Σ δ_{v_i}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalMeasure {
    points: Vec<Vec3>,
}

impl EmpiricalMeasure {
    pub fn new(points: Vec<Vec3>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Domain(
                "empirical measure needs N >= 1 points".into(),
            ));
        }
        if let Some(k) = points.iter().position(|p| !p.is_finite()) {
            return Err(Error::Domain(format!("point {k} is not finite")));
        }
        Ok(EmpiricalMeasure { points })
    }

    pub(crate) fn from_points_unchecked(points: Vec<Vec3>) -> Self {
        EmpiricalMeasure { points }
    }

    pub fn points(&self) -> &[Vec3] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Exact `W_2` between two clouds of equal size.
///
/// The optimal coupling of two uniform `N`-point measures is a permutation, so
/// this is `sqrt(min_σ N^{-1} Σ |a_i - b_σ(i)|²)`, solved by [`assignment::solve`].
/// The matched costs are summed in ascending order, so the result does not
/// depend on which cloud is passed first.
pub fn wasserstein2(a: &EmpiricalMeasure, b: &EmpiricalMeasure) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Domain(format!(
            "wasserstein2 needs equal-size clouds, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    let (pa, pb) = (a.points(), b.points());
    let cost = |i: usize, j: usize| (pa[i] - pb[j]).norm_sq();
    let matching = assignment::solve(pa.len(), cost);
    Ok(
        (canonical_sum(matching.iter().enumerate().map(|(i, &j)| cost(i, j))) / pa.len() as f64)
            .sqrt(),
    )
}

/// Sum of the values in ascending order.
pub fn canonical_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut v: Vec<f64> = values.collect();
    v.sort_unstable_by(f64::total_cmp);
    v.iter().sum()
}

/// `m_q = N^{-1} Σ |v_i|^q`.
pub fn moment(m: &EmpiricalMeasure, q: f64) -> Result<f64> {
    if !(q > 0.0) {
        return Err(Error::Domain(format!("moment order must be > 0, got {q}")));
    }
    Ok(moment_of(m.points(), q))
}

fn moment_of(points: &[Vec3], q: f64) -> f64 {
    let sum: f64 = if q == 2.0 {
        points.iter().map(|v| v.norm_sq()).sum()
    } else if q == 4.0 {
        points.iter().map(|v| v.norm_sq().powi(2)).sum()
    } else {
        points.iter().map(|v| v.norm().powf(q)).sum()
    };
    sum / points.len() as f64
}

/// Mean momentum `N^{-1} Σ v_i` and energy `N^{-1} Σ |v_i|²`.
pub fn conserved_stats(m: &EmpiricalMeasure) -> (Vec3, f64) {
    let n = m.len() as f64;
    let momentum = m.points().iter().copied().sum::<Vec3>() / n;
    (momentum, moment_of(m.points(), 2.0))
}

/// Moments reported by runs and the `simulate` report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentSummary {
    pub m2: f64,
    pub m4: f64,
    pub momentum: Vec3,
    pub energy: f64,
}

pub fn moment_summary(points: &[Vec3]) -> MomentSummary {
    let m = EmpiricalMeasure::from_points_unchecked(points.to_vec());
    let (momentum, energy) = conserved_stats(&m);
    MomentSummary {
        m2: energy,
        m4: moment_of(points, 4.0),
        momentum,
        energy,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cloud(pts: &[[f64; 3]]) -> EmpiricalMeasure {
        EmpiricalMeasure::new(pts.iter().map(|p| Vec3::from(*p)).collect()).unwrap()
    }

    #[test]
    fn w2_trivial_cases() {
        let a = cloud(&[[0.0, 0.0, 0.0], [1.0, 2.0, 3.0]]);
        assert_eq!(wasserstein2(&a, &a).unwrap(), 0.0);
        let b = cloud(&[[1.0, 2.0, 3.0], [0.0, 0.0, 0.0]]);
        assert_eq!(wasserstein2(&a, &b).unwrap(), 0.0);
        let s0 = cloud(&[[0.0, 0.0, 0.0]]);
        let s1 = cloud(&[[1.0, 0.0, 0.0]]);
        assert_eq!(wasserstein2(&s0, &s1).unwrap(), 1.0);
        assert!(wasserstein2(&a, &s0).is_err());
    }

    #[test]
    fn moments_of_simple_clouds() {
        let v = Vec3::new(1.0, -2.0, 2.0);
        let single = EmpiricalMeasure::new(vec![v]).unwrap();
        assert_eq!(moment(&single, 3.0).unwrap(), 27.0);
        assert!((moment(&single, 1.5).unwrap() - 3f64.powf(1.5)).abs() < 1e-12);
        let zeros = EmpiricalMeasure::new(vec![Vec3::ZERO; 4]).unwrap();
        assert_eq!(moment(&zeros, 0.5).unwrap(), 0.0);
        assert!(moment(&single, 0.0).is_err());
    }

    #[test]
    fn conserved_stats_cases() {
        let v = Vec3::new(0.5, 1.0, -3.0);
        let pair = EmpiricalMeasure::new(vec![v, -v]).unwrap();
        assert_eq!(conserved_stats(&pair).0, Vec3::ZERO);
        let single = EmpiricalMeasure::new(vec![v]).unwrap();
        assert_eq!(conserved_stats(&single), (v, v.norm_sq()));
        let c = cloud(&[[1.0, 2.0, 0.5], [-0.3, 0.0, 4.0], [2.0, 2.0, 2.0]]);
        assert_eq!(conserved_stats(&c).1, moment(&c, 2.0).unwrap());
    }

    #[test]
    fn rejects_empty_and_non_finite() {
        assert!(EmpiricalMeasure::new(vec![]).is_err());
        assert!(EmpiricalMeasure::new(vec![Vec3::new(f64::NAN, 0.0, 0.0)]).is_err());
    }
}
