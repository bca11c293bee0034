use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vec3::Vec3;

/// One weighted isotropic gaussian of a mixture.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MixtureComponent {
    pub weight: f64,
    pub mean: Vec3,
    /// Per-component variance `σ²` of the covariance `σ² I`.
    pub variance: f64,
}

/// Initial velocity law `f_0`. All variants have finite entropy and all moments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialLaw {
    /// Isotropic gaussian `N(mean, variance · I)`.
    Gaussian {
        mean: Vec3,
        variance: f64,
    },
    GaussianMixture {
        components: Vec<MixtureComponent>,
    },
    /// Uniform on the closed ball of `radius` around `center`.
    UniformBall {
        center: Vec3,
        radius: f64,
    },
}

impl Default for InitialLaw {
    fn default() -> Self {
        InitialLaw::Gaussian {
            mean: Vec3::ZERO,
            variance: 1.0,
        }
    }
}

impl InitialLaw {
    pub fn violations(&self) -> Vec<String> {
        let mut errs = Vec::new();
        match self {
            InitialLaw::Gaussian { mean, variance } => {
                if !mean.is_finite() {
                    errs.push("init.mean must be finite".into());
                }
                if !(*variance > 0.0 && variance.is_finite()) {
                    errs.push(format!("init.variance>0 violated: variance = {variance}"));
                }
            }
            InitialLaw::GaussianMixture { components } => {
                if components.is_empty() {
                    errs.push("init.components must be nonempty".into());
                }
                for (k, c) in components.iter().enumerate() {
                    if !(c.weight > 0.0) {
                        errs.push(format!(
                            "init.components[{k}].weight>0 violated: {}",
                            c.weight
                        ));
                    }
                    if !(c.variance > 0.0 && c.variance.is_finite()) {
                        errs.push(format!(
                            "init.components[{k}].variance>0 violated: {}",
                            c.variance
                        ));
                    }
                    if !c.mean.is_finite() {
                        errs.push(format!("init.components[{k}].mean must be finite"));
                    }
                }
                let total: f64 = components.iter().map(|c| c.weight).sum();
                if !components.is_empty() && (total - 1.0).abs() > 1e-9 {
                    errs.push(format!(
                        "init.components weights sum to 1 violated: sum = {total}"
                    ));
                }
            }
            InitialLaw::UniformBall { center, radius } => {
                if !center.is_finite() {
                    errs.push("init.center must be finite".into());
                }
                if !(*radius > 0.0 && radius.is_finite()) {
                    errs.push(format!("init.radius>0 violated: radius = {radius}"));
                }
            }
        }
        errs
    }

    pub fn validate(&self) -> Result<()> {
        let errs = self.violations();
        if errs.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(errs))
        }
    }

    /// One draw from the law.
    pub fn sample_one<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec3 {
        match self {
            InitialLaw::Gaussian { mean, variance } => gaussian(rng, *mean, *variance),
            InitialLaw::GaussianMixture { components } => {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                let mut chosen = components.last().expect("validated nonempty");
                for c in components {
                    acc += c.weight;
                    if u < acc {
                        chosen = c;
                        break;
                    }
                }
                gaussian(rng, chosen.mean, chosen.variance)
            }
            InitialLaw::UniformBall { center, radius } => loop {
                let p = Vec3::new(
                    rng.random_range(-1.0..=1.0),
                    rng.random_range(-1.0..=1.0),
                    rng.random_range(-1.0..=1.0),
                );
                if p.norm_sq() <= 1.0 {
                    break *center + p * *radius;
                }
            },
        }
    }

    /// `n` i.i.d. draws.
    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<Vec3> {
        (0..n).map(|_| self.sample_one(rng)).collect()
    }
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R, mean: Vec3, variance: f64) -> Vec3 {
    let sd = variance.sqrt();
    let x: f64 = rng.sample(StandardNormal);
    let y: f64 = rng.sample(StandardNormal);
    let z: f64 = rng.sample(StandardNormal);
    mean + Vec3::new(x, y, z) * sd
}
