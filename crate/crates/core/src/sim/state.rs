use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{CutoffLevel, SoftPotentialParams};
use crate::metrics::EmpiricalMeasure;
use crate::vec3::Vec3;

use super::initial::InitialLaw;

/// Velocities of the `N` particles together with the simulation clock.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParticleState {
    pub velocities: Vec<Vec3>,
    pub time: f64,
    pub event_count: u64,
}

impl ParticleState {
    pub fn new(velocities: Vec<Vec3>) -> Self {
        ParticleState {
            velocities,
            time: 0.0,
            event_count: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.velocities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.velocities.is_empty()
    }

    /// Empirical measure `N^{-1} Σ δ_{v_i}` of the current velocities.
    pub fn measure(&self) -> EmpiricalMeasure {
        EmpiricalMeasure::from_points_unchecked(self.velocities.clone())
    }
}

/// One applied jump: particle `i` collided with `j` at parameters `(z, φ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventRecord {
    pub time: f64,
    pub i: usize,
    pub j: usize,
    pub z: f64,
    pub phi: f64,
    pub applied_deviation: Vec3,
}

/// Full description of a single simulation run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub n: usize,
    pub cutoff: CutoffLevel,
    pub horizon: f64,
    pub seed: u64,
    pub params: SoftPotentialParams,
    pub initial: InitialLaw,
    /// Sorted times in `[0, horizon]` at which snapshots are taken. Empty means `[horizon]`.
    pub diagnostic_times: Vec<f64>,
}

impl SimConfig {
    pub fn violations(&self) -> Vec<String> {
        let mut errs = Vec::new();
        if self.n < 2 {
            errs.push(format!("n>=2 violated: n = {}", self.n));
        }
        if !(self.horizon >= 0.0 && self.horizon.is_finite()) {
            errs.push(format!("t>=0 violated: t = {}", self.horizon));
        }
        if self.diagnostic_times.windows(2).any(|w| !(w[0] <= w[1])) {
            errs.push("diag.times must be sorted ascending".into());
        }
        if let Some(t) = self
            .diagnostic_times
            .iter()
            .find(|t| !(**t >= 0.0 && **t <= self.horizon))
        {
            errs.push(format!(
                "diag.times within [0,t] violated: {t} not in [0, {}]",
                self.horizon
            ));
        }
        errs.extend(self.initial.violations());
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

    /// Snapshot times actually used by a run.
    pub fn effective_times(&self) -> Vec<f64> {
        if self.diagnostic_times.is_empty() {
            vec![self.horizon]
        } else {
            self.diagnostic_times.clone()
        }
    }
}
