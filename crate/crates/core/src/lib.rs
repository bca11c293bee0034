//! Event-driven Monte Carlo for the Nanbu particle system of the spatially
//! homogeneous Boltzmann equation with moderately soft potentials
//! (`γ ∈ (-1, 0)`, angular singularity `ν ∈ (0, 1)`, `γ + ν > 0`), truncated
//! at cutoff level `K`.
//!
//! * [`kernel`]: angular law, collision geometry, phase alignment and the
//!   quadrature certificates for the kernel inequalities.
//! * [`sim`]: exact constant-rate jump simulation and common-randomness
//!   coupling of two systems at different cutoffs.
//! * [`metrics`]: Wasserstein-2 between point clouds, moments, blob `L^p`
//!   norms and the cube-occupancy bound.
//! * [`harness`]: configuration, sweeps and CSV/JSON reports.
//!
//! See `examples/` for one runnable program per capability.

// Validation is written as `!(x > a)` so that NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod harness;
pub mod kernel;
pub mod metrics;
pub mod rng;
pub mod sim;
pub mod stats;
pub mod vec3;

pub use error::{Error, Result};
pub use vec3::Vec3;
