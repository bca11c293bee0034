//! Deterministic collision mathematics for moderately soft potentials.
//!
//! Everything here is a pure function of its inputs.

pub mod angular;
pub mod certificates;
pub mod geometry;
pub mod moments;
pub mod quadrature;

pub use angular::SoftPotentialParams;
pub use geometry::{
    deviation_a, deviation_c, gamma_vec, orthonormal_frame, tanaka_phi0, CutoffLevel, Frame,
};
pub use moments::{angular_moments, AngularMoments};
