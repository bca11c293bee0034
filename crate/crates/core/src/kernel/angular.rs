//! Angular law of the collision kernel.
//!
//! The cross section is `B(|v - v*|, θ) sin θ = |v - v*|^γ β(θ)` with the
//! concrete power law `β(θ) = θ^{-1-ν}` on `(0, π/2]` and `β = 0` beyond.
//! With this choice the tail function `H(θ) = ∫_θ^{π/2} β` and its inverse
//! `G = H^{-1}` have closed forms, so sampling never needs a root finder.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Interaction exponents `(γ, ν)` of a moderately soft potential.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct SoftPotentialParams {
    gamma: f64,
    nu: f64,
    /// `(π/2)^{-ν}`, cached because every `G` evaluation needs it.
    half_pi_pow: f64,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    gamma: f64,
    nu: f64,
}

impl TryFrom<RawParams> for SoftPotentialParams {
    type Error = Error;
    fn try_from(r: RawParams) -> Result<Self> {
        SoftPotentialParams::new(r.gamma, r.nu)
    }
}

impl From<SoftPotentialParams> for RawParams {
    fn from(p: SoftPotentialParams) -> Self {
        RawParams {
            gamma: p.gamma,
            nu: p.nu,
        }
    }
}

/// Lists every constraint on `(γ, ν)` that fails, using the inequality text.
pub fn param_violations(gamma: f64, nu: f64) -> Vec<String> {
    let mut errs = Vec::new();
    if !(gamma > -1.0 && gamma < 0.0) {
        errs.push(format!("gamma in (-1,0) violated: gamma = {gamma}"));
    }
    if !(nu > 0.0 && nu < 1.0) {
        errs.push(format!("nu in (0,1) violated: nu = {nu}"));
    }
    if !(gamma + nu > 0.0) {
        errs.push(format!("gamma+nu>0 violated: gamma + nu = {}", gamma + nu));
    }
    errs
}

impl SoftPotentialParams {
    pub fn new(gamma: f64, nu: f64) -> Result<Self> {
        let errs = param_violations(gamma, nu);
        if !errs.is_empty() {
            return Err(Error::Config(errs));
        }
        Ok(SoftPotentialParams {
            gamma,
            nu,
            half_pi_pow: FRAC_PI_2.powf(-nu),
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// `β(θ)`; zero on `(π/2, π]`.
    pub fn beta(&self, theta: f64) -> f64 {
        if theta > 0.0 && theta <= FRAC_PI_2 {
            theta.powf(-1.0 - self.nu)
        } else {
            0.0
        }
    }

    /// `H(θ) = (θ^{-ν} - (π/2)^{-ν}) / ν` for `θ ∈ (0, π/2]`.
    pub fn angular_h(&self, theta: f64) -> Result<f64> {
        if !(theta > 0.0 && theta <= FRAC_PI_2) {
            return Err(Error::Domain(format!(
                "H is defined on (0, pi/2], got theta = {theta}"
            )));
        }
        Ok(((theta.powf(-self.nu) - self.half_pi_pow) / self.nu).max(0.0))
    }

    /// `G(z) = (νz + (π/2)^{-ν})^{-1/ν}`, the inverse of `H`.
    pub fn angular_g(&self, z: f64) -> Result<f64> {
        if !(z >= 0.0) {
            return Err(Error::Domain(format!(
                "G is defined on [0, inf), got z = {z}"
            )));
        }
        Ok(self.g(z))
    }

    /// Unchecked `G` for the simulation inner loop; `z` must be `>= 0`.
    #[inline]
    pub(crate) fn g(&self, z: f64) -> f64 {
        if z == 0.0 {
            return FRAC_PI_2;
        }
        (self.nu * z + self.half_pi_pow).powf(-1.0 / self.nu)
    }

    /// `∫_lower^∞ G(w)² dw = (ν·lower + (π/2)^{-ν})^{1-2/ν} / (2 - ν)`.
    pub fn g_squared_tail(&self, lower: f64) -> f64 {
        (self.nu * lower.max(0.0) + self.half_pi_pow).powf(1.0 - 2.0 / self.nu) / (2.0 - self.nu)
    }

    /// Constants `(c2, c3)` of the envelope `c2 (1+z)^{-1/ν} <= G(z) <= c3 (1+z)^{-1/ν}`.
    ///
    /// `G(z) (1+z)^{1/ν} = ((1+z)/(νz + (π/2)^{-ν}))^{1/ν}` is monotone in `z`
    /// and moves between `π/2` at `z = 0` and `ν^{-1/ν}` as `z → ∞`.
    pub fn envelope_constants(&self) -> (f64, f64) {
        let at_zero = FRAC_PI_2;
        let at_inf = self.nu.powf(-1.0 / self.nu);
        (at_zero.min(at_inf), at_zero.max(at_inf))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(gamma: f64, nu: f64) -> SoftPotentialParams {
        SoftPotentialParams::new(gamma, nu).unwrap()
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(SoftPotentialParams::new(-1.2, 0.7).is_err());
        assert!(SoftPotentialParams::new(-0.5, 1.0).is_err());
        let Err(Error::Config(errs)) = SoftPotentialParams::new(-0.5, 0.4) else {
            panic!("expected config error");
        };
        assert_eq!(errs.len(), 1);
        assert!(errs[0].contains("gamma+nu>0"));
    }

    #[test]
    fn h_closed_form_values() {
        let params = p(-0.3, 0.5);
        assert_eq!(params.angular_h(FRAC_PI_2).unwrap(), 0.0);
        // 2 (0.1^{-1/2} - (π/2)^{-1/2})
        let expected = 2.0 * (0.1f64.powf(-0.5) - FRAC_PI_2.powf(-0.5));
        assert!((params.angular_h(0.1).unwrap() - expected).abs() < 1e-12);
        assert!((expected - 4.728786).abs() < 1e-6);
        assert!(params.angular_h(0.0).is_err());
        assert!(params.angular_h(1.6).is_err());
    }

    #[test]
    fn h_matches_quadrature_of_beta() {
        let params = p(-0.5, 0.7);
        for theta in [0.05, 0.3, 1.2] {
            let q = crate::kernel::quadrature::integrate(
                |t| params.beta(t),
                theta,
                FRAC_PI_2,
                Default::default(),
            )
            .unwrap();
            let h = params.angular_h(theta).unwrap();
            assert!(((q - h) / h).abs() < 1e-8, "theta={theta}: {q} vs {h}");
        }
    }

    #[test]
    fn g_values() {
        let params = p(-0.3, 0.5);
        assert_eq!(params.angular_g(0.0).unwrap(), FRAC_PI_2);
        let expected = (0.5 + (2.0 / std::f64::consts::PI).sqrt()).powi(-2);
        assert!((params.angular_g(1.0).unwrap() - expected).abs() < 1e-14);
        assert!((expected - 0.593646).abs() < 1e-6);
        assert!(params.angular_g(-1e-9).is_err());
    }

    #[test]
    fn h_strictly_decreasing() {
        let params = p(-0.5, 0.7);
        let grid: Vec<f64> = (1..=100).map(|k| FRAC_PI_2 * k as f64 / 100.0).collect();
        for w in grid.windows(2) {
            assert!(params.angular_h(w[0]).unwrap() > params.angular_h(w[1]).unwrap());
        }
    }

    #[test]
    fn g_squared_tail_matches_quadrature() {
        let params = p(-0.5, 0.7);
        let q = crate::kernel::quadrature::integrate(
            |w| params.g(w).powi(2),
            3.0,
            3.0e5,
            Default::default(),
        )
        .unwrap();
        let exact = params.g_squared_tail(3.0) - params.g_squared_tail(3.0e5);
        assert!(((q - exact) / exact).abs() < 1e-8);
    }

    proptest! {
        #[test]
        fn roundtrip_and_envelope(nu in 0.05f64..0.95, z in 0.0f64..1e6) {
            let params = p(-nu / 2.0, nu);
            let g = params.angular_g(z).unwrap();
            prop_assert!(g > 0.0 && g <= FRAC_PI_2);
            let back = params.angular_h(g).unwrap();
            prop_assert!((back - z).abs() <= 1e-12 * z.max(1.0));
            let (c2, c3) = params.envelope_constants();
            let env = (1.0 + z).powf(-1.0 / nu);
            prop_assert!(g >= c2 * env * (1.0 - 1e-12));
            prop_assert!(g <= c3 * env * (1.0 + 1e-12));
        }
    }
}
