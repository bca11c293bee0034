use std::f64::consts::PI;

use crate::error::{Error, Result};

/// `C_{γ,p} = (∫_{|u|<=1} |u|^{pγ/(p-1)} du)^{(p-1)/p} = (4π/(s+3))^{(p-1)/p}`
/// with `s = pγ/(p-1)`; finite iff `p > 3/(3+γ)`.
pub fn norm_constant_c(gamma: f64, p: f64) -> Result<f64> {
    if !(gamma > -3.0 && gamma <= 0.0) {
        return Err(Error::Domain(format!(
            "gamma in (-3,0] violated: gamma = {gamma}"
        )));
    }
    let threshold = 3.0 / (3.0 + gamma);
    if !(p > 1.0 && p > threshold) {
        return Err(Error::Domain(format!(
            "p>3/(3+gamma) violated: p = {p}, 3/(3+gamma) = {threshold}"
        )));
    }
    let s = p * gamma / (p - 1.0);
    Ok((4.0 * PI / (s + 3.0)).powf((p - 1.0) / p))
}

/// `p0(γ, ν, q) = (q - γ) / (q(3-ν)/3 - γ)`, the upper end of the admissible
/// `L^p` range, which lies in `(3/(3+γ), 3/(3-ν))`.
pub fn p_zero(gamma: f64, nu: f64, q: f64) -> Result<f64> {
    let mut errs = crate::kernel::angular::param_violations(gamma, nu);
    if !(q >= 2.0) {
        errs.push(format!("q>=2 violated: q = {q}"));
    }
    if gamma + nu > 0.0 {
        let floor = gamma * gamma / (gamma + nu);
        if !(q > floor) {
            errs.push(format!(
                "q>gamma^2/(gamma+nu) violated: q = {q}, gamma^2/(gamma+nu) = {floor}"
            ));
        }
    }
    if !errs.is_empty() {
        return Err(Error::Config(errs));
    }
    let p0 = (q - gamma) / (q * (3.0 - nu) / 3.0 - gamma);
    let (lo, hi) = (3.0 / (3.0 + gamma), 3.0 / (3.0 - nu));
    if !(p0 > lo && p0 < hi) {
        return Err(Error::Numerical(format!("p0 = {p0} outside ({lo}, {hi})")));
    }
    Ok(p0)
}
