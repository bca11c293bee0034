//! Collision geometry: orthogonal frames, the azimuthal vector `Γ`, post-collision
//! deviations and the phase alignment used to couple two collisions.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use super::angular::SoftPotentialParams;
use crate::error::{Error, Result};
use crate::vec3::Vec3;

/// Truncation level `K >= 1` of the `z`-parameterised jump measure.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct CutoffLevel(f64);

impl CutoffLevel {
    pub fn new(k: f64) -> Result<Self> {
        if !(k.is_finite() && k >= 1.0) {
            return Err(Error::config(format!("k>=1 violated: k = {k}")));
        }
        Ok(CutoffLevel(k))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for CutoffLevel {
    type Error = Error;
    fn try_from(k: f64) -> Result<Self> {
        CutoffLevel::new(k)
    }
}

impl From<CutoffLevel> for f64 {
    fn from(k: CutoffLevel) -> f64 {
        k.0
    }
}

/// The pair `(I(x), J(x))` completing `x/|x|` to a right-handed orthogonal
/// basis, both of length `|x|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub i_vec: Vec3,
    pub j_vec: Vec3,
}

/// Builds `(I(x), J(x))`.
///
/// `I(x)` is `x × e` rescaled to length `|x|`, where `e` is the standard basis
/// vector along the smallest-magnitude component of `x` (lowest index on
/// ties); `J(x) = x/|x| × I(x)`.
pub fn orthonormal_frame(x: Vec3) -> Result<Frame> {
    let n = x.norm();
    if !(n > 0.0 && n.is_finite()) {
        return Err(Error::Domain(format!(
            "frame needs a finite nonzero vector, got {x:?}"
        )));
    }
    Ok(frame_unchecked(x, n))
}

#[inline]
fn frame_unchecked(x: Vec3, n: f64) -> Frame {
    let (ax, ay, az) = (x.x.abs(), x.y.abs(), x.z.abs());
    let e = if ax <= ay && ax <= az {
        Vec3::X
    } else if ay <= az {
        Vec3::Y
    } else {
        Vec3::Z
    };
    let u = x.cross(e);
    let i_vec = u * (n / u.norm());
    let j_vec = (x / n).cross(i_vec);
    Frame { i_vec, j_vec }
}

/// `Γ(x, φ) = cos φ · I(x) + sin φ · J(x)`.
pub fn gamma_vec(x: Vec3, phi: f64) -> Result<Vec3> {
    let f = orthonormal_frame(x)?;
    Ok(f.i_vec * phi.cos() + f.j_vec * phi.sin())
}

/// Deviation `a = v' - v` of a collision with deviation angle `θ` and azimuth `φ`:
/// `a = -(1 - cos θ)/2 · (v - v*) + sin θ / 2 · Γ(v - v*, φ)`.
///
/// Returns zero when `v == v_star`.
pub fn deviation_a(v: Vec3, v_star: Vec3, theta: f64, phi: f64) -> Vec3 {
    let x = v - v_star;
    let n = x.norm();
    if n == 0.0 {
        return Vec3::ZERO;
    }
    deviation_from_angle(x, n, theta, phi)
}

#[inline]
fn deviation_from_angle(x: Vec3, n: f64, theta: f64, phi: f64) -> Vec3 {
    let f = frame_unchecked(x, n);
    let half = 0.5 * theta;
    // 1 - cos θ = 2 sin²(θ/2), which keeps grazing angles accurate.
    let one_minus_cos = 2.0 * half.sin().powi(2);
    let gamma = f.i_vec * phi.cos() + f.j_vec * phi.sin();
    x * (-0.5 * one_minus_cos) + gamma * (0.5 * theta.sin())
}

/// Deviation in the `z`-parameterisation: `c(v, v*, z, φ) = a(v, v*, G(z/|v-v*|^γ), φ)`,
/// multiplied by `1{z <= K}` when a cutoff is given.
pub fn deviation_c(
    params: &SoftPotentialParams,
    v: Vec3,
    v_star: Vec3,
    z: f64,
    phi: f64,
    cutoff: Option<CutoffLevel>,
) -> Vec3 {
    debug_assert!(z >= 0.0, "z must be nonnegative, got {z}");
    if let Some(k) = cutoff {
        if z > k.value() {
            return Vec3::ZERO;
        }
    }
    let x = v - v_star;
    let n = x.norm();
    if n == 0.0 {
        return Vec3::ZERO;
    }
    let theta = params.g(z * n.powf(-params.gamma()));
    deviation_from_angle(x, n, theta, phi)
}

/// Phase shift `φ0(X, Y)` aligning the azimuthal frames of `X` and `Y` so that
/// `|Γ(X, φ) - Γ(Y, φ + φ0)| <= |X - Y|` for every `φ`.
///
/// With unit frames `(i_X, j_X)` and `(i_Y, j_Y)`, `φ0 = atan2(B, A)` where
/// `A = i_X·i_Y + j_X·j_Y` and `B = i_X·j_Y - j_X·i_Y`; this maximises the
/// `φ`-averaged alignment `(A cos φ0 + B sin φ0)/2`.
pub fn tanaka_phi0(x_vec: Vec3, y_vec: Vec3) -> Result<f64> {
    let fx = orthonormal_frame(x_vec)?;
    let fy = orthonormal_frame(y_vec)?;
    Ok(phase_between(&fx, x_vec.norm(), &fy, y_vec.norm()))
}

/// `φ0` with the convention `φ0 = 0` when either vector vanishes.
pub(crate) fn phi0_or_zero(x_vec: Vec3, y_vec: Vec3) -> f64 {
    let (nx, ny) = (x_vec.norm(), y_vec.norm());
    if nx == 0.0 || ny == 0.0 {
        return 0.0;
    }
    phase_between(
        &frame_unchecked(x_vec, nx),
        nx,
        &frame_unchecked(y_vec, ny),
        ny,
    )
}

fn phase_between(fx: &Frame, nx: f64, fy: &Frame, ny: f64) -> f64 {
    let (ix, jx) = (fx.i_vec / nx, fx.j_vec / nx);
    let (iy, jy) = (fy.i_vec / ny, fy.j_vec / ny);
    let a = ix.dot(iy) + jx.dot(jy);
    let b = ix.dot(jy) - jx.dot(iy);
    let phi0 = b.atan2(a);
    if phi0 < 0.0 {
        // atan2 lands in (-π, π]; shift into [0, 2π).
        let shifted = phi0 + TAU;
        if shifted >= TAU {
            0.0
        } else {
            shifted
        }
    } else {
        phi0
    }
}

/// `max_φ |Γ(X, φ) - Γ(Y, φ + φ0)|` over an `n`-point uniform grid.
pub fn tanaka_gap_on_grid(x_vec: Vec3, y_vec: Vec3, phi0: f64, n: usize) -> Result<f64> {
    let fx = orthonormal_frame(x_vec)?;
    let fy = orthonormal_frame(y_vec)?;
    let step = 2.0 * PI / n as f64;
    Ok((0..n)
        .map(|k| {
            let phi = step * k as f64;
            let gx = fx.i_vec * phi.cos() + fx.j_vec * phi.sin();
            let gy = fy.i_vec * (phi + phi0).cos() + fy.j_vec * (phi + phi0).sin();
            (gx - gy).norm()
        })
        .fold(0.0, f64::max))
}
