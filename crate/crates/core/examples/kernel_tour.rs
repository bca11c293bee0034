//! The collision kernel: angular law, deviations, phase alignment and the
//! angular moments `Φ_K`, `Ψ_K`.
//!
//! ```text
//! cargo run --example kernel_tour
//! ```

use std::f64::consts::FRAC_PI_2;

use nanbu::kernel::{
    angular_moments, deviation_a, deviation_c, tanaka_phi0, CutoffLevel, SoftPotentialParams,
};
use nanbu::Vec3;

fn main() -> nanbu::Result<()> {
    let params = SoftPotentialParams::new(-0.5, 0.7)?;
    let (c2, c3) = params.envelope_constants();
    println!("gamma = {}, nu = {}", params.gamma(), params.nu());
    println!("envelope c2 (1+z)^(-1/nu) <= G(z) <= c3 (1+z)^(-1/nu): c2 = {c2:.6}, c3 = {c3:.6}");
    for z in [0.0, 0.1, 1.0, 10.0, 1e4] {
        let theta = params.angular_g(z)?;
        println!(
            "G({z:>7}) = {theta:.6}   H(G(z)) = {:.6}",
            params.angular_h(theta)?
        );
    }

    let (v, v_star) = (Vec3::new(1.0, 0.0, 0.0), Vec3::ZERO);
    println!(
        "a(v, v*, pi/2, 0) = {:?}",
        deviation_a(v, v_star, FRAC_PI_2, 0.0)
    );
    let k = CutoffLevel::new(4.0)?;
    for z in [0.5, 4.0, 4.5] {
        println!(
            "c_K(v, v*, z = {z}, 0) = {:?}",
            deviation_c(&params, v, v_star, z, 0.0, Some(k))
        );
    }

    let (x, y) = (Vec3::new(0.3, -1.0, 2.0), Vec3::new(0.5, -0.8, 1.7));
    println!("phase shift phi0(x, y) = {:.6}", tanaka_phi0(x, y)?);

    for x in [0.5, 1.0, 2.0] {
        let m = angular_moments(&params, x, k)?;
        println!(
            "|v - v*| = {x}: Phi_K = {:.6e}, Psi_K = {:.6e}",
            m.phi_k, m.psi_k
        );
    }
    Ok(())
}
