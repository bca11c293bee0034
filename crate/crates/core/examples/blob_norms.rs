//! Mollified `L^p` norms of particle clouds and their cube-occupancy bound.
//!
//! ```text
//! cargo run --release --example blob_norms
//! ```

use nanbu::metrics::{
    blob_lp_bound, blob_lp_norm, norm_constant_c, p_zero, single_ball_norm, BlobSpec,
    EmpiricalMeasure,
};
use nanbu::sim::{sample_initial_seeded, InitialLaw};

fn main() -> nanbu::Result<()> {
    let (gamma, nu, q) = (-0.5, 0.7, 8.0);
    let p0 = p_zero(gamma, nu, q)?;
    println!(
        "p0(gamma, nu, q) = {p0:.6}, C(gamma, p0) = {:.6}",
        norm_constant_c(gamma, p0)?
    );

    let n = 200;
    let delta = 6.0 / q;
    let spec = BlobSpec::for_particles(n, p0, delta)?;
    println!(
        "eps_N = {:.4}, single-ball norm = {:.4}",
        spec.epsilon,
        single_ball_norm(&spec)
    );

    let state = sample_initial_seeded(&InitialLaw::default(), n, 3)?;
    let radius = (n as f64).powf(delta / 3.0);
    let inside: Vec<_> = state
        .velocities
        .iter()
        .map(|v| *v * (0.99 * radius / v.norm().max(0.99 * radius)))
        .collect();
    let cloud = EmpiricalMeasure::new(inside)?;
    let norm = blob_lp_norm(&cloud, &spec, 4)?;
    let bound = blob_lp_bound(&cloud, &cloud, &spec)?;
    println!("blob norm = {norm:.4} <= occupancy bound = {bound:.4}");
    Ok(())
}
