//! Exact `W_2` between equal-size point clouds.
//!
//! ```text
//! cargo run --release --example wasserstein
//! ```

use nanbu::metrics::{wasserstein2, EmpiricalMeasure};
use nanbu::rng::stream_rng;
use nanbu::Vec3;
use rand::Rng;
use rand_distr::StandardNormal;

fn cloud(seed: u64, n: usize, shift: f64) -> nanbu::Result<EmpiricalMeasure> {
    let mut rng = stream_rng(seed, 0);
    EmpiricalMeasure::new(
        (0..n)
            .map(|_| {
                Vec3::new(
                    rng.sample::<f64, _>(StandardNormal) + shift,
                    rng.sample(StandardNormal),
                    rng.sample(StandardNormal),
                )
            })
            .collect(),
    )
}

fn main() -> nanbu::Result<()> {
    for n in [100, 400, 1600] {
        let a = cloud(1, n, 0.0)?;
        let b = cloud(2, n, 0.0)?;
        let c = cloud(2, n, 1.0)?;
        println!(
            "N = {n:>4}: W2(a, b) = {:.4}  W2(b, b + e1) = {:.4}",
            wasserstein2(&a, &b)?,
            wasserstein2(&b, &c)?
        );
    }
    Ok(())
}
