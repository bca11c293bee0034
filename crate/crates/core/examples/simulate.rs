//! One seeded Nanbu run with moment diagnostics at a few times.
//!
//! ```text
//! cargo run --release --example simulate
//! ```

use nanbu::kernel::{CutoffLevel, SoftPotentialParams};
use nanbu::metrics::moment_summary;
use nanbu::sim::{run, InitialLaw, SimConfig};
use nanbu::Vec3;

fn main() -> nanbu::Result<()> {
    let config = SimConfig {
        n: 1000,
        cutoff: CutoffLevel::new(8.0)?,
        horizon: 1.0,
        seed: 42,
        params: SoftPotentialParams::new(-0.5, 0.7)?,
        initial: InitialLaw::UniformBall {
            center: Vec3::new(0.5, 0.0, 0.0),
            radius: 2.0,
        },
        diagnostic_times: vec![0.0, 0.25, 0.5, 1.0],
    };
    let out = run(&config)?;
    for snap in &out.snapshots {
        let m = moment_summary(&snap.velocities);
        println!(
            "t = {:.2}  events = {:>6}  momentum = ({:+.4}, {:+.4}, {:+.4})  m2 = {:.4}  m4 = {:.4}",
            snap.time, snap.event_count, m.momentum.x, m.momentum.y, m.momentum.z, m.m2, m.m4
        );
    }
    println!("{} events in {:.3} s", out.log.events, out.log.wall_seconds);
    Ok(())
}
