//! Two systems at cutoffs `K_lo <= K_hi` driven by one event stream, and the
//! mean-square distance between them.
//!
//! ```text
//! cargo run --release --example coupling
//! ```

use nanbu::kernel::{CutoffLevel, SoftPotentialParams};
use nanbu::sim::{coupled_run, InitialLaw, SimConfig};

fn main() -> nanbu::Result<()> {
    let config = SimConfig {
        n: 500,
        cutoff: CutoffLevel::new(1.0)?,
        horizon: 0.5,
        seed: 7,
        params: SoftPotentialParams::new(-0.5, 0.7)?,
        initial: InitialLaw::default(),
        diagnostic_times: vec![0.0, 0.1, 0.2, 0.3, 0.4, 0.5],
    };
    let hi = CutoffLevel::new(64.0)?;
    for k_lo in [2.0, 8.0, 32.0] {
        let out = coupled_run(&config, CutoffLevel::new(k_lo)?, hi)?;
        let series: Vec<String> = out.distance.iter().map(|d| format!("{d:.3e}")).collect();
        println!(
            "K_lo = {k_lo:>4}: D(t) = [{}]  ({} shared events, {} applied by the low system)",
            series.join(", "),
            out.events,
            out.lo_events
        );
    }
    Ok(())
}
