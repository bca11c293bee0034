//! Replicated cutoff and particle-count sweeps written as CSV reports.
//!
//! ```text
//! cargo run --release --example sweeps -- [output-dir]
//! ```

use std::path::PathBuf;
use std::time::Instant;

use nanbu::harness::{
    emit_report, experiment_k_sweep, experiment_n_sweep, parse_config, CsvTable, RunMetadata,
};

fn main() -> nanbu::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| ".".into()));
    let base = "
        params.gamma = -0.5
        params.nu = 0.7
        sim.n = 300
        sim.k = 16
        sim.t = 0.5
        sim.seed = 1
        replicas = 10
    ";

    let cfg = parse_config(&format!(
        "{base}\nsweep.k_lo = [2, 4, 8, 16]\nsweep.k_hi = 64\n"
    ))?;
    let clock = Instant::now();
    let rep = experiment_k_sweep(&cfg)?;
    for r in &rep.rows {
        println!(
            "K_lo = {:>4}: mean D(T) = {:.4e} +- {:.1e}",
            r.sweep_value, r.mean, r.stderr
        );
    }
    println!(
        "fitted slope {:?}, theoretical {:.3}",
        rep.fitted_slope, rep.theoretical_slope
    );
    let meta = RunMetadata::new("ksweep", &cfg, 0.0, clock.elapsed().as_secs_f64());
    emit_report(&CsvTable::ksweep(&rep.rows), &meta, &dir.join("ksweep.csv"))?;

    let cfg = parse_config(&format!(
        "{base}\nsweep.n_values = [50, 200, 800]\nsweep.n_ref = 2000\n"
    ))?;
    let clock = Instant::now();
    let rep = experiment_n_sweep(&cfg)?;
    for r in &rep.rows {
        println!(
            "N = {:>4}: mean W2^2 = {:.4e} +- {:.1e}",
            r.sweep_value, r.mean, r.stderr
        );
    }
    let meta = RunMetadata::new("nsweep", &cfg, 0.0, clock.elapsed().as_secs_f64());
    emit_report(&CsvTable::nsweep(&rep.rows), &meta, &dir.join("nsweep.csv"))?;
    println!("reports written to {}", dir.display());
    Ok(())
}
