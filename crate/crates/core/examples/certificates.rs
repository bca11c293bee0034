//! The kernel certificate suite behind `nanbu verify`.
//!
//! ```text
//! cargo run --release --example certificates
//! ```

use nanbu::kernel::certificates::run_all;
use nanbu::kernel::SoftPotentialParams;

fn main() -> nanbu::Result<()> {
    let params = SoftPotentialParams::new(-0.5, 0.7)?;
    for c in run_all(&params, 200, 0)? {
        println!(
            "{} {:<32} statistic = {:.3e}  threshold = {:.3e}  ({})",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.statistic,
            c.threshold,
            c.detail
        );
    }
    Ok(())
}
