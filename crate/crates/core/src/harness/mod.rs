//! Configuration, replicated experiments and report files.

pub mod config;
pub mod experiments;
pub mod report;

pub use config::{parse_config, BlobSettings, ExperimentConfig, Reference, Sweep};
pub use experiments::{
    experiment_couple, experiment_k_sweep, experiment_n_sweep, experiment_simulate,
    experiment_verify, nsweep_point_distance, reference_cloud, reference_config,
    terminal_coupled_distance, CoupleRow, KSweepReport, NSweepReport, ReportRow, SimulateRow,
};
pub use report::{emit_report, read_sidecar, sidecar_path, CsvTable, RunMetadata};

use std::path::Path;

use crate::error::{Error, Result};

/// Reads and validates a configuration file.
pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config(&text)
}
