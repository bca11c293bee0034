//! CSV reports and their JSON metadata sidecars.
//!
//! Floats are written with 17 significant digits so they parse back to the
//! same `f64`. Files are written to a temporary sibling and renamed into
//! place.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::experiments::{CoupleRow, ReportRow, SimulateRow};
use crate::error::{Error, Result};
use crate::kernel::certificates::Certificate;

pub const NSWEEP_HEADER: &[&str] = &["n", "mean_w2sq", "stderr", "replicas", "elapsed_s"];
pub const KSWEEP_HEADER: &[&str] = &["k_lo", "mean_msd", "stderr", "replicas", "elapsed_s"];
pub const SIMULATE_HEADER: &[&str] = &[
    "t", "m2", "m4", "px", "py", "pz", "energy", "blob_lp", "events",
];
pub const COUPLE_HEADER: &[&str] = &["t", "msd"];
pub const VERIFY_HEADER: &[&str] = &["certificate", "statistic", "threshold", "passed"];

/// Columns that hold wall-clock measurements rather than results.
pub const TIMING_COLUMNS: &[&str] = &["elapsed_s"];

pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    fn new(header: &[&str]) -> Self {
        CsvTable {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn sweep(header: &[&str], rows: &[ReportRow], integral_key: bool) -> Self {
        let mut t = CsvTable::new(header);
        for r in rows {
            let key = if integral_key {
                format!("{}", r.sweep_value as u64)
            } else {
                format_f64(r.sweep_value)
            };
            t.rows.push(vec![
                key,
                format_f64(r.mean),
                format_f64(r.stderr),
                r.replicas.to_string(),
                format_f64(r.elapsed_seconds),
            ]);
        }
        t
    }

    pub fn nsweep(rows: &[ReportRow]) -> Self {
        Self::sweep(NSWEEP_HEADER, rows, true)
    }

    pub fn ksweep(rows: &[ReportRow]) -> Self {
        Self::sweep(KSWEEP_HEADER, rows, false)
    }

    pub fn simulate(rows: &[SimulateRow]) -> Self {
        let mut t = CsvTable::new(SIMULATE_HEADER);
        for r in rows {
            let mut line: Vec<String> = [
                r.t,
                r.m2,
                r.m4,
                r.momentum.x,
                r.momentum.y,
                r.momentum.z,
                r.energy,
                r.blob_lp,
            ]
            .iter()
            .map(|&x| format_f64(x))
            .collect();
            line.push(r.events.to_string());
            t.rows.push(line);
        }
        t
    }

    pub fn couple(rows: &[CoupleRow]) -> Self {
        let mut t = CsvTable::new(COUPLE_HEADER);
        for r in rows {
            t.rows.push(vec![format_f64(r.t), format_f64(r.msd)]);
        }
        t
    }

    pub fn verify(certs: &[Certificate]) -> Self {
        let mut t = CsvTable::new(VERIFY_HEADER);
        for c in certs {
            t.rows.push(vec![
                c.name.clone(),
                format_f64(c.statistic),
                format_f64(c.threshold),
                c.passed.to_string(),
            ]);
        }
        t
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for row in &self.rows {
            s.push_str(&row.join(","));
            s.push('\n');
        }
        s
    }

    /// Parses text written by [`CsvTable::to_csv`].
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Logic("empty CSV".into()))?
            .split(',')
            .map(str::to_string)
            .collect::<Vec<_>>();
        let rows = lines
            .filter(|l| !l.is_empty())
            .map(|l| l.split(',').map(str::to_string).collect::<Vec<_>>())
            .collect::<Vec<_>>();
        if let Some(bad) = rows.iter().position(|r| r.len() != header.len()) {
            return Err(Error::Logic(format!("CSV row {bad} has the wrong width")));
        }
        Ok(CsvTable { header, rows })
    }

    /// The table without wall-clock columns.
    pub fn without_timing(&self) -> Self {
        let keep: Vec<usize> = (0..self.header.len())
            .filter(|&i| !TIMING_COLUMNS.contains(&self.header[i].as_str()))
            .collect();
        CsvTable {
            header: keep.iter().map(|&i| self.header[i].clone()).collect(),
            rows: self
                .rows
                .iter()
                .map(|r| keep.iter().map(|&i| r[i].clone()).collect())
                .collect(),
        }
    }
}

/// Contents of the JSON sidecar written next to every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub command: String,
    pub config: ExperimentConfig,
    pub seed: u64,
    pub version: String,
    /// Seconds since the Unix epoch when the run started.
    pub started_at: f64,
    pub wall_seconds: f64,
    /// Command-specific results such as fitted slopes.
    #[serde(default)]
    pub summary: serde_json::Value,
}

impl RunMetadata {
    pub fn new(
        command: &str,
        config: &ExperimentConfig,
        started_at: f64,
        wall_seconds: f64,
    ) -> Self {
        RunMetadata {
            command: command.to_string(),
            config: config.clone(),
            seed: config.base.seed,
            version: format!("v{}", env!("CARGO_PKG_VERSION")),
            started_at,
            wall_seconds,
            summary: serde_json::Value::Null,
        }
    }
}

/// The report path with its extension replaced by `json`.
pub fn sidecar_path(output: &Path) -> PathBuf {
    output.with_extension("json")
}

fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let name = path
        .file_name()
        .ok_or_else(|| Error::io(path, std::io::Error::other("path has no file name")))?;
    let tmp = path.with_file_name(format!(".{}.tmp", name.to_string_lossy()));
    let write = || -> std::io::Result<()> {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()
    };
    if let Err(e) = write() {
        let _ = fs::remove_file(&tmp);
        return Err(Error::io(path, e));
    }
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        Error::io(path, e)
    })
}

/// Writes the CSV report and its sidecar; returns the sidecar path.
pub fn emit_report(
    table: &CsvTable,
    metadata: &RunMetadata,
    output_path: &Path,
) -> Result<PathBuf> {
    write_atomic(output_path, table.to_csv().as_bytes())?;
    let sidecar = sidecar_path(output_path);
    let json = serde_json::to_string_pretty(metadata)
        .map_err(|e| Error::Logic(format!("metadata serialization failed: {e}")))?;
    write_atomic(&sidecar, json.as_bytes())?;
    Ok(sidecar)
}

pub fn read_sidecar(path: &Path) -> Result<RunMetadata> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::Logic(format!("bad sidecar {}: {e}", path.display())))
}
