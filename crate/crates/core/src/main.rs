use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand};

use nanbu::harness::{self, CsvTable, ExperimentConfig, RunMetadata};
use nanbu::{Error, Result};

/// Nanbu particle simulations of the homogeneous Boltzmann equation with
/// soft potentials.
#[derive(Debug, Parser)]
#[command(name = "nanbu", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// TOML configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed, overriding `sim.seed`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// CSV report path; the JSON sidecar is written next to it.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Replica count, overriding `replicas`.
    #[arg(long, global = true)]
    replicas: Option<usize>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Command {
    /// One run with moments and blob norms at the diagnostic times.
    Simulate,
    /// Distance to a reference run as the particle count grows.
    Nsweep,
    /// Coupled distance as the low cutoff grows.
    Ksweep,
    /// One coupled run between `sim.k` and `sweep.k_hi`.
    Couple,
    /// Kernel certificates.
    Verify,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::Nsweep => "nsweep",
            Command::Ksweep => "ksweep",
            Command::Couple => "couple",
            Command::Verify => "verify",
        }
    }
}

const VERIFY_DEFAULTS: &str = "
    params.gamma = -0.5
    params.nu = 0.7
    sim.n = 2
    sim.k = 1
    sim.t = 0
";

fn load(cli: &Cli) -> Result<ExperimentConfig> {
    let mut cfg = match (&cli.config, cli.command) {
        (Some(path), _) => harness::load_config(path)?,
        (None, Command::Verify) => harness::parse_config(VERIFY_DEFAULTS)?,
        (None, _) => return Err(Error::config("--config is required")),
    };
    if let Some(seed) = cli.seed {
        cfg.base.seed = seed;
    }
    if let Some(r) = cli.replicas {
        if r == 0 {
            return Err(Error::config("replicas>=1 violated: replicas = 0"));
        }
        cfg.replicas = r;
    }
    let default_out = format!("{}.csv", cli.command.name());
    cfg.output_path = cli
        .out
        .as_ref()
        .map(|p| p.to_string_lossy().into_owned())
        .unwrap_or(default_out);
    Ok(cfg)
}

fn execute(cli: &Cli) -> Result<()> {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Error::config(format!("cannot start {threads} threads: {e}")))?;
    }
    let cfg = load(cli)?;
    let started_at = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs_f64())
        .unwrap_or(0.0);
    let clock = Instant::now();

    let (table, summary) = match cli.command {
        Command::Simulate => {
            let rows = harness::experiment_simulate(&cfg)?;
            for r in &rows {
                println!(
                    "t={:.4} m2={:.6} m4={:.6} blob_lp={:.6} events={}",
                    r.t, r.m2, r.m4, r.blob_lp, r.events
                );
            }
            (CsvTable::simulate(&rows), serde_json::Value::Null)
        }
        Command::Nsweep => {
            let rep = harness::experiment_n_sweep(&cfg)?;
            for r in &rep.rows {
                println!(
                    "n={} mean_w2sq={:.6e} stderr={:.2e}",
                    r.sweep_value, r.mean, r.stderr
                );
            }
            println!("monotone_decreasing={}", rep.monotone_decreasing);
            let summary = serde_json::json!({
                "reference_n": rep.reference_n,
                "reference_k": rep.reference_k,
                "monotone_decreasing": rep.monotone_decreasing,
            });
            (CsvTable::nsweep(&rep.rows), summary)
        }
        Command::Ksweep => {
            let rep = harness::experiment_k_sweep(&cfg)?;
            for r in &rep.rows {
                println!(
                    "k_lo={} mean_msd={:.6e} stderr={:.2e}",
                    r.sweep_value, r.mean, r.stderr
                );
            }
            println!(
                "fitted_slope={} theoretical_slope={:.4}",
                rep.fitted_slope
                    .map_or("n/a".to_string(), |s| format!("{s:.4}")),
                rep.theoretical_slope
            );
            let summary = serde_json::json!({
                "fitted_slope": rep.fitted_slope,
                "theoretical_slope": rep.theoretical_slope,
            });
            (CsvTable::ksweep(&rep.rows), summary)
        }
        Command::Couple => {
            let rows = harness::experiment_couple(&cfg)?;
            for r in &rows {
                println!("t={:.4} msd={:.6e}", r.t, r.msd);
            }
            (CsvTable::couple(&rows), serde_json::Value::Null)
        }
        Command::Verify => {
            let certs = harness::experiment_verify(&cfg)?;
            for c in &certs {
                let status = if c.passed { "PASS" } else { "FAIL" };
                println!(
                    "{status} {} statistic={:.3e} threshold={:.3e}",
                    c.name, c.statistic, c.threshold
                );
            }
            let failed: Vec<&str> = certs
                .iter()
                .filter(|c| !c.passed)
                .map(|c| c.name.as_str())
                .collect();
            let table = CsvTable::verify(&certs);
            if !failed.is_empty() {
                write(
                    cli,
                    &cfg,
                    &table,
                    serde_json::Value::Null,
                    started_at,
                    &clock,
                )?;
                return Err(Error::Numerical(format!(
                    "certificates failed: {}",
                    failed.join(", ")
                )));
            }
            (table, serde_json::Value::Null)
        }
    };
    write(cli, &cfg, &table, summary, started_at, &clock)
}

fn write(
    cli: &Cli,
    cfg: &ExperimentConfig,
    table: &CsvTable,
    summary: serde_json::Value,
    started_at: f64,
    clock: &Instant,
) -> Result<()> {
    let mut meta = RunMetadata::new(
        cli.command.name(),
        cfg,
        started_at,
        clock.elapsed().as_secs_f64(),
    );
    meta.summary = summary;
    let out = Path::new(&cfg.output_path);
    harness::emit_report(table, &meta, out)?;
    eprintln!("wrote {}", out.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
