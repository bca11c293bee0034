//! Replicated experiments behind the CLI and the report files.

use std::time::Instant;

use rand::seq::index;
use rayon::prelude::*;
use serde::Serialize;

use super::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::kernel::certificates::{self, Certificate};
use crate::kernel::CutoffLevel;
use crate::metrics::{blob_lp_norm, moment_summary, wasserstein2, BlobSpec, EmpiricalMeasure};
use crate::rng::{stream_rng, REFERENCE_STREAM, SUBSAMPLE_STREAM_BASE};
use crate::sim::{coupled_run, coupled_run_stream, run, run_stream, SimConfig};
use crate::stats::{log_log_slope, mean_stderr};
use crate::vec3::Vec3;

/// Grid refinement used for the blob norm in `simulate` reports.
pub const SIMULATE_BLOB_REFINE: u32 = 4;

/// One point of a replicated sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReportRow {
    pub sweep_value: f64,
    pub mean: f64,
    pub stderr: f64,
    pub replicas: usize,
    /// Wall-clock seconds spent on this point.
    pub elapsed_seconds: f64,
}

fn replicate<F>(replicas: usize, sweep_value: f64, f: F) -> Result<ReportRow>
where
    F: Fn(u64) -> Result<f64> + Sync,
{
    let start = Instant::now();
    let values = (0..replicas as u64)
        .into_par_iter()
        .map(&f)
        .collect::<Result<Vec<f64>>>()?;
    let (mean, stderr) = mean_stderr(&values);
    Ok(ReportRow {
        sweep_value,
        mean,
        stderr,
        replicas,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KSweepReport {
    /// Rows in ascending `K_lo`.
    pub rows: Vec<ReportRow>,
    /// Least-squares slope of `log mean` against `log K_lo`.
    pub fitted_slope: Option<f64>,
    /// `1 - 2/ν`.
    pub theoretical_slope: f64,
}

/// `D(T)` of one coupled replica between cutoffs `k_lo <= k_hi`.
///
/// Replica `r` runs on stream `r` for every `k_lo`, so the points of a sweep
/// share their random numbers.
pub fn terminal_coupled_distance(
    base: &SimConfig,
    k_lo: f64,
    k_hi: f64,
    replica: u64,
) -> Result<f64> {
    let mut config = base.clone();
    config.diagnostic_times = vec![config.horizon];
    let out = coupled_run_stream(
        &config,
        CutoffLevel::new(k_lo)?,
        CutoffLevel::new(k_hi)?,
        replica,
    )?;
    Ok(*out.distance.last().expect("one diagnostic time"))
}

/// Mean terminal coupled distance for every `K_lo` against the fixed `K_hi`.
pub fn experiment_k_sweep(cfg: &ExperimentConfig) -> Result<KSweepReport> {
    let (Some(k_lo), Some(k_hi)) = (cfg.k_lo(), cfg.k_hi()) else {
        return Err(Error::config("ksweep needs sweep.k_lo and sweep.k_hi"));
    };
    let rows = k_lo
        .iter()
        .map(|&k| {
            replicate(cfg.replicas, k, |r| {
                terminal_coupled_distance(&cfg.base, k, k_hi, r)
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let xs: Vec<f64> = rows.iter().map(|r| r.sweep_value).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.mean).collect();
    Ok(KSweepReport {
        fitted_slope: log_log_slope(&xs, &ys),
        theoretical_slope: 1.0 - 2.0 / cfg.base.params.nu(),
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NSweepReport {
    /// Rows in ascending `N`.
    pub rows: Vec<ReportRow>,
    pub reference_n: usize,
    pub reference_k: f64,
    /// Whether the means strictly decrease with `N`.
    pub monotone_decreasing: bool,
}

/// Configuration of the reference run: `n_ref` particles at `k_ref`
/// (falling back to `sim.k`), observed only at the horizon.
pub fn reference_config(cfg: &ExperimentConfig) -> Result<SimConfig> {
    let reference = cfg
        .reference
        .and_then(|r| r.n_ref.map(|n| (n, r.k_ref)))
        .ok_or_else(|| Error::config("nsweep needs sweep.n_ref"))?;
    let mut config = cfg.base.clone();
    config.n = reference.0;
    if let Some(k) = reference.1 {
        config.cutoff = CutoffLevel::new(k)?;
    }
    config.diagnostic_times = vec![config.horizon];
    Ok(config)
}

/// Terminal particle cloud of the reference run, on [`REFERENCE_STREAM`].
pub fn reference_cloud(cfg: &ExperimentConfig) -> Result<Vec<Vec3>> {
    let config = reference_config(cfg)?;
    terminal_cloud(&config, REFERENCE_STREAM)
}

fn terminal_cloud(config: &SimConfig, stream: u64) -> Result<Vec<Vec3>> {
    let mut out = run_stream(config, stream)?;
    Ok(out.snapshots.pop().expect("one diagnostic time").velocities)
}

/// `W_2²` between the terminal cloud of an `n`-particle run at cutoff `k`
/// on `stream` and an `n`-point subsample of `reference`.
///
/// The subsample is drawn without replacement from stream
/// `SUBSAMPLE_STREAM_BASE + stream`; when `n` equals the reference size the
/// whole reference is used.
pub fn nsweep_point_distance(
    base: &SimConfig,
    n: usize,
    k: f64,
    stream: u64,
    reference: &[Vec3],
) -> Result<f64> {
    if n > reference.len() {
        return Err(Error::config(format!(
            "n_ref>max(n_values) violated: {} <= {n}",
            reference.len()
        )));
    }
    let mut config = base.clone();
    config.n = n;
    config.cutoff = CutoffLevel::new(k)?;
    config.diagnostic_times = vec![config.horizon];
    let cloud = terminal_cloud(&config, stream)?;
    let sub = if n == reference.len() {
        reference.to_vec()
    } else {
        let mut rng = stream_rng(base.seed, SUBSAMPLE_STREAM_BASE.wrapping_add(stream));
        let mut picks = index::sample(&mut rng, reference.len(), n).into_vec();
        picks.sort_unstable();
        picks.into_iter().map(|i| reference[i]).collect()
    };
    let w = wasserstein2(&EmpiricalMeasure::new(cloud)?, &EmpiricalMeasure::new(sub)?)?;
    Ok(w * w)
}

/// Mean `W_2²` distance to the reference for every `N` in the sweep.
pub fn experiment_n_sweep(cfg: &ExperimentConfig) -> Result<NSweepReport> {
    let Some(n_values) = cfg.n_values() else {
        return Err(Error::config("nsweep needs sweep.n_values"));
    };
    let reference_cfg = reference_config(cfg)?;
    let reference = terminal_cloud(&reference_cfg, REFERENCE_STREAM)?;
    let k = cfg.base.cutoff.value();
    let rows = n_values
        .iter()
        .map(|&n| {
            replicate(cfg.replicas, n as f64, |r| {
                nsweep_point_distance(&cfg.base, n, k, r, &reference)
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let monotone_decreasing = rows.windows(2).all(|w| w[1].mean < w[0].mean);
    Ok(NSweepReport {
        rows,
        reference_n: reference_cfg.n,
        reference_k: reference_cfg.cutoff.value(),
        monotone_decreasing,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimulateRow {
    pub t: f64,
    pub m2: f64,
    pub m4: f64,
    pub momentum: Vec3,
    pub energy: f64,
    pub blob_lp: f64,
    pub events: u64,
}

/// One run on stream 0 with moments and the blob norm at every diagnostic
/// time.
pub fn experiment_simulate(cfg: &ExperimentConfig) -> Result<Vec<SimulateRow>> {
    let out = run(&cfg.base)?;
    let spec = BlobSpec::for_particles(cfg.base.n, cfg.blob.p, cfg.blob.delta)?;
    out.snapshots
        .par_iter()
        .map(|s| {
            let m = moment_summary(&s.velocities);
            Ok(SimulateRow {
                t: s.time,
                m2: m.m2,
                m4: m.m4,
                momentum: m.momentum,
                energy: m.energy,
                blob_lp: blob_lp_norm(&s.measure(), &spec, SIMULATE_BLOB_REFINE)?,
                events: s.event_count,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoupleRow {
    pub t: f64,
    pub msd: f64,
}

/// One coupled run between `sim.k` (low) and `sweep.k_hi` (high).
pub fn experiment_couple(cfg: &ExperimentConfig) -> Result<Vec<CoupleRow>> {
    let k_hi = cfg
        .k_hi()
        .ok_or_else(|| Error::config("couple needs sweep.k_hi"))?;
    let out = coupled_run(&cfg.base, cfg.base.cutoff, CutoffLevel::new(k_hi)?)?;
    Ok(out
        .times
        .iter()
        .zip(&out.distance)
        .map(|(&t, &msd)| CoupleRow { t, msd })
        .collect())
}

/// Base sample size of the quadrature certificates run by `verify`.
pub const VERIFY_RATIO_SAMPLES: usize = 1000;

pub fn experiment_verify(cfg: &ExperimentConfig) -> Result<Vec<Certificate>> {
    certificates::run_all(&cfg.base.params, VERIFY_RATIO_SAMPLES, cfg.base.seed)
}
