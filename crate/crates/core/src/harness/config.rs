//! Experiment configuration documents.
//!
//! Documents are TOML with flat dotted keys (`params.gamma = -0.5`) or the
//! equivalent tables. Unknown keys are rejected, and every violated constraint
//! is reported at once.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::angular::param_violations;
use crate::kernel::{CutoffLevel, SoftPotentialParams};
use crate::metrics::p_zero;
use crate::sim::{InitialLaw, MixtureComponent, SimConfig};
use crate::vec3::Vec3;

/// Every key a document may contain.
pub const KNOWN_KEYS: &[&str] = &[
    "params.gamma",
    "params.nu",
    "sim.n",
    "sim.k",
    "sim.t",
    "sim.seed",
    "init.kind",
    "init.mean",
    "init.variance",
    "init.center",
    "init.radius",
    "init.components",
    "init.q",
    "diag.times",
    "sweep.n_values",
    "sweep.k_lo",
    "sweep.k_hi",
    "sweep.n_ref",
    "sweep.k_ref",
    "replicas",
    "blob.p",
    "blob.delta",
];

/// Moment order assumed for `f_0` when `init.q` is absent.
pub const DEFAULT_MOMENT_ORDER: f64 = 8.0;
pub const DEFAULT_OUTPUT: &str = "report.csv";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sweep {
    /// Particle counts for the N-sweep, strictly increasing.
    NValues(Vec<usize>),
    /// Coupled cutoff study: low cutoffs (strictly increasing, needed by the
    /// K-sweep) against one high cutoff.
    Coupled { k_lo: Option<Vec<f64>>, k_hi: f64 },
}

/// Resolution of the surrogate ground-truth run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Reference {
    pub n_ref: Option<usize>,
    pub k_ref: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlobSettings {
    pub p: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub base: SimConfig,
    pub sweep: Option<Sweep>,
    pub replicas: usize,
    pub reference: Option<Reference>,
    /// Order `q` of the finite moment assumed for `f_0`.
    pub moment_order: f64,
    pub blob: BlobSettings,
    pub output_path: String,
}

impl ExperimentConfig {
    pub fn n_values(&self) -> Option<&[usize]> {
        match &self.sweep {
            Some(Sweep::NValues(v)) => Some(v),
            _ => None,
        }
    }

    pub fn k_hi(&self) -> Option<f64> {
        match &self.sweep {
            Some(Sweep::Coupled { k_hi, .. }) => Some(*k_hi),
            _ => None,
        }
    }

    pub fn k_lo(&self) -> Option<&[f64]> {
        match &self.sweep {
            Some(Sweep::Coupled { k_lo: Some(v), .. }) => Some(v),
            _ => None,
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct RawDoc {
    params: RawParams,
    sim: RawSim,
    init: RawInit,
    diag: RawDiag,
    sweep: RawSweep,
    replicas: Option<i64>,
    blob: RawBlob,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct RawParams {
    gamma: Option<f64>,
    nu: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct RawSim {
    n: Option<i64>,
    k: Option<f64>,
    t: Option<f64>,
    seed: Option<i64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct RawInit {
    kind: Option<String>,
    mean: Option<[f64; 3]>,
    variance: Option<f64>,
    center: Option<[f64; 3]>,
    radius: Option<f64>,
    components: Option<Vec<MixtureComponent>>,
    q: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct RawDiag {
    times: Option<Vec<f64>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct RawSweep {
    n_values: Option<Vec<i64>>,
    k_lo: Option<Vec<f64>>,
    k_hi: Option<f64>,
    n_ref: Option<i64>,
    k_ref: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct RawBlob {
    p: Option<f64>,
    delta: Option<f64>,
}

fn flatten_keys(prefix: &str, table: &toml::Table, out: &mut Vec<String>) {
    for (k, v) in table {
        let key = if prefix.is_empty() {
            k.clone()
        } else {
            format!("{prefix}.{k}")
        };
        match v {
            toml::Value::Table(t) if !KNOWN_KEYS.contains(&key.as_str()) => {
                flatten_keys(&key, t, out)
            }
            _ => out.push(key),
        }
    }
}

fn collect<T>(errs: &mut Vec<String>, r: Result<T>) -> Option<T> {
    match r {
        Ok(v) => Some(v),
        Err(Error::Config(v)) => {
            errs.extend(v);
            None
        }
        Err(e) => {
            errs.push(e.to_string());
            None
        }
    }
}

fn strictly_increasing<T: PartialOrd>(v: &[T]) -> bool {
    v.windows(2).all(|w| w[0] < w[1])
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let table: toml::Table = text
        .parse()
        .map_err(|e: toml::de::Error| Error::config(format!("malformed document: {e}")))?;

    let mut keys = Vec::new();
    flatten_keys("", &table, &mut keys);
    let unknown: Vec<String> = keys
        .iter()
        .filter(|k| !KNOWN_KEYS.contains(&k.as_str()))
        .map(|k| format!("unknown key {k}"))
        .collect();
    if !unknown.is_empty() {
        return Err(Error::Config(unknown));
    }

    let raw: RawDoc = toml::Value::Table(table)
        .try_into()
        .map_err(|e: toml::de::Error| Error::config(format!("bad value: {e}")))?;
    build(raw)
}

fn require<T>(errs: &mut Vec<String>, v: Option<T>, key: &str) -> Option<T> {
    if v.is_none() {
        errs.push(format!("missing required key {key}"));
    }
    v
}

fn build(raw: RawDoc) -> Result<ExperimentConfig> {
    let mut errs = Vec::new();

    let gamma = require(&mut errs, raw.params.gamma, "params.gamma");
    let nu = require(&mut errs, raw.params.nu, "params.nu");
    let n = require(&mut errs, raw.sim.n, "sim.n");
    let k = require(&mut errs, raw.sim.k, "sim.k");
    let t = require(&mut errs, raw.sim.t, "sim.t");

    let params = match (gamma, nu) {
        (Some(g), Some(v)) => {
            let violations = param_violations(g, v);
            if violations.is_empty() {
                SoftPotentialParams::new(g, v).ok()
            } else {
                errs.extend(violations);
                None
            }
        }
        _ => None,
    };
    let cutoff = k.and_then(|k| collect(&mut errs, CutoffLevel::new(k)));
    let n = n.and_then(|n| {
        if n < 2 {
            errs.push(format!("n>=2 violated: n = {n}"));
            None
        } else {
            Some(n as usize)
        }
    });
    let seed = match raw.sim.seed {
        Some(s) if s < 0 => {
            errs.push(format!("sim.seed>=0 violated: seed = {s}"));
            None
        }
        Some(s) => Some(s as u64),
        None => Some(0),
    };

    let initial = build_initial(&raw.init, &mut errs);

    let diagnostic_times = match (raw.diag.times, t) {
        (Some(times), _) => times,
        (None, Some(t)) if t > 0.0 => vec![0.0, t],
        (None, _) => vec![0.0],
    };

    let replicas = match raw.replicas {
        Some(r) if r < 1 => {
            errs.push(format!("replicas>=1 violated: replicas = {r}"));
            1
        }
        Some(r) => r as usize,
        None => 1,
    };

    let q = raw.init.q.unwrap_or(DEFAULT_MOMENT_ORDER);
    let (sweep, reference) = build_sweep(&raw.sweep, &mut errs);

    if let (Some(Sweep::NValues(_)), Some(g), Some(v)) = (&sweep, gamma, nu) {
        if !(q > 6.0) {
            errs.push(format!("q>6 violated: q = {q}"));
        }
        if params.is_some() {
            collect(&mut errs, p_zero(g, v, q));
        }
    }

    let delta = raw.blob.delta.unwrap_or(6.0 / q);
    if !(delta > 0.0 && delta < 1.0) {
        errs.push(format!("blob.delta in (0,1) violated: delta = {delta}"));
    }
    let p = raw.blob.p.unwrap_or_else(|| match (gamma, nu) {
        (Some(g), Some(v)) => 0.5 * (3.0 / (3.0 + g) + 3.0 / (3.0 - v)),
        _ => 1.25,
    });
    if !(p > 1.0 && p < 2.0) {
        errs.push(format!("blob.p in (1,2) violated: p = {p}"));
    }

    let base = match (n, cutoff, t, seed, params, initial) {
        (Some(n), Some(cutoff), Some(horizon), Some(seed), Some(params), Some(initial)) => {
            let base = SimConfig {
                n,
                cutoff,
                horizon,
                seed,
                params,
                initial,
                diagnostic_times,
            };
            errs.extend(base.violations());
            Some(base)
        }
        _ => None,
    };

    if let (
        Some(Reference {
            n_ref: Some(n_ref), ..
        }),
        Some(Sweep::NValues(ns)),
    ) = (reference, &sweep)
    {
        if let Some(&max) = ns.last() {
            if n_ref <= max {
                errs.push(format!("n_ref>max(n_values) violated: {n_ref} <= {max}"));
            }
        }
    }

    match base {
        Some(base) if errs.is_empty() => Ok(ExperimentConfig {
            base,
            sweep,
            replicas,
            reference,
            moment_order: q,
            blob: BlobSettings { p, delta },
            output_path: DEFAULT_OUTPUT.to_string(),
        }),
        _ => Err(Error::Config(errs)),
    }
}

fn build_initial(raw: &RawInit, errs: &mut Vec<String>) -> Option<InitialLaw> {
    let kind = raw.kind.as_deref().unwrap_or("gaussian");
    let unused = |errs: &mut Vec<String>, present: bool, key: &str| {
        if present {
            errs.push(format!("{key} is not used by init.kind = {kind}"));
        }
    };
    let law = match kind {
        "gaussian" => {
            unused(errs, raw.center.is_some(), "init.center");
            unused(errs, raw.radius.is_some(), "init.radius");
            unused(errs, raw.components.is_some(), "init.components");
            InitialLaw::Gaussian {
                mean: raw.mean.map(Vec3::from).unwrap_or(Vec3::ZERO),
                variance: raw.variance.unwrap_or(1.0),
            }
        }
        "gaussian_mixture" => {
            unused(errs, raw.mean.is_some(), "init.mean");
            unused(errs, raw.variance.is_some(), "init.variance");
            unused(errs, raw.center.is_some(), "init.center");
            unused(errs, raw.radius.is_some(), "init.radius");
            let Some(components) = raw.components.clone() else {
                errs.push("missing required key init.components".into());
                return None;
            };
            InitialLaw::GaussianMixture { components }
        }
        "uniform_ball" => {
            unused(errs, raw.mean.is_some(), "init.mean");
            unused(errs, raw.variance.is_some(), "init.variance");
            unused(errs, raw.components.is_some(), "init.components");
            InitialLaw::UniformBall {
                center: raw.center.map(Vec3::from).unwrap_or(Vec3::ZERO),
                radius: raw.radius.unwrap_or(1.0),
            }
        }
        other => {
            errs.push(format!(
                "init.kind must be one of gaussian, gaussian_mixture, uniform_ball; got {other}"
            ));
            return None;
        }
    };
    Some(law)
}

fn build_sweep(raw: &RawSweep, errs: &mut Vec<String>) -> (Option<Sweep>, Option<Reference>) {
    let n_values = raw.n_values.as_ref().map(|ns| {
        if ns.is_empty() {
            errs.push("sweep.n_values must be nonempty".into());
        }
        if !strictly_increasing(ns) {
            errs.push("sweep.n_values must be strictly increasing".into());
        }
        if let Some(n) = ns.iter().find(|&&n| n < 2) {
            errs.push(format!("sweep.n_values entries must be >= 2, got {n}"));
        }
        ns.iter().map(|&n| n.max(0) as usize).collect::<Vec<_>>()
    });

    if let Some(k_lo) = &raw.k_lo {
        if k_lo.is_empty() {
            errs.push("sweep.k_lo must be nonempty".into());
        }
        if !strictly_increasing(k_lo) {
            errs.push("sweep.k_lo must be strictly increasing".into());
        }
        for &k in k_lo {
            collect(errs, CutoffLevel::new(k));
        }
        match raw.k_hi {
            None => errs.push("sweep.k_lo requires sweep.k_hi".into()),
            Some(hi) => {
                if let Some(&max) = k_lo.iter().max_by(|a, b| a.total_cmp(b)) {
                    if max > hi {
                        errs.push(format!("k_lo<=k_hi violated: {max} > {hi}"));
                    }
                }
            }
        }
    }
    if let Some(hi) = raw.k_hi {
        collect(errs, CutoffLevel::new(hi));
    }

    let sweep = match (n_values, raw.k_hi) {
        (Some(_), Some(_)) => {
            errs.push(
                "sweep.n_values and sweep.k_hi select different sweeps; give only one".into(),
            );
            None
        }
        (Some(ns), None) => Some(Sweep::NValues(ns)),
        (None, Some(k_hi)) => Some(Sweep::Coupled {
            k_lo: raw.k_lo.clone(),
            k_hi,
        }),
        (None, None) => None,
    };

    let reference = if raw.n_ref.is_some() || raw.k_ref.is_some() {
        if let Some(n) = raw.n_ref {
            if n < 2 {
                errs.push(format!("sweep.n_ref>=2 violated: n_ref = {n}"));
            }
        }
        if let Some(k) = raw.k_ref {
            collect(errs, CutoffLevel::new(k));
        }
        Some(Reference {
            n_ref: raw.n_ref.map(|n| n.max(0) as usize),
            k_ref: raw.k_ref,
        })
    } else {
        None
    };
    if matches!(sweep, Some(Sweep::NValues(_))) && reference.and_then(|r| r.n_ref).is_none() {
        errs.push("sweep.n_values requires sweep.n_ref".into());
    }
    (sweep, reference)
}
