//! Exact simulation of the truncated Nanbu jump process.
//!
//! For every configuration the total jump rate is `2π (N-1) K`: each ordered
//! pair `(i, j)` carries the jump measure `N^{-1} dz dφ` on `[0, K] × [0, 2π)`.
//! So the holding times are i.i.d. exponential and the marks are uniform,
//! and the process is simulated without thinning or time discretisation.

use std::f64::consts::TAU;
use std::time::Instant;

use rand::Rng;
use rand_distr::{Distribution, Exp};

use super::state::{EventRecord, ParticleState, SimConfig};
use crate::error::{Error, Result};
use crate::kernel::{deviation_c, CutoffLevel, SoftPotentialParams};
use crate::metrics::{moment_summary, MomentSummary};
use crate::rng::{stream_rng, SimRng};

/// `2π (n-1) K`; zero when there is no pair to collide.
pub fn total_jump_rate(n: usize, cutoff: CutoffLevel) -> f64 {
    if n < 2 {
        return 0.0;
    }
    TAU * (n - 1) as f64 * cutoff.value()
}

/// Random marks of one event before it is applied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventDraw {
    pub holding_time: f64,
    pub i: usize,
    pub j: usize,
    pub z: f64,
    pub phi: f64,
}

/// Draws holding time, ordered pair `(i, j)`, `z ~ U[0, k)` and `φ ~ U[0, 2π)`, in that order.
pub fn draw_event<R: Rng + ?Sized>(n: usize, rate: f64, k: f64, rng: &mut R) -> EventDraw {
    let holding_time = Exp::new(rate).expect("positive rate").sample(rng);
    let i = rng.random_range(0..n);
    let mut j = rng.random_range(0..n - 1);
    if j >= i {
        j += 1;
    }
    let z = k * rng.random::<f64>();
    let phi = TAU * rng.random::<f64>();
    EventDraw {
        holding_time,
        i,
        j,
        z,
        phi,
    }
}

/// Generator data of one system: kernel parameters and cutoff.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NanbuDynamics {
    pub params: SoftPotentialParams,
    pub cutoff: CutoffLevel,
}

impl NanbuDynamics {
    pub fn new(params: SoftPotentialParams, cutoff: CutoffLevel) -> Self {
        NanbuDynamics { params, cutoff }
    }

    pub fn rate(&self, n: usize) -> f64 {
        total_jump_rate(n, self.cutoff)
    }

    /// Applies `v_i ← v_i + c_K(v_i, v_j, z, φ + phase)` and advances the clock.
    pub fn apply(&self, state: &mut ParticleState, ev: &EventDraw, phase: f64) -> EventRecord {
        let (vi, vj) = (state.velocities[ev.i], state.velocities[ev.j]);
        let dev = deviation_c(
            &self.params,
            vi,
            vj,
            ev.z,
            ev.phi + phase,
            Some(self.cutoff),
        );
        state.velocities[ev.i] = vi + dev;
        state.time += ev.holding_time;
        state.event_count += 1;
        EventRecord {
            time: state.time,
            i: ev.i,
            j: ev.j,
            z: ev.z,
            phi: ev.phi,
            applied_deviation: dev,
        }
    }

    /// One jump of the chain: only `v_i` changes.
    pub fn step<R: Rng + ?Sized>(
        &self,
        state: &mut ParticleState,
        rng: &mut R,
    ) -> Result<EventRecord> {
        let n = state.len();
        if n < 2 {
            return Err(Error::Logic(format!(
                "a step needs at least two particles, state has {n}"
            )));
        }
        let ev = draw_event(n, self.rate(n), self.cutoff.value(), rng);
        Ok(self.apply(state, &ev, 0.0))
    }
}

/// Summary written alongside the snapshots of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunLog {
    pub events: u64,
    pub wall_seconds: f64,
    pub final_moments: MomentSummary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    /// One state per diagnostic time; `time` is the diagnostic time itself.
    pub snapshots: Vec<ParticleState>,
    pub log: RunLog,
}

/// `N` i.i.d. draws from the initial law at time zero.
pub fn sample_initial<R: Rng + ?Sized>(
    law: &super::InitialLaw,
    n: usize,
    rng: &mut R,
) -> Result<ParticleState> {
    if n < 2 {
        return Err(Error::config(format!("n>=2 violated: n = {n}")));
    }
    law.validate()?;
    Ok(ParticleState::new(law.sample(n, rng)))
}

/// [`sample_initial`] on stream 0 of `seed`.
pub fn sample_initial_seeded(
    law: &super::InitialLaw,
    n: usize,
    seed: u64,
) -> Result<ParticleState> {
    sample_initial(law, n, &mut stream_rng(seed, 0))
}

/// Runs `config` on stream 0 of its seed.
pub fn run(config: &SimConfig) -> Result<RunOutput> {
    run_stream(config, 0)
}

/// Runs `config` on the given stream of its seed. The initial draw and the
/// dynamics consume the same stream.
pub fn run_stream(config: &SimConfig, stream: u64) -> Result<RunOutput> {
    config.validate()?;
    let mut rng = stream_rng(config.seed, stream);
    let state = sample_initial(&config.initial, config.n, &mut rng)?;
    run_from(config, state, &mut rng)
}

/// Evolves `state` to `config.horizon`, recording the state after all events
/// with event time `<= t` for each diagnostic time `t`.
pub fn run_from(
    config: &SimConfig,
    mut state: ParticleState,
    rng: &mut SimRng,
) -> Result<RunOutput> {
    let started = Instant::now();
    let dynamics = NanbuDynamics::new(config.params, config.cutoff);
    let times = config.effective_times();
    let n = state.len();
    let rate = dynamics.rate(n);
    let mut snapshots = Vec::with_capacity(times.len());
    let mut next = 0;

    loop {
        let ev = draw_event(n, rate, config.cutoff.value(), rng);
        let t_next = state.time + ev.holding_time;
        while next < times.len() && times[next] < t_next {
            snapshots.push(ParticleState {
                velocities: state.velocities.clone(),
                time: times[next],
                event_count: state.event_count,
            });
            next += 1;
        }
        if t_next > config.horizon {
            break;
        }
        dynamics.apply(&mut state, &ev, 0.0);
    }

    let log = RunLog {
        events: state.event_count,
        wall_seconds: started.elapsed().as_secs_f64(),
        final_moments: moment_summary(&state.velocities),
    };
    Ok(RunOutput { snapshots, log })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::InitialLaw;
    use crate::vec3::Vec3;
    use std::f64::consts::PI;

    fn params() -> SoftPotentialParams {
        SoftPotentialParams::new(-0.5, 0.7).unwrap()
    }

    fn config(n: usize, k: f64, t: f64) -> SimConfig {
        SimConfig {
            n,
            cutoff: CutoffLevel::new(k).unwrap(),
            horizon: t,
            seed: 11,
            params: params(),
            initial: InitialLaw::default(),
            diagnostic_times: vec![0.0, t / 2.0, t],
        }
    }

    #[test]
    fn rate_values() {
        let k1 = CutoffLevel::new(1.0).unwrap();
        assert!((total_jump_rate(2, k1) - 2.0 * PI).abs() < 1e-15);
        assert_eq!(total_jump_rate(1, CutoffLevel::new(7.0).unwrap()), 0.0);
        let r = total_jump_rate(10, CutoffLevel::new(2.0).unwrap());
        assert!((r - 36.0 * PI).abs() < 1e-12);
        assert!((r - 113.0973).abs() < 1e-4);
    }

    #[test]
    fn step_rejects_single_particle() {
        let dynamics = NanbuDynamics::new(params(), CutoffLevel::new(1.0).unwrap());
        let mut state = ParticleState::new(vec![Vec3::X]);
        let mut rng = stream_rng(1, 0);
        assert!(matches!(
            dynamics.step(&mut state, &mut rng),
            Err(Error::Logic(_))
        ));
    }

    #[test]
    fn step_changes_exactly_one_particle() {
        let dynamics = NanbuDynamics::new(params(), CutoffLevel::new(3.0).unwrap());
        let mut rng = stream_rng(5, 0);
        let mut state = sample_initial(&InitialLaw::default(), 20, &mut rng).unwrap();
        for _ in 0..1000 {
            let before = state.clone();
            let rec = dynamics.step(&mut state, &mut rng).unwrap();
            let changed: Vec<usize> = (0..20)
                .filter(|&k| before.velocities[k] != state.velocities[k])
                .collect();
            assert!(changed.len() <= 1);
            if let Some(&k) = changed.first() {
                assert_eq!(k, rec.i);
            }
            assert_ne!(rec.i, rec.j);
            assert!(rec.z >= 0.0 && rec.z <= 3.0);
            assert!(state.time > before.time);
            assert_eq!(state.event_count, before.event_count + 1);
            let rel = (before.velocities[rec.i] - before.velocities[rec.j]).norm();
            assert!(rec.applied_deviation.norm() <= rel);
        }
    }

    #[test]
    fn zero_horizon_returns_initial_state() {
        let mut cfg = config(10, 2.0, 0.0);
        cfg.diagnostic_times = vec![];
        let out = run(&cfg).unwrap();
        assert_eq!(out.snapshots.len(), 1);
        let init = sample_initial_seeded(&cfg.initial, cfg.n, cfg.seed).unwrap();
        assert_eq!(out.snapshots[0].velocities, init.velocities);
        assert_eq!(out.log.events, 0);
    }

    #[test]
    fn replay_is_bit_identical() {
        let cfg = config(30, 4.0, 0.5);
        let a = run(&cfg).unwrap();
        let b = run(&cfg).unwrap();
        assert_eq!(a.snapshots, b.snapshots);
        let c = run_stream(&cfg, 1).unwrap();
        assert_ne!(a.snapshots[2], c.snapshots[2]);
    }

    #[test]
    fn snapshots_follow_diagnostic_times() {
        let cfg = config(30, 4.0, 0.5);
        let out = run(&cfg).unwrap();
        let times: Vec<f64> = out.snapshots.iter().map(|s| s.time).collect();
        assert_eq!(times, cfg.diagnostic_times);
        assert_eq!(out.snapshots[0].event_count, 0);
        assert!(out.snapshots[1].event_count <= out.snapshots[2].event_count);
        assert_eq!(out.snapshots[2].event_count, out.log.events);
    }

    #[test]
    fn invalid_config_is_rejected() {
        let mut cfg = config(1, 2.0, 1.0);
        cfg.diagnostic_times = vec![0.5, 2.0];
        let Err(Error::Config(errs)) = run(&cfg) else {
            panic!("expected config error")
        };
        assert_eq!(errs.len(), 2, "{errs:?}");
    }
}
