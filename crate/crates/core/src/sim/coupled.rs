//! Common-randomness coupling of two systems that differ only in their cutoff.
//!
//! Both systems start from the same initial draw. Events arrive at the rate of
//! the higher cutoff with shared marks `(i, j, z, φ)`; the high system always
//! jumps, the low system only when `z <= K_lo`, using azimuth
//! `φ + φ0(v_i^hi - v_j^hi, v_i^lo - v_j^lo)` so the two deviations stay aligned.

use super::engine::{draw_event, sample_initial, NanbuDynamics};
use super::state::{ParticleState, SimConfig};
use crate::error::{Error, Result};
use crate::kernel::geometry::phi0_or_zero;
use crate::kernel::CutoffLevel;
use crate::rng::stream_rng;
use crate::vec3::Vec3;

#[derive(Debug, Clone, PartialEq)]
pub struct CoupledOutput {
    pub times: Vec<f64>,
    pub hi: Vec<ParticleState>,
    pub lo: Vec<ParticleState>,
    /// `D(t) = N^{-1} Σ_i |v_i^hi(t) - v_i^lo(t)|²` at each diagnostic time.
    pub distance: Vec<f64>,
    /// Events drawn (all applied by the high system).
    pub events: u64,
    /// Events that also moved the low system.
    pub lo_events: u64,
}

/// `N^{-1} Σ |a_i - b_i|²` for index-aligned clouds.
pub fn mean_square_distance(a: &[Vec3], b: &[Vec3]) -> f64 {
    assert_eq!(a.len(), b.len(), "clouds must be index aligned");
    a.iter()
        .zip(b)
        .map(|(x, y)| (*x - *y).norm_sq())
        .sum::<f64>()
        / a.len() as f64
}

/// [`coupled_run_stream`] on stream 0. `config.cutoff` is not used.
pub fn coupled_run(
    config: &SimConfig,
    cutoff_lo: CutoffLevel,
    cutoff_hi: CutoffLevel,
) -> Result<CoupledOutput> {
    coupled_run_stream(config, cutoff_lo, cutoff_hi, 0)
}

pub fn coupled_run_stream(
    config: &SimConfig,
    cutoff_lo: CutoffLevel,
    cutoff_hi: CutoffLevel,
    stream: u64,
) -> Result<CoupledOutput> {
    if cutoff_lo > cutoff_hi {
        return Err(Error::config(format!(
            "k_lo<=k_hi violated: {} > {}",
            cutoff_lo.value(),
            cutoff_hi.value()
        )));
    }
    config.validate()?;
    let mut rng = stream_rng(config.seed, stream);
    let mut hi = sample_initial(&config.initial, config.n, &mut rng)?;
    let mut lo = hi.clone();
    let dyn_hi = NanbuDynamics::new(config.params, cutoff_hi);
    let dyn_lo = NanbuDynamics::new(config.params, cutoff_lo);
    let n = config.n;
    let rate = dyn_hi.rate(n);
    let times = config.effective_times();

    let mut out = CoupledOutput {
        times: times.clone(),
        hi: Vec::with_capacity(times.len()),
        lo: Vec::with_capacity(times.len()),
        distance: Vec::with_capacity(times.len()),
        events: 0,
        lo_events: 0,
    };
    let mut next = 0;
    loop {
        let ev = draw_event(n, rate, cutoff_hi.value(), &mut rng);
        let t_next = hi.time + ev.holding_time;
        while next < times.len() && times[next] < t_next {
            let t = times[next];
            let mut h = hi.clone();
            let mut l = lo.clone();
            h.time = t;
            l.time = t;
            out.distance
                .push(mean_square_distance(&h.velocities, &l.velocities));
            out.hi.push(h);
            out.lo.push(l);
            next += 1;
        }
        if t_next > config.horizon {
            break;
        }

        let rel_hi = hi.velocities[ev.i] - hi.velocities[ev.j];
        let rel_lo = lo.velocities[ev.i] - lo.velocities[ev.j];
        dyn_hi.apply(&mut hi, &ev, 0.0);
        out.events += 1;
        if ev.z <= cutoff_lo.value() {
            let phase = phi0_or_zero(rel_hi, rel_lo);
            dyn_lo.apply(&mut lo, &ev, phase);
            out.lo_events += 1;
        } else {
            lo.time = hi.time;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::SoftPotentialParams;
    use crate::sim::InitialLaw;

    fn config() -> SimConfig {
        SimConfig {
            n: 40,
            cutoff: CutoffLevel::new(1.0).unwrap(),
            horizon: 0.3,
            seed: 3,
            params: SoftPotentialParams::new(-0.5, 0.7).unwrap(),
            initial: InitialLaw::default(),
            diagnostic_times: vec![0.0, 0.1, 0.2, 0.3],
        }
    }

    #[test]
    fn equal_cutoffs_never_separate() {
        let k = CutoffLevel::new(6.0).unwrap();
        let out = coupled_run(&config(), k, k).unwrap();
        assert!(out.events > 0);
        assert_eq!(out.events, out.lo_events);
        assert!(out.distance.iter().all(|&d| d == 0.0));
        assert_eq!(out.hi, out.lo);
    }

    #[test]
    fn high_system_matches_plain_run() {
        use crate::sim::run_stream;
        let cfg = config();
        let k_hi = CutoffLevel::new(8.0).unwrap();
        let out = coupled_run_stream(&cfg, CutoffLevel::new(2.0).unwrap(), k_hi, 4).unwrap();
        let plain = run_stream(
            &SimConfig {
                cutoff: k_hi,
                ..cfg
            },
            4,
        )
        .unwrap();
        assert_eq!(out.hi, plain.snapshots);
    }

    #[test]
    fn distance_bounded_by_second_moments() {
        let out = coupled_run(
            &config(),
            CutoffLevel::new(1.0).unwrap(),
            CutoffLevel::new(16.0).unwrap(),
        )
        .unwrap();
        assert!(out.lo_events < out.events);
        for ((d, h), l) in out.distance.iter().zip(&out.hi).zip(&out.lo) {
            let m2 = |s: &ParticleState| {
                s.velocities.iter().map(|v| v.norm_sq()).sum::<f64>() / s.len() as f64
            };
            assert!(*d <= 2.0 * (m2(h) + m2(l)) + 1e-12);
        }
        assert!(*out.distance.last().unwrap() > 0.0);
    }

    #[test]
    fn ordering_violation_is_config_error() {
        let r = coupled_run(
            &config(),
            CutoffLevel::new(4.0).unwrap(),
            CutoffLevel::new(2.0).unwrap(),
        );
        assert!(matches!(r, Err(Error::Config(_))));
    }
}
