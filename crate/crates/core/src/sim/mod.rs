//! Event-driven simulation of the truncated Nanbu system, with seeded replay
//! and coupling of two systems at different cutoffs.

mod coupled;
mod engine;
mod initial;
mod state;

pub use coupled::{coupled_run, coupled_run_stream, mean_square_distance, CoupledOutput};
pub use engine::{
    draw_event, run, run_from, run_stream, sample_initial, sample_initial_seeded, total_jump_rate,
    EventDraw, NanbuDynamics, RunLog, RunOutput,
};
pub use initial::{InitialLaw, MixtureComponent};
pub use state::{EventRecord, ParticleState, SimConfig};
