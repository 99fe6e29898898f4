//! Monte Carlo simulation of multiplexed single-shot dispersive readout.
//!
//! Pointer-state trajectories follow the driven-cavity equation in the
//! frame of each readout carrier; relaxation during the measurement enters
//! as a single exponential jump time per shot, and integrated signals pick
//! up additive complex Gaussian noise. Shots are deterministic given the
//! seed schedule (one RNG substream per shot and qubit), so streams are
//! bit-identical regardless of worker count.

mod herald;
mod ode;
mod params;
mod record;
mod rng;
mod shot;

pub use herald::{herald_and_delay, HeraldReport};
pub use ode::{cavity_response, steady_state_amplitude, CavityTrajectory, QubitState};
pub use params::{NoiseModel, QubitParams, ReadoutPulse, ResonatorParams};
pub use record::{read_shot_records, write_shot_csv, write_shot_records, ShotRecord};
pub use rng::ShotRng;
pub use shot::{integrate_shot, simulate_shot, ShotContext};

mod multiplex;
pub use multiplex::{multiplexed_run, MultiplexOptions, MultiplexedRun};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ReadoutError {
    #[error("invalid readout parameters: {0}")]
    InvalidParams(String),
    #[error("integrator fault: |alpha| grew on a passive drive (step {step})")]
    IntegratorFault { step: usize },
    #[error("shot record i/o: {0}")]
    RecordIo(String),
}
