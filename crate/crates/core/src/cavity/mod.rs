//! Equivalent circuits for the re-entrant cavity multiplexer.
//!
//! The physical filter is a capacitively loaded quarter-wave cavity whose
//! pins couple to on-chip readout resonators. This module builds netlists
//! for the device in its measurement configurations, solves the loaded-stub
//! resonance condition, calibrates element values against the published
//! scalar targets, and synthesizes the interferometric notch couplings.

mod build;
mod calibrate;
mod notch;
mod params;

pub use build::{
    build_configuration, build_junction_view, build_one_port, build_two_port, cavity_equivalent,
    resonance_frequency, CavityFragment,
};
pub use calibrate::{
    build_unfiltered_one_port, calibrate_device, masked_delay_peak, measure_filter_q_ext,
    measure_resonator, passband_metrics, CalibrationReport, FilterTargets, PassbandMetrics,
};
pub use notch::{place_notches, NotchOutcome, NotchTunables};
pub use params::{
    CouplingNetwork, FilterConfiguration, ReentrantCavityParams, ResonatorCircuit, ETA_0,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CavityError {
    #[error("invalid cavity parameters: {0}")]
    InvalidParams(String),
    #[error("no resonance below the half-wave frequency {0} Hz")]
    NoResonance(f64),
    #[error(
        "notch targets not reached: best objective {best_objective:.3e} above \
         threshold {threshold:.3e} (best c_x1 = {c_x1:.3e} F, c_xq = {c_xq:.3e} F)"
    )]
    InfeasibleNotch { best_objective: f64, threshold: f64, c_x1: f64, c_xq: f64 },
    #[error(transparent)]
    Network(#[from] crate::network::NetworkError),
    #[error(transparent)]
    Optimize(#[from] crate::optimize::OptimizeError),
}
