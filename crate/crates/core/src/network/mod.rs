//! Linear AC network engine.
//!
//! Circuits are described by a [`Netlist`] of two-terminal elements (plus
//! lossless transmission-line segments) over numbered nodes, node 0 being
//! ground. The engine assembles the complex node-admittance matrix at each
//! frequency, eliminates internal nodes by Schur complement, and derives
//! port quantities: S-parameters, input admittance, group delay, and the
//! Purcell T1 bound.

mod element;
mod netlist;
mod response;
mod solve;
mod touchstone;

pub use element::Element;
pub use netlist::{Netlist, NetlistBuilder, Port};
pub use response::{extract_linewidth, group_delay, purcell_t1_limit, PortResponse};
pub use solve::{assemble_admittance, input_admittance, port_admittance, s_parameters};
pub use touchstone::{write_touchstone, write_touchstone_csv};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors produced by the network engine.
#[derive(Debug, Error)]
pub enum NetworkError {
    #[error("invalid frequency {0} Hz: must be positive")]
    InvalidFrequency(f64),
    #[error("transmission line singular at {freq_hz} Hz: electrical length is a multiple of pi")]
    SingularElement { freq_hz: f64 },
    #[error("network ill-conditioned at {freq_hz} Hz")]
    IllConditioned { freq_hz: f64 },
    #[error("need at least two frequency points")]
    InsufficientData,
    #[error("environment admittance has negative real part ({0} S)")]
    NonPassiveInput(f64),
    #[error("group delay peak must be positive, got {0} s")]
    InvalidPeak(f64),
    #[error("invalid netlist: {0}")]
    InvalidNetlist(String),
    #[error("invalid sweep: {0}")]
    InvalidSweep(String),
}

/// Linear frequency sweep, inclusive of both endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrequencySweep {
    pub start_hz: f64,
    pub stop_hz: f64,
    pub points: usize,
}

impl FrequencySweep {
    pub fn new(start_hz: f64, stop_hz: f64, points: usize) -> Result<Self, NetworkError> {
        let sweep = Self { start_hz, stop_hz, points };
        sweep.validate()?;
        Ok(sweep)
    }

    pub fn validate(&self) -> Result<(), NetworkError> {
        if !(self.start_hz > 0.0 && self.start_hz < self.stop_hz) {
            return Err(NetworkError::InvalidSweep(format!(
                "need 0 < start < stop, got [{}, {}]",
                self.start_hz, self.stop_hz
            )));
        }
        if self.points < 2 {
            return Err(NetworkError::InvalidSweep(format!(
                "need at least 2 points, got {}",
                self.points
            )));
        }
        Ok(())
    }

    /// The sweep frequencies, linear in Hz.
    pub fn frequencies(&self) -> Vec<f64> {
        let step = (self.stop_hz - self.start_hz) / (self.points - 1) as f64;
        (0..self.points).map(|i| self.start_hz + step * i as f64).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_endpoints_inclusive() {
        let s = FrequencySweep::new(1e9, 2e9, 11).unwrap();
        let f = s.frequencies();
        assert_eq!(f.len(), 11);
        assert_eq!(f[0], 1e9);
        assert_eq!(f[10], 2e9);
    }

    #[test]
    fn sweep_rejects_degenerate_ranges() {
        assert!(FrequencySweep::new(0.0, 1e9, 10).is_err());
        assert!(FrequencySweep::new(2e9, 1e9, 10).is_err());
        assert!(FrequencySweep::new(1e9, 2e9, 1).is_err());
    }
}
