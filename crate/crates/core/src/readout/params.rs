//! Qubit, resonator, pulse, and noise parameters.

use super::ReadoutError;
use serde::{Deserialize, Serialize};

/// Transmon parameters. Angular frequencies are in rad/s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitParams {
    pub omega_q: f64,
    /// Anharmonicity, rad/s (negative for a transmon).
    pub alpha: f64,
    pub t1: f64,
    pub t2_star: f64,
    pub t2_echo: f64,
    /// Thermal excited-state population before heralding.
    pub p_th: f64,
}

impl QubitParams {
    /// Validates hard invariants; returns soft warnings (measured coherence
    /// values may violate `T2* <= 2 T1` within error bars, so that is not
    /// rejected).
    pub fn validate(&self) -> Result<Vec<String>, ReadoutError> {
        if !(self.omega_q > 0.0) {
            return Err(ReadoutError::InvalidParams("qubit frequency must be positive".into()));
        }
        if !(self.t1 > 0.0 && self.t2_star > 0.0 && self.t2_echo > 0.0) {
            return Err(ReadoutError::InvalidParams(
                "coherence times must be positive".into(),
            ));
        }
        if !(0.0..0.5).contains(&self.p_th) {
            return Err(ReadoutError::InvalidParams(format!(
                "thermal population must be in [0, 0.5), got {}",
                self.p_th
            )));
        }
        let mut warnings = Vec::new();
        if self.t2_star > 2.0 * self.t1 {
            warnings.push(format!(
                "T2* = {:.3e} s exceeds 2*T1 = {:.3e} s",
                self.t2_star,
                2.0 * self.t1
            ));
        }
        if self.t2_echo > 2.0 * self.t1 {
            warnings.push(format!(
                "T2E = {:.3e} s exceeds 2*T1 = {:.3e} s",
                self.t2_echo,
                2.0 * self.t1
            ));
        }
        Ok(warnings)
    }

    /// Total qubit shunt capacitance from the anharmonicity:
    /// `C = e^2 / (2 hbar |alpha|)` (transmon charging energy relation).
    pub fn shunt_capacitance(&self) -> f64 {
        const E_CHARGE: f64 = 1.602_176_634e-19;
        const HBAR: f64 = 1.054_571_817e-34;
        E_CHARGE * E_CHARGE / (2.0 * HBAR * self.alpha.abs())
    }

    /// Linearized junction inductance resonating the shunt capacitance at
    /// the qubit frequency.
    pub fn junction_inductance(&self) -> f64 {
        1.0 / (self.omega_q * self.omega_q * self.shunt_capacitance())
    }
}

/// Readout resonator parameters. Angular frequencies are in rad/s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResonatorParams {
    pub omega_r: f64,
    /// Total linewidth, rad/s.
    pub kappa: f64,
    /// External linewidth, rad/s.
    pub kappa_e: f64,
    /// Dispersive shift, rad/s, signed.
    pub chi: f64,
}

impl ResonatorParams {
    pub fn validate(&self) -> Result<(), ReadoutError> {
        if !(self.omega_r > 0.0) {
            return Err(ReadoutError::InvalidParams(
                "resonator frequency must be positive".into(),
            ));
        }
        if !(self.kappa_e > 0.0 && self.kappa_e <= self.kappa) {
            return Err(ReadoutError::InvalidParams(format!(
                "need 0 < kappa_e <= kappa, got kappa_e = {}, kappa = {}",
                self.kappa_e, self.kappa
            )));
        }
        if self.chi == 0.0 {
            return Err(ReadoutError::InvalidParams("dispersive shift must be nonzero".into()));
        }
        Ok(())
    }
}

/// Readout pulse: a square envelope with Gaussian edges.
///
/// The envelope is `amplitude * xi * shape(t)` where `shape` rises as a
/// truncated Gaussian over `edge` seconds (sigma = edge / 2.5), holds at 1,
/// and falls symmetrically. `amplitude` is the drive rate at the single-shot
/// operating point (rad/s, square-root-photon convention); `xi` rescales it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReadoutPulse {
    pub carrier_hz: f64,
    /// Relative amplitude; 1 is the single-shot operating point.
    pub xi: f64,
    /// Total pulse duration, s.
    pub duration: f64,
    /// Gaussian edge duration, s.
    pub edge: f64,
    /// Drive rate at xi = 1, rad/s.
    pub amplitude: f64,
}

impl ReadoutPulse {
    pub fn validate(&self) -> Result<(), ReadoutError> {
        if !(self.duration > 2.0 * self.edge) {
            return Err(ReadoutError::InvalidParams(format!(
                "pulse duration {} must exceed twice the edge {}",
                self.duration, self.edge
            )));
        }
        if !(self.xi >= 0.0) {
            return Err(ReadoutError::InvalidParams(format!(
                "pulse scale must be non-negative, got {}",
                self.xi
            )));
        }
        if !(self.edge > 0.0 && self.carrier_hz > 0.0 && self.amplitude >= 0.0) {
            return Err(ReadoutError::InvalidParams("invalid pulse parameters".into()));
        }
        Ok(())
    }

    /// Dimensionless envelope shape at time `t` from pulse start.
    pub fn shape(&self, t: f64) -> f64 {
        if t < 0.0 || t > self.duration {
            return 0.0;
        }
        let sigma = self.edge / 2.5;
        if t < self.edge {
            let d = t - self.edge;
            (-d * d / (2.0 * sigma * sigma)).exp()
        } else if t > self.duration - self.edge {
            let d = t - (self.duration - self.edge);
            (-d * d / (2.0 * sigma * sigma)).exp()
        } else {
            1.0
        }
    }

    /// Drive rate at time `t`, rad/s.
    pub fn envelope(&self, t: f64) -> f64 {
        self.amplitude * self.xi * self.shape(t)
    }

    pub fn with_xi(&self, xi: f64) -> Self {
        Self { xi, ..*self }
    }
}

/// Additive complex Gaussian noise on the integrated signal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    /// Per-quadrature standard deviation on the integrated signal.
    pub sigma_s: f64,
    pub seed: u64,
}

impl NoiseModel {
    pub fn validate(&self) -> Result<(), ReadoutError> {
        if !(self.sigma_s > 0.0) {
            return Err(ReadoutError::InvalidParams(format!(
                "sigma_s must be positive, got {}",
                self.sigma_s
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::TAU;

    #[test]
    fn shunt_capacitance_from_anharmonicity() {
        let q = QubitParams {
            omega_q: TAU * 6.034e9,
            alpha: -TAU * 221e6,
            t1: 49e-6,
            t2_star: 23e-6,
            t2_echo: 33e-6,
            p_th: 0.101,
        };
        let c = q.shunt_capacitance();
        assert_relative_eq!(c, 87.6e-15, max_relative = 5e-3);
        let lj = q.junction_inductance();
        assert_relative_eq!(1.0 / (lj * c).sqrt(), q.omega_q, max_relative = 1e-12);
    }

    #[test]
    fn t2_violation_warns_but_passes() {
        let q = QubitParams {
            omega_q: TAU * 6e9,
            alpha: -TAU * 220e6,
            t1: 10e-6,
            t2_star: 25e-6,
            t2_echo: 15e-6,
            p_th: 0.1,
        };
        let warnings = q.validate().unwrap();
        assert_eq!(warnings.len(), 1);
    }

    #[test]
    fn kappa_e_bounded_by_kappa() {
        let r = ResonatorParams {
            omega_r: TAU * 9.871e9,
            kappa: TAU * 0.8e6,
            kappa_e: TAU * 0.9e6,
            chi: -TAU * 1.7e6,
        };
        assert!(r.validate().is_err());
    }

    #[test]
    fn pulse_shape_is_flat_between_edges() {
        let p = ReadoutPulse {
            carrier_hz: 9.871e9,
            xi: 1.0,
            duration: 1e-6,
            edge: 15e-9,
            amplitude: 1.0,
        };
        p.validate().unwrap();
        assert_eq!(p.shape(-1e-9), 0.0);
        assert_eq!(p.shape(0.5e-6), 1.0);
        assert_eq!(p.shape(15e-9), 1.0);
        assert!(p.shape(0.0) < 0.05);
        assert_relative_eq!(p.shape(3e-9), p.shape(1e-6 - 3e-9), max_relative = 1e-12);
    }

    #[test]
    fn pulse_shorter_than_edges_rejected() {
        let p = ReadoutPulse {
            carrier_hz: 1e9,
            xi: 1.0,
            duration: 20e-9,
            edge: 15e-9,
            amplitude: 1.0,
        };
        assert!(p.validate().is_err());
    }
}
