//! Cavity geometry and coupling-network parameters.

use super::CavityError;
use serde::{Deserialize, Serialize};

/// Free-space impedance, ohms.
pub const ETA_0: f64 = 376.730_313_412;

/// Geometry of the capacitively loaded quarter-wave re-entrant cavity.
///
/// The transmission-line equivalent uses a parallel-plate impedance for the
/// re-entrant cross-section, `Z0 = ETA_0 * gap / width`, and the vacuum phase
/// velocity. The enclosure dimension controls internal loss in the physical
/// device; the equivalent circuit absorbs internal loss into an optional
/// shunt resistor instead (`r_internal`, lossless when absent).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReentrantCavityParams {
    /// Cavity length, m.
    pub length: f64,
    /// Re-entrant gap dimension, m.
    pub gap: f64,
    /// Cavity width, m.
    pub width: f64,
    /// Enclosure dimension, m.
    pub enclosure: f64,
    /// Feed x-position from the shorted end, m.
    pub feed_offset: f64,
    /// Pin-to-resonator gap, m.
    pub pin_gap: f64,
    /// Loading capacitance to ground at the open end, F.
    pub c_shunt: f64,
    pub pin_radius: f64,
    pub pin_count: usize,
    /// Ratio of effective electrical length to geometric length. Calibrated;
    /// absorbs the 3D fringing fields that the TEM line equivalent misses.
    #[serde(default = "default_length_scale")]
    pub length_scale: f64,
    /// Optional loss resistor at the open end, ohms.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_internal: Option<f64>,
}

fn default_length_scale() -> f64 {
    1.0
}

impl ReentrantCavityParams {
    /// Characteristic impedance of the line equivalent, ohms.
    pub fn line_impedance(&self) -> f64 {
        ETA_0 * self.gap / self.width
    }

    /// Phase velocity of the line equivalent, m/s (vacuum-filled cavity).
    pub fn phase_velocity(&self) -> f64 {
        299_792_458.0
    }

    /// Effective electrical length of the line equivalent, m.
    pub fn effective_length(&self) -> f64 {
        self.length * self.length_scale
    }

    /// Electrical length of the cavity at `freq_hz`, radians.
    pub fn electrical_length(&self, freq_hz: f64) -> f64 {
        std::f64::consts::TAU * freq_hz * self.effective_length() / self.phase_velocity()
    }

    pub fn validate(&self) -> Result<(), CavityError> {
        let lengths = [
            ("length", self.length),
            ("gap", self.gap),
            ("width", self.width),
            ("enclosure", self.enclosure),
            ("feed_offset", self.feed_offset),
            ("pin_gap", self.pin_gap),
            ("pin_radius", self.pin_radius),
        ];
        for (name, v) in lengths {
            if !(v > 0.0) {
                return Err(CavityError::InvalidParams(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        if !(self.c_shunt > 0.0) {
            return Err(CavityError::InvalidParams(format!(
                "c_shunt must be positive, got {}",
                self.c_shunt
            )));
        }
        if self.pin_count < 1 {
            return Err(CavityError::InvalidParams("pin_count must be >= 1".into()));
        }
        if !(self.length_scale > 0.0) {
            return Err(CavityError::InvalidParams(format!(
                "length_scale must be positive, got {}",
                self.length_scale
            )));
        }
        if self.pin_gap >= self.gap {
            return Err(CavityError::InvalidParams(format!(
                "pin gap {} must be smaller than the re-entrant gap {}",
                self.pin_gap, self.gap
            )));
        }
        if let Some(r) = self.r_internal {
            if !(r > 0.0) {
                return Err(CavityError::InvalidParams(format!(
                    "r_internal must be positive, got {r}"
                )));
            }
        }
        Ok(())
    }
}

/// Capacitances of the coupling network, in farads.
///
/// `c_x1` (feed-line pin to cavity) and `c_xq` (qubit island to cavity) are
/// effective signed values; negative couplings are realized in the netlist
/// as a series L-C branch that matches the prescribed admittance at the
/// notch reference frequency (see [`super::build`]).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CouplingNetwork {
    /// Feed coupling of the single-port device, F.
    pub c_in: f64,
    /// Per-side feed coupling of the mirrored two-port variant, F.
    pub c_in_mirrored: f64,
    /// Cavity loading capacitance (same value as the cavity geometry), F.
    pub c_shunt: f64,
    /// Pin couplings, cavity to readout resonator, F.
    pub c_resonator: Vec<f64>,
    /// Qubit island to readout resonator couplings, F.
    pub c_qubit: Vec<f64>,
    /// Drive-line couplings, control pin to qubit island, F.
    pub c_drive: Vec<f64>,
    /// Direct resonator-to-port couplings of the unfiltered variant, F.
    pub c_direct: Vec<f64>,
    /// Cross coupling, drive pin to cavity, F (signed effective value).
    pub c_x1: f64,
    /// Cross coupling, qubit island to cavity, F (signed effective value).
    pub c_xq: f64,
    /// Frequency at which negative cross couplings are matched by their
    /// series L-C realization, Hz.
    pub x_reference_hz: f64,
}

impl CouplingNetwork {
    pub fn qubit_count(&self) -> usize {
        self.c_resonator.len()
    }

    pub fn validate(&self) -> Result<(), CavityError> {
        let positive = |name: &str, vs: &[f64]| {
            for (i, &v) in vs.iter().enumerate() {
                if !(v > 0.0) {
                    return Err(CavityError::InvalidParams(format!(
                        "{name}[{i}] must be positive, got {v}"
                    )));
                }
            }
            Ok(())
        };
        if !(self.c_in > 0.0 && self.c_in_mirrored > 0.0 && self.c_shunt > 0.0) {
            return Err(CavityError::InvalidParams(
                "c_in, c_in_mirrored and c_shunt must be positive".into(),
            ));
        }
        positive("c_resonator", &self.c_resonator)?;
        positive("c_qubit", &self.c_qubit)?;
        positive("c_drive", &self.c_drive)?;
        positive("c_direct", &self.c_direct)?;
        let n = self.qubit_count();
        if self.c_qubit.len() != n || self.c_drive.len() != n || self.c_direct.len() != n {
            return Err(CavityError::InvalidParams(
                "coupling arrays must all have the same length".into(),
            ));
        }
        // signed cross couplings: any finite value is allowed
        if !(self.c_x1.is_finite() && self.c_xq.is_finite()) {
            return Err(CavityError::InvalidParams("cross couplings must be finite".into()));
        }
        if !(self.x_reference_hz > 0.0) {
            return Err(CavityError::InvalidParams(
                "cross-coupling reference frequency must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Lumped equivalents of the on-chip readout resonators: a shared inductance
/// (fixing the impedance level of the LC) and one calibrated shunt
/// capacitance per resonator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResonatorCircuit {
    /// Resonator inductance, H.
    pub inductance: f64,
    /// Per-resonator shunt capacitance, F.
    pub c_shunt: Vec<f64>,
}

impl ResonatorCircuit {
    /// Bare (unloaded) resonance of resonator `i`, Hz.
    pub fn bare_frequency_hz(&self, i: usize) -> f64 {
        1.0 / (std::f64::consts::TAU * (self.inductance * self.c_shunt[i]).sqrt())
    }

    pub fn validate(&self) -> Result<(), CavityError> {
        if !(self.inductance > 0.0) {
            return Err(CavityError::InvalidParams("resonator inductance must be positive".into()));
        }
        for (i, &c) in self.c_shunt.iter().enumerate() {
            if !(c > 0.0) {
                return Err(CavityError::InvalidParams(format!(
                    "resonator c_shunt[{i}] must be positive, got {c}"
                )));
            }
        }
        Ok(())
    }
}

/// Which environment the qubit sees in the admittance view.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FilterConfiguration {
    /// Readout resonators directly coupled to the external port.
    Unfiltered,
    /// Cavity filter inserted, no cross-coupling paths.
    FilteredNoInterference,
    /// Cavity filter plus the interferometric cross couplings.
    FilteredWithInterference,
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn cavity_fixture() -> ReentrantCavityParams {
        ReentrantCavityParams {
            length: 5.5e-3,
            gap: 2e-3,
            width: 4e-3,
            enclosure: 8e-3,
            feed_offset: 4.75e-3,
            pin_gap: 0.35e-3,
            c_shunt: 40e-15,
            pin_radius: 0.25e-3,
            pin_count: 4,
            length_scale: 1.0,
            r_internal: None,
        }
    }

    #[test]
    fn parallel_plate_impedance() {
        let p = cavity_fixture();
        // gap/width = 0.5: half the free-space impedance
        assert!((p.line_impedance() - 188.365).abs() < 1e-2);
    }

    #[test]
    fn pin_gap_must_fit_in_reentrant_gap() {
        let mut p = cavity_fixture();
        p.pin_gap = 3e-3;
        assert!(p.validate().is_err());
    }
}
