//! Circuit elements and their admittance stamps.

use super::NetworkError;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A linear AC element between two nodes. Node 0 is ground.
///
/// Transmission lines are lossless; their electrical length is specified at
/// a reference frequency and scales linearly with frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Element {
    Capacitor {
        farads: f64,
        nodes: (usize, usize),
    },
    Inductor {
        henries: f64,
        nodes: (usize, usize),
    },
    Resistor {
        ohms: f64,
        nodes: (usize, usize),
    },
    Tline {
        z0_ohms: f64,
        electrical_length_rad: f64,
        reference_hz: f64,
        nodes: (usize, usize),
    },
}

impl Element {
    pub fn nodes(&self) -> (usize, usize) {
        match *self {
            Element::Capacitor { nodes, .. }
            | Element::Inductor { nodes, .. }
            | Element::Resistor { nodes, .. }
            | Element::Tline { nodes, .. } => nodes,
        }
    }

    pub fn is_lossless(&self) -> bool {
        !matches!(self, Element::Resistor { .. })
    }

    pub fn validate(&self) -> Result<(), NetworkError> {
        let bad = |what: &str, v: f64| {
            Err(NetworkError::InvalidNetlist(format!(
                "{what} must be strictly positive, got {v}"
            )))
        };
        match *self {
            Element::Capacitor { farads, .. } if farads <= 0.0 => bad("capacitance", farads),
            Element::Inductor { henries, .. } if henries <= 0.0 => bad("inductance", henries),
            Element::Resistor { ohms, .. } if ohms <= 0.0 => bad("resistance", ohms),
            Element::Tline { z0_ohms, electrical_length_rad, reference_hz, .. }
                if z0_ohms <= 0.0 || electrical_length_rad <= 0.0 || reference_hz <= 0.0 =>
            {
                Err(NetworkError::InvalidNetlist(format!(
                    "tline parameters must be strictly positive, got Z0 = {z0_ohms}, \
                     length = {electrical_length_rad} rad, reference = {reference_hz} Hz"
                )))
            }
            _ => Ok(()),
        }
    }

    /// The 2x2 admittance matrix of the element at angular frequency `omega`,
    /// ordered (node a, node b).
    pub fn admittance(&self, omega: f64) -> Result<[[Complex64; 2]; 2], NetworkError> {
        if omega <= 0.0 {
            return Err(NetworkError::InvalidFrequency(omega / std::f64::consts::TAU));
        }
        let j = Complex64::new(0.0, 1.0);
        match *self {
            Element::Capacitor { farads, .. } => Ok(branch(j * omega * farads)),
            Element::Inductor { henries, .. } => Ok(branch(1.0 / (j * omega * henries))),
            Element::Resistor { ohms, .. } => Ok(branch(Complex64::new(1.0 / ohms, 0.0))),
            Element::Tline { z0_ohms, electrical_length_rad, reference_hz, .. } => {
                let theta = electrical_length_rad * omega / (std::f64::consts::TAU * reference_hz);
                let (sin, cos) = theta.sin_cos();
                if sin.abs() < 1e-12 {
                    return Err(NetworkError::SingularElement {
                        freq_hz: omega / std::f64::consts::TAU,
                    });
                }
                let y_mutual = j / (z0_ohms * sin);
                let y_self = -j * cos / (z0_ohms * sin);
                Ok([[y_self, y_mutual], [y_mutual, y_self]])
            }
        }
    }
}

fn branch(y: Complex64) -> [[Complex64; 2]; 2] {
    [[y, -y], [-y, y]]
}
