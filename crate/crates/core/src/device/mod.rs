//! Device configuration: the full parameter set of a multiplexed readout
//! device, loaded from unit-suffixed JSON with pointer-precise errors.
//!
//! Frequencies in the file are cyclic (Hz); internal angular quantities
//! (`omega_*`, `kappa`, `chi`, stray shifts) are converted to rad/s on load
//! and back to Hz on save. `canonical_json` emits the file schema with
//! sorted keys and SI numbers, so `save(load(x))` is a fixed point.

mod quantity;

pub use quantity::{parse_quantity, Dimension};

use crate::cavity::{CouplingNetwork, ReentrantCavityParams, ResonatorCircuit};
use crate::readout::{NoiseModel, QubitParams, ReadoutPulse, ResonatorParams};
use serde_json::{json, Map, Value};
use std::f64::consts::TAU;
use std::path::Path;
use thiserror::Error;

/// Configuration error with a JSON-pointer location.
#[derive(Debug, Clone, Error)]
#[error("config error at {pointer}: {message}")]
pub struct ConfigError {
    pub pointer: String,
    pub message: String,
}

pub const SCHEMA_VERSION: u64 = 1;

/// Default device file shipped with the repository.
pub const DEFAULT_DEVICE_JSON: &str =
    include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/../../device.json"));

#[derive(Debug, Clone, PartialEq)]
pub struct PulseSettings {
    /// Total pulse duration, s.
    pub duration: f64,
    /// Gaussian edge duration, s.
    pub edge: f64,
    /// Carrier offset from each resonator frequency, Hz.
    pub carrier_detuning_hz: f64,
    /// Per-qubit drive rate at the single-shot operating point, rad/s.
    pub amplitudes: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSettings {
    /// Per-qubit per-quadrature noise standard deviation on integrated s.
    pub sigma_s: Vec<f64>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeraldSettings {
    /// Delay between the herald pulse and the measurement sequence, s.
    pub delay: f64,
    /// Per-qubit re-excitation rate during the delay, 1/s.
    pub re_excitation_rate: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EchoSettings {
    /// Full echo interval (first pi/2 to final pi/2), s.
    pub interval: f64,
}

/// Everything needed to simulate the device.
#[derive(Debug, Clone, PartialEq)]
pub struct DeviceConfig {
    pub seed: u64,
    pub qubits: Vec<QubitParams>,
    pub resonators: Vec<ResonatorParams>,
    pub cavity: ReentrantCavityParams,
    pub coupling: CouplingNetwork,
    pub resonator_circuit: ResonatorCircuit,
    pub pulse: PulseSettings,
    pub noise: NoiseSettings,
    pub herald: HeraldSettings,
    pub echo: EchoSettings,
    /// Stray dispersive shifts chi[i][j] of qubit i from resonator j, rad/s.
    /// Diagonal entries are ignored (the own-resonator shift lives in
    /// `resonators`). Zero when absent from the file.
    pub stray_chi: Vec<Vec<f64>>,
}

impl DeviceConfig {
    pub fn qubit_count(&self) -> usize {
        self.qubits.len()
    }

    /// Readout pulse of qubit `i` at the single-shot operating point.
    pub fn pulse_for(&self, i: usize) -> ReadoutPulse {
        ReadoutPulse {
            carrier_hz: self.resonators[i].omega_r / TAU + self.pulse.carrier_detuning_hz,
            xi: 1.0,
            duration: self.pulse.duration,
            edge: self.pulse.edge,
            amplitude: self.pulse.amplitudes[i],
        }
    }

    pub fn noise_model(&self, i: usize) -> NoiseModel {
        NoiseModel { sigma_s: self.noise.sigma_s[i], seed: self.noise.seed }
    }

    /// Stray shift of qubit `i` from photons in resonator `j`, rad/s.
    pub fn stray_chi(&self, i: usize, j: usize) -> f64 {
        self.stray_chi.get(i).and_then(|row| row.get(j)).copied().unwrap_or(0.0)
    }

    pub fn default_device() -> Self {
        Self::from_json_str(DEFAULT_DEVICE_JSON)
            .expect("the shipped device.json must always load")
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
            pointer: "/".into(),
            message: format!("cannot read {}: {e}", path.display()),
        })?;
        Self::from_json_str(&text)
    }

    pub fn from_json_str(text: &str) -> Result<Self, ConfigError> {
        let value: Value = serde_json::from_str(text).map_err(|e| ConfigError {
            pointer: "/".into(),
            message: format!("invalid JSON: {e}"),
        })?;
        Self::from_value(&value)
    }

    pub fn from_value(root: &Value) -> Result<Self, ConfigError> {
        let root = Ctx { value: root, pointer: String::new() };
        let version = root.field("schema_version")?.u64()?;
        if version != SCHEMA_VERSION {
            return Err(root.field("schema_version")?.error(format!(
                "unsupported schema version {version} (supported: {SCHEMA_VERSION})"
            )));
        }
        let seed = root.field("seed")?.u64()?;

        let mut qubits = Vec::new();
        for q in root.field("qubits")?.elements()? {
            qubits.push(QubitParams {
                omega_q: TAU * q.field("frequency")?.quantity(Dimension::Frequency)?,
                alpha: TAU * q.field("anharmonicity")?.quantity(Dimension::Frequency)?,
                t1: q.field("t1")?.quantity(Dimension::Time)?,
                t2_star: q.field("t2_star")?.quantity(Dimension::Time)?,
                t2_echo: q.field("t2_echo")?.quantity(Dimension::Time)?,
                p_th: q.field("p_th")?.quantity(Dimension::Dimensionless)?,
            });
            if let Err(e) = qubits.last().unwrap().validate() {
                return Err(q.error(e.to_string()));
            }
        }

        let mut resonators = Vec::new();
        for r in root.field("resonators")?.elements()? {
            let params = ResonatorParams {
                omega_r: TAU * r.field("frequency")?.quantity(Dimension::Frequency)?,
                kappa: TAU * r.field("kappa")?.quantity(Dimension::Frequency)?,
                kappa_e: TAU * r.field("kappa_e")?.quantity(Dimension::Frequency)?,
                chi: TAU * r.field("chi")?.quantity(Dimension::Frequency)?,
            };
            if let Err(e) = params.validate() {
                return Err(r.error(e.to_string()));
            }
            resonators.push(params);
        }

        let cav = root.field("cavity")?;
        let cavity = ReentrantCavityParams {
            length: cav.field("length")?.quantity(Dimension::Length)?,
            gap: cav.field("gap")?.quantity(Dimension::Length)?,
            width: cav.field("width")?.quantity(Dimension::Length)?,
            enclosure: cav.field("enclosure")?.quantity(Dimension::Length)?,
            feed_offset: cav.field("feed_offset")?.quantity(Dimension::Length)?,
            pin_gap: cav.field("pin_gap")?.quantity(Dimension::Length)?,
            c_shunt: cav.field("c_shunt")?.quantity(Dimension::Capacitance)?,
            pin_radius: cav.field("pin_radius")?.quantity(Dimension::Length)?,
            pin_count: cav.field("pin_count")?.u64()? as usize,
            length_scale: cav.field("length_scale")?.quantity(Dimension::Dimensionless)?,
            r_internal: None,
        };
        if let Err(e) = cavity.validate() {
            return Err(cav.error(e.to_string()));
        }

        let cpl = root.field("coupling")?;
        let n = qubits.len();
        let coupling = CouplingNetwork {
            c_in: cpl.field("c_in")?.quantity(Dimension::Capacitance)?,
            c_in_mirrored: cpl.field("c_in_mirrored")?.quantity(Dimension::Capacitance)?,
            c_shunt: cavity.c_shunt,
            c_resonator: cpl.field("c_resonator")?.quantities(Dimension::Capacitance, n)?,
            c_qubit: cpl.field("c_qubit")?.quantities(Dimension::Capacitance, n)?,
            c_drive: cpl.field("c_drive")?.quantities(Dimension::Capacitance, n)?,
            c_direct: cpl.field("c_direct")?.quantities(Dimension::Capacitance, n)?,
            c_x1: cpl.field("c_x1")?.quantity(Dimension::Capacitance)?,
            c_xq: cpl.field("c_xq")?.quantity(Dimension::Capacitance)?,
            x_reference_hz: cpl.field("x_reference")?.quantity(Dimension::Frequency)?,
        };
        if let Err(e) = coupling.validate() {
            return Err(cpl.error(e.to_string()));
        }

        let circ = root.field("resonator_circuit")?;
        let resonator_circuit = ResonatorCircuit {
            inductance: circ.field("inductance")?.quantity(Dimension::Inductance)?,
            c_shunt: circ.field("c_shunt")?.quantities(Dimension::Capacitance, n)?,
        };
        if let Err(e) = resonator_circuit.validate() {
            return Err(circ.error(e.to_string()));
        }

        let pl = root.field("pulse")?;
        let pulse = PulseSettings {
            duration: pl.field("duration")?.quantity(Dimension::Time)?,
            edge: pl.field("edge")?.quantity(Dimension::Time)?,
            carrier_detuning_hz: pl.field("carrier_detuning")?.quantity(Dimension::Frequency)?,
            amplitudes: pl.field("amplitudes")?.quantities(Dimension::Rate, n)?,
        };

        let ns = root.field("noise")?;
        let noise = NoiseSettings {
            sigma_s: ns.field("sigma_s")?.quantities(Dimension::Dimensionless, n)?,
            seed: ns.field("seed")?.u64()?,
        };
        for (i, &sigma) in noise.sigma_s.iter().enumerate() {
            if !(sigma > 0.0) {
                return Err(ConfigError {
                    pointer: format!("/noise/sigma_s/{i}"),
                    message: format!("sigma_s must be positive, got {sigma}"),
                });
            }
        }

        let hd = root.field("herald")?;
        let herald = HeraldSettings {
            delay: hd.field("delay")?.quantity(Dimension::Time)?,
            re_excitation_rate: hd.field("re_excitation_rate")?.quantities(Dimension::Rate, n)?,
        };
        if herald.delay < 0.0 {
            return Err(ConfigError {
                pointer: "/herald/delay".into(),
                message: "delay must be non-negative".into(),
            });
        }

        let echo = EchoSettings {
            interval: root.field("echo")?.field("interval")?.quantity(Dimension::Time)?,
        };

        let stray_chi = match root.optional("stray_chi") {
            None => vec![vec![0.0; n]; n],
            Some(m) => {
                let rows = m.elements()?;
                if rows.len() != n {
                    return Err(m.error(format!("expected {n} rows, got {}", rows.len())));
                }
                rows.iter()
                    .map(|row| {
                        row.quantities(Dimension::Frequency, n)
                            .map(|r| r.into_iter().map(|x| TAU * x).collect())
                    })
                    .collect::<Result<Vec<Vec<f64>>, _>>()?
            }
        };

        let config = DeviceConfig {
            seed,
            qubits,
            resonators,
            cavity,
            coupling,
            resonator_circuit,
            pulse,
            noise,
            herald,
            echo,
            stray_chi,
        };
        config.validate()?;
        Ok(config)
    }

    /// Cross-field invariants. Returns soft warnings (e.g. coherence-time
    /// combinations that measured devices can violate within error bars).
    pub fn validate(&self) -> Result<Vec<String>, ConfigError> {
        let n = self.qubits.len();
        if n == 0 {
            return Err(ConfigError {
                pointer: "/qubits".into(),
                message: "need at least one qubit".into(),
            });
        }
        if self.resonators.len() != n {
            return Err(ConfigError {
                pointer: "/resonators".into(),
                message: format!(
                    "qubit count {n} and resonator count {} must match",
                    self.resonators.len()
                ),
            });
        }
        for w in self.resonators.windows(2) {
            if !(w[0].omega_r < w[1].omega_r) {
                return Err(ConfigError {
                    pointer: "/resonators".into(),
                    message: "resonator frequencies must be strictly increasing".into(),
                });
            }
        }
        let pulse0 = self.pulse_for(0);
        if let Err(e) = pulse0.validate() {
            return Err(ConfigError { pointer: "/pulse".into(), message: e.to_string() });
        }
        let mut warnings = Vec::new();
        for (i, q) in self.qubits.iter().enumerate() {
            let ws = q.validate().map_err(|e| ConfigError {
                pointer: format!("/qubits/{i}"),
                message: e.to_string(),
            })?;
            warnings.extend(ws.into_iter().map(|w| format!("qubit {}: {w}", i + 1)));
        }
        Ok(warnings)
    }

    /// The file-schema JSON value (Hz frequencies, SI numbers).
    pub fn to_file_value(&self) -> Value {
        let qubits: Vec<Value> = self
            .qubits
            .iter()
            .map(|q| {
                json!({
                    "frequency": q.omega_q / TAU,
                    "anharmonicity": q.alpha / TAU,
                    "t1": q.t1,
                    "t2_star": q.t2_star,
                    "t2_echo": q.t2_echo,
                    "p_th": q.p_th,
                })
            })
            .collect();
        let resonators: Vec<Value> = self
            .resonators
            .iter()
            .map(|r| {
                json!({
                    "frequency": r.omega_r / TAU,
                    "kappa": r.kappa / TAU,
                    "kappa_e": r.kappa_e / TAU,
                    "chi": r.chi / TAU,
                })
            })
            .collect();
        json!({
            "schema_version": SCHEMA_VERSION,
            "seed": self.seed,
            "qubits": qubits,
            "resonators": resonators,
            "cavity": {
                "length": self.cavity.length,
                "gap": self.cavity.gap,
                "width": self.cavity.width,
                "enclosure": self.cavity.enclosure,
                "feed_offset": self.cavity.feed_offset,
                "pin_gap": self.cavity.pin_gap,
                "pin_radius": self.cavity.pin_radius,
                "pin_count": self.cavity.pin_count,
                "c_shunt": self.cavity.c_shunt,
                "length_scale": self.cavity.length_scale,
            },
            "coupling": {
                "c_in": self.coupling.c_in,
                "c_in_mirrored": self.coupling.c_in_mirrored,
                "c_resonator": self.coupling.c_resonator,
                "c_qubit": self.coupling.c_qubit,
                "c_drive": self.coupling.c_drive,
                "c_direct": self.coupling.c_direct,
                "c_x1": self.coupling.c_x1,
                "c_xq": self.coupling.c_xq,
                "x_reference": self.coupling.x_reference_hz,
            },
            "resonator_circuit": {
                "inductance": self.resonator_circuit.inductance,
                "c_shunt": self.resonator_circuit.c_shunt,
            },
            "pulse": {
                "duration": self.pulse.duration,
                "edge": self.pulse.edge,
                "carrier_detuning": self.pulse.carrier_detuning_hz,
                "amplitudes": self.pulse.amplitudes,
            },
            "noise": {
                "sigma_s": self.noise.sigma_s,
                "seed": self.noise.seed,
            },
            "herald": {
                "delay": self.herald.delay,
                "re_excitation_rate": self.herald.re_excitation_rate,
            },
            "echo": { "interval": self.echo.interval },
            "stray_chi": self.stray_chi
                .iter()
                .map(|row| row.iter().map(|&x| x / TAU).collect::<Vec<f64>>())
                .collect::<Vec<_>>(),
        })
    }

    /// Canonical serialization: the file schema with recursively sorted keys
    /// and SI numbers. `canonical_json(load(x))` is a fixed point, and the
    /// run-manifest config hash is computed over this form.
    pub fn canonical_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(&sort_keys(self.to_file_value()))
            .expect("canonical serialization cannot fail");
        text.push('\n');
        text
    }
}

fn sort_keys(value: Value) -> Value {
    match value {
        Value::Object(map) => {
            let mut entries: Vec<(String, Value)> = map.into_iter().collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            let mut sorted = Map::new();
            for (k, v) in entries {
                sorted.insert(k, sort_keys(v));
            }
            Value::Object(sorted)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(sort_keys).collect()),
        other => other,
    }
}

/// A JSON value plus its pointer, for precise error locations.
struct Ctx<'a> {
    value: &'a Value,
    pointer: String,
}

impl<'a> Ctx<'a> {
    fn error(&self, message: String) -> ConfigError {
        ConfigError {
            pointer: if self.pointer.is_empty() { "/".into() } else { self.pointer.clone() },
            message,
        }
    }

    fn field(&self, name: &str) -> Result<Ctx<'a>, ConfigError> {
        let pointer = format!("{}/{name}", self.pointer);
        match self.value.get(name) {
            Some(value) => Ok(Ctx { value, pointer }),
            None => Err(ConfigError { pointer, message: "missing field".into() }),
        }
    }

    fn optional(&self, name: &str) -> Option<Ctx<'a>> {
        self.value.get(name).map(|value| Ctx {
            value,
            pointer: format!("{}/{name}", self.pointer),
        })
    }

    fn elements(&self) -> Result<Vec<Ctx<'a>>, ConfigError> {
        match self.value.as_array() {
            Some(items) => Ok(items
                .iter()
                .enumerate()
                .map(|(i, value)| Ctx { value, pointer: format!("{}/{i}", self.pointer) })
                .collect()),
            None => Err(self.error("expected an array".into())),
        }
    }

    fn quantity(&self, dim: Dimension) -> Result<f64, ConfigError> {
        parse_quantity(self.value, dim, &self.pointer)
    }

    fn quantities(&self, dim: Dimension, expected: usize) -> Result<Vec<f64>, ConfigError> {
        let items = self.elements()?;
        if items.len() != expected {
            return Err(self.error(format!("expected {expected} entries, got {}", items.len())));
        }
        items.iter().map(|c| c.quantity(dim)).collect()
    }

    fn u64(&self) -> Result<u64, ConfigError> {
        self.value
            .as_u64()
            .ok_or_else(|| self.error(format!("expected an unsigned integer, got {}", self.value)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_device_loads_with_published_frequencies() {
        let device = DeviceConfig::default_device();
        let freqs: Vec<f64> = device.resonators.iter().map(|r| r.omega_r / TAU / 1e9).collect();
        let expected = [9.871, 10.007, 10.139, 10.281];
        for (f, e) in freqs.iter().zip(expected) {
            assert!((f - e).abs() < 1e-9, "resonator at {f} GHz, expected {e}");
        }
        assert_eq!(device.qubit_count(), 4);
        let warnings = device.validate().unwrap();
        assert!(warnings.is_empty(), "unexpected warnings: {warnings:?}");
    }

    #[test]
    fn missing_kappa_points_at_the_field() {
        let mut value: Value = serde_json::from_str(DEFAULT_DEVICE_JSON).unwrap();
        value["resonators"][0].as_object_mut().unwrap().remove("kappa");
        let err = DeviceConfig::from_value(&value).unwrap_err();
        assert_eq!(err.pointer, "/resonators/0/kappa");
    }

    #[test]
    fn kappa_e_above_kappa_rejected() {
        let mut value: Value = serde_json::from_str(DEFAULT_DEVICE_JSON).unwrap();
        value["resonators"][0]["kappa_e"] = json!("5.0 MHz");
        let err = DeviceConfig::from_value(&value).unwrap_err();
        assert_eq!(err.pointer, "/resonators/0");
        assert!(err.message.contains("kappa_e"));
    }

    #[test]
    fn non_increasing_resonators_rejected() {
        let mut value: Value = serde_json::from_str(DEFAULT_DEVICE_JSON).unwrap();
        value["resonators"][1]["frequency"] = json!("9.871 GHz");
        let err = DeviceConfig::from_value(&value).unwrap_err();
        assert!(err.message.contains("strictly increasing"));
    }

    #[test]
    fn canonical_json_is_a_fixed_point() {
        let device = DeviceConfig::default_device();
        let canon = device.canonical_json();
        let reloaded = DeviceConfig::from_json_str(&canon).unwrap();
        assert_eq!(reloaded.canonical_json(), canon);
        assert_eq!(reloaded, device);
    }
}
