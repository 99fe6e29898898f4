//! Circuit-level simulator and analysis toolkit for frequency-multiplexed
//! dispersive readout of superconducting qubits through a re-entrant cavity
//! bandpass filter.
//!
//! The crate is organised around the stages of the readout chain:
//!
//! - [`network`]: linear AC network engine (nodal admittance assembly, Kron
//!   reduction, S-parameters, input admittance, group delay).
//! - [`cavity`]: equivalent circuits for the loaded quarter-wave cavity and
//!   the coupling network, filter calibration, and interferometric notch
//!   synthesis.
//! - [`readout`]: Monte Carlo single-shot readout simulation (pointer-state
//!   dynamics, relaxation jumps, heralding, integrated IQ signals).
//! - [`classify`]: Gaussian-mixture state assignment, fidelity accounting,
//!   and the 16-state assignment matrix.
//! - [`dephasing`]: echo simulation of measurement-induced dephasing and the
//!   qubit-resonator crosstalk map.
//! - [`device`]: typed device configuration with unit-suffixed JSON I/O.

// pub mod cavity;
// pub mod classify;
// pub mod dephasing;
// pub mod device;
pub mod network;
pub mod optimize;
// pub mod readout;

// pub use device::{DeviceConfig, QubitParams, ResonatorParams};
pub use network::{Element, FrequencySweep, Netlist, PortResponse};
