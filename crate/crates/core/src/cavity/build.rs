//! Netlist construction for the multiplexer in its measurement views.
//!
//! Topology per qubit cell `i`: the cavity node couples through a pin
//! capacitor `c_resonator[i]` to a lumped LC readout resonator, which couples
//! through `c_qubit[i]` to the qubit island (shunt capacitance derived from
//! the anharmonicity). The island is driven through `c_drive[i]` from a
//! 50-ohm control line. Unprobed qubits carry their linearized junction
//! inductance; the probed qubit's junction is replaced by a port. The
//! interferometric variant adds the two cross couplings of the probed cell:
//! `c_x1` from the drive pin to the cavity and `c_xq` from the island to the
//! cavity.

use super::{
    CavityError, CouplingNetwork, FilterConfiguration, ReentrantCavityParams, ResonatorCircuit,
};
use crate::network::{Netlist, NetlistBuilder};
use crate::optimize::bisect_root;
use crate::readout::QubitParams;
use std::f64::consts::{FRAC_PI_2, TAU};

/// Result of attaching the cavity equivalent circuit to a builder.
#[derive(Debug, Clone)]
pub struct CavityFragment {
    /// The re-entrant (open-end) node carrying the loading capacitor.
    pub cavity_node: usize,
    /// Far ends of the pin-tap capacitors, one per pin.
    pub pin_nodes: Vec<usize>,
}

/// Appends the cavity equivalent to `builder`: a shorted transmission-line
/// stub (parallel-plate impedance, quarter-wave reference frequency) loaded
/// by `c_shunt`, with one capacitive pin tap per entry of `pin_couplings`.
pub fn cavity_equivalent(
    params: &ReentrantCavityParams,
    pin_couplings: &[f64],
    builder: &mut NetlistBuilder,
) -> Result<CavityFragment, CavityError> {
    params.validate()?;
    let cavity_node = builder.node();
    let quarter_wave_hz = params.phase_velocity() / (4.0 * params.effective_length());
    builder.tline(params.line_impedance(), FRAC_PI_2, quarter_wave_hz, cavity_node, 0);
    builder.capacitor(params.c_shunt, cavity_node, 0);
    if let Some(r) = params.r_internal {
        builder.resistor(r, cavity_node, 0);
    }
    let mut pin_nodes = Vec::with_capacity(pin_couplings.len());
    for &c in pin_couplings {
        let pin = builder.node();
        builder.capacitor(c, cavity_node, pin);
        pin_nodes.push(pin);
    }
    Ok(CavityFragment { cavity_node, pin_nodes })
}

/// Smallest positive resonance of a shorted line of impedance `z` and length
/// `length` loaded by `c_shunt`: the root of
/// `tan(2 pi f length / velocity) = 1 / (2 pi f c_shunt z)`,
/// bracketed below the quarter-wave frequency and bisected to 1 Hz.
pub fn resonance_frequency(
    z: f64,
    length: f64,
    velocity: f64,
    c_shunt: f64,
) -> Result<f64, CavityError> {
    if !(z > 0.0 && length > 0.0 && velocity > 0.0 && c_shunt > 0.0) {
        return Err(CavityError::InvalidParams("resonance inputs must be positive".into()));
    }
    let f_quarter = velocity / (4.0 * length);
    let g = |f: f64| (TAU * f * length / velocity).tan() - 1.0 / (TAU * f * c_shunt * z);
    let lo = f_quarter * 1e-9;
    let hi = f_quarter * (1.0 - 1e-12);
    if !(g(lo) < 0.0 && g(hi) > 0.0) {
        return Err(CavityError::NoResonance(velocity / (2.0 * length)));
    }
    Ok(bisect_root(g, lo, hi, 1.0)?)
}

/// Adds a signed effective coupling between `a` and `b`. Positive values are
/// a plain capacitor. Negative values are realized by a physical two-element
/// series L-C branch (C = |value|, L = 2 / (omega_ref^2 |value|)) whose
/// admittance at `reference_hz` equals `j omega value`. Zero adds nothing.
fn add_signed_coupling(
    builder: &mut NetlistBuilder,
    a: usize,
    b: usize,
    value: f64,
    reference_hz: f64,
) {
    if value > 0.0 {
        builder.capacitor(value, a, b);
    } else if value < 0.0 {
        let omega_ref = TAU * reference_hz;
        let mid = builder.node();
        builder.capacitor(-value, a, mid);
        builder.inductor(2.0 / (omega_ref * omega_ref * (-value)), mid, b);
    }
}

struct CellNodes {
    island: usize,
    drive: usize,
}

fn attach_cell(
    builder: &mut NetlistBuilder,
    qubit: &QubitParams,
    circuit: &ResonatorCircuit,
    network: &CouplingNetwork,
    index: usize,
    upstream: usize,
    coupling: f64,
    junction: bool,
) -> CellNodes {
    let resonator = builder.node();
    builder.capacitor(coupling, upstream, resonator);
    builder.inductor(circuit.inductance, resonator, 0);
    builder.capacitor(circuit.c_shunt[index], resonator, 0);
    let island = builder.node();
    builder.capacitor(network.c_qubit[index], resonator, island);
    builder.capacitor(qubit.shunt_capacitance(), island, 0);
    if junction {
        builder.inductor(qubit.junction_inductance(), island, 0);
    }
    let drive = builder.node();
    builder.capacitor(network.c_drive[index], island, drive);
    CellNodes { island, drive }
}

fn check_sizes(
    qubits: &[QubitParams],
    circuit: &ResonatorCircuit,
    network: &CouplingNetwork,
) -> Result<(), CavityError> {
    network.validate()?;
    circuit.validate()?;
    if qubits.len() != network.qubit_count() || qubits.len() != circuit.c_shunt.len() {
        return Err(CavityError::InvalidParams(format!(
            "size mismatch: {} qubits, {} couplings, {} resonator circuits",
            qubits.len(),
            network.qubit_count(),
            circuit.c_shunt.len()
        )));
    }
    Ok(())
}

/// The single-feed device: one 50-ohm feed port (port 0) plus one 50-ohm
/// drive port per qubit, all junctions linearized.
pub fn build_one_port(
    qubits: &[QubitParams],
    circuit: &ResonatorCircuit,
    network: &CouplingNetwork,
    cavity: &ReentrantCavityParams,
) -> Result<Netlist, CavityError> {
    check_sizes(qubits, circuit, network)?;
    let mut b = NetlistBuilder::new();
    let feed = b.node();
    let fragment = cavity_equivalent(cavity, &[], &mut b)?;
    b.capacitor(network.c_in, feed, fragment.cavity_node);
    let mut drives = Vec::new();
    for (i, qubit) in qubits.iter().enumerate() {
        let cell = attach_cell(
            &mut b,
            qubit,
            circuit,
            network,
            i,
            fragment.cavity_node,
            network.c_resonator[i],
            true,
        );
        drives.push(cell.drive);
    }
    b.port(feed, 50.0);
    for d in drives {
        b.port(d, 50.0);
    }
    Ok(b.build()?)
}

/// The mirrored two-port variant used to characterize the filter passband:
/// the single feed is replaced by a symmetric pair of weaker-coupled ports
/// (ports 0 and 1).
pub fn build_two_port(
    qubits: &[QubitParams],
    circuit: &ResonatorCircuit,
    network: &CouplingNetwork,
    cavity: &ReentrantCavityParams,
) -> Result<Netlist, CavityError> {
    check_sizes(qubits, circuit, network)?;
    let mut b = NetlistBuilder::new();
    let feed_a = b.node();
    let feed_b = b.node();
    let fragment = cavity_equivalent(cavity, &[], &mut b)?;
    b.capacitor(network.c_in_mirrored, feed_a, fragment.cavity_node);
    b.capacitor(network.c_in_mirrored, fragment.cavity_node, feed_b);
    let mut drives = Vec::new();
    for (i, qubit) in qubits.iter().enumerate() {
        let cell = attach_cell(
            &mut b,
            qubit,
            circuit,
            network,
            i,
            fragment.cavity_node,
            network.c_resonator[i],
            true,
        );
        drives.push(cell.drive);
    }
    b.port(feed_a, 50.0);
    b.port(feed_b, 50.0);
    for d in drives {
        b.port(d, 50.0);
    }
    Ok(b.build()?)
}

/// The admittance view: the junction of qubit `probed` is replaced by a port
/// (port 0, marked high-impedance by convention), the feed is port 1, and
/// the drive ports follow. In the unfiltered configuration the resonators
/// couple straight to the feed through `c_direct`; the filtered
/// configurations insert the cavity, with the interferometric couplings
/// attached to the probed cell when requested.
pub fn build_configuration(
    config: FilterConfiguration,
    qubits: &[QubitParams],
    circuit: &ResonatorCircuit,
    network: &CouplingNetwork,
    cavity: &ReentrantCavityParams,
    probed: usize,
) -> Result<Netlist, CavityError> {
    check_sizes(qubits, circuit, network)?;
    if probed >= qubits.len() {
        return Err(CavityError::InvalidParams(format!(
            "probed qubit {probed} out of range ({} qubits)",
            qubits.len()
        )));
    }
    let mut b = NetlistBuilder::new();
    let feed = b.node();
    let (upstream, cavity_node) = match config {
        FilterConfiguration::Unfiltered => (feed, None),
        _ => {
            let fragment = cavity_equivalent(cavity, &[], &mut b)?;
            b.capacitor(network.c_in, feed, fragment.cavity_node);
            (fragment.cavity_node, Some(fragment.cavity_node))
        }
    };
    let mut junction_node = 0;
    let mut drives = Vec::new();
    for (i, qubit) in qubits.iter().enumerate() {
        let coupling = match config {
            FilterConfiguration::Unfiltered => network.c_direct[i],
            _ => network.c_resonator[i],
        };
        let cell =
            attach_cell(&mut b, qubit, circuit, network, i, upstream, coupling, i != probed);
        if i == probed {
            junction_node = cell.island;
            if config == FilterConfiguration::FilteredWithInterference {
                let v = cavity_node.expect("filtered configuration has a cavity node");
                add_signed_coupling(&mut b, cell.island, v, network.c_xq, network.x_reference_hz);
                add_signed_coupling(&mut b, cell.drive, v, network.c_x1, network.x_reference_hz);
            }
        }
        drives.push(cell.drive);
    }
    b.port(junction_node, 50.0);
    b.port(feed, 50.0);
    for d in drives {
        b.port(d, 50.0);
    }
    Ok(b.build()?)
}

/// Convenience wrapper: the junction view of the fully filtered device.
pub fn build_junction_view(
    qubits: &[QubitParams],
    circuit: &ResonatorCircuit,
    network: &CouplingNetwork,
    cavity: &ReentrantCavityParams,
    probed: usize,
) -> Result<Netlist, CavityError> {
    build_configuration(
        FilterConfiguration::FilteredWithInterference,
        qubits,
        circuit,
        network,
        cavity,
        probed,
    )
}
