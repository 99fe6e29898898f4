//! Nodal assembly, Kron reduction, and port quantities.

use super::{FrequencySweep, Netlist, NetworkError, PortResponse};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::TAU;

/// Assembles the complex node-admittance matrix over the non-ground nodes
/// (node `i` maps to row/column `i - 1`).
pub fn assemble_admittance(
    netlist: &Netlist,
    omega: f64,
) -> Result<DMatrix<Complex64>, NetworkError> {
    if omega <= 0.0 {
        return Err(NetworkError::InvalidFrequency(omega / TAU));
    }
    let n = netlist.node_count - 1;
    let mut y = DMatrix::<Complex64>::zeros(n, n);
    for el in &netlist.elements {
        let stamp = el.admittance(omega)?;
        let (a, b) = el.nodes();
        for (i, &ni) in [a, b].iter().enumerate() {
            if ni == 0 {
                continue;
            }
            for (k, &nk) in [a, b].iter().enumerate() {
                if nk == 0 {
                    continue;
                }
                y[(ni - 1, nk - 1)] += stamp[i][k];
            }
        }
    }
    Ok(y)
}

/// Splits node indices into (port rows, internal rows) of the assembled matrix.
fn partition(netlist: &Netlist) -> (Vec<usize>, Vec<usize>) {
    let port_rows: Vec<usize> = netlist.ports.iter().map(|p| p.node - 1).collect();
    let internal: Vec<usize> = (0..netlist.node_count - 1)
        .filter(|r| !port_rows.contains(r))
        .collect();
    (port_rows, internal)
}

/// Reduces the node-admittance matrix onto the port nodes by eliminating
/// internal nodes via the Schur complement: `Ypp - Ypi * Yii^-1 * Yip`.
pub fn port_admittance(
    netlist: &Netlist,
    omega: f64,
) -> Result<DMatrix<Complex64>, NetworkError> {
    let y = assemble_admittance(netlist, omega)?;
    let (port_rows, internal) = partition(netlist);
    kron_reduce(&y, &port_rows, &internal, omega / TAU)
}

pub(crate) fn kron_reduce(
    y: &DMatrix<Complex64>,
    keep: &[usize],
    eliminate: &[usize],
    freq_hz: f64,
) -> Result<DMatrix<Complex64>, NetworkError> {
    let ypp = y.select_rows(keep).select_columns(keep);
    if eliminate.is_empty() {
        return Ok(ypp);
    }
    let ypi = y.select_rows(keep).select_columns(eliminate);
    let yip = y.select_rows(eliminate).select_columns(keep);
    let yii = y.select_rows(eliminate).select_columns(eliminate);
    let solved = yii
        .lu()
        .solve(&yip)
        .ok_or(NetworkError::IllConditioned { freq_hz })?;
    Ok(ypp - ypi * solved)
}

/// The scattering matrix at one frequency.
///
/// Computed from the port-reduced admittance with the usual real-reference
/// normalization `y_n = sqrt(Z0) * Y * sqrt(Z0)`, `S = (I - y_n)(I + y_n)^-1`,
/// which keeps S symmetric for reciprocal networks with mixed port impedances.
pub fn s_matrix_at(netlist: &Netlist, omega: f64) -> Result<DMatrix<Complex64>, NetworkError> {
    let yp = port_admittance(netlist, omega)?;
    let np = netlist.ports.len();
    let scale: Vec<f64> = netlist.ports.iter().map(|p| p.z_ref_ohms.sqrt()).collect();
    let mut yn = yp;
    for i in 0..np {
        for k in 0..np {
            yn[(i, k)] *= scale[i] * scale[k];
        }
    }
    let identity = DMatrix::<Complex64>::identity(np, np);
    let plus = &identity + &yn;
    let minus = &identity - &yn;
    let inv = plus
        .lu()
        .try_inverse()
        .ok_or(NetworkError::IllConditioned { freq_hz: omega / TAU })?;
    Ok(minus * inv)
}

/// Sweeps the S-parameters of a netlist. Frequency points are independent
/// and evaluated in parallel.
pub fn s_parameters(
    netlist: &Netlist,
    sweep: &FrequencySweep,
) -> Result<PortResponse, NetworkError> {
    sweep.validate()?;
    netlist.validate()?;
    if netlist.ports.is_empty() {
        return Err(NetworkError::InvalidNetlist("no ports defined".into()));
    }
    let frequencies = sweep.frequencies();
    let s = frequencies
        .par_iter()
        .map(|&f| s_matrix_at(netlist, TAU * f))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PortResponse {
        frequencies,
        z_refs: netlist.ports.iter().map(|p| p.z_ref_ohms).collect(),
        s,
        y_in: None,
    })
}

/// Input admittance seen looking into `port_index`, with every other port
/// terminated in its reference impedance and all internal nodes eliminated.
pub fn input_admittance(
    netlist: &Netlist,
    port_index: usize,
    sweep: &FrequencySweep,
) -> Result<Vec<Complex64>, NetworkError> {
    sweep.validate()?;
    netlist.validate()?;
    if port_index >= netlist.ports.len() {
        return Err(NetworkError::InvalidNetlist(format!(
            "port index {port_index} out of range (have {})",
            netlist.ports.len()
        )));
    }
    let probe_row = netlist.ports[port_index].node - 1;
    let eliminate: Vec<usize> = (0..netlist.node_count - 1).filter(|&r| r != probe_row).collect();
    sweep
        .frequencies()
        .par_iter()
        .map(|&f| {
            let omega = TAU * f;
            let mut y = assemble_admittance(netlist, omega)?;
            for (i, port) in netlist.ports.iter().enumerate() {
                if i != port_index {
                    y[(port.node - 1, port.node - 1)] +=
                        Complex64::new(1.0 / port.z_ref_ohms, 0.0);
                }
            }
            let reduced = kron_reduce(&y, &[probe_row], &eliminate, f)?;
            Ok(reduced[(0, 0)])
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::NetlistBuilder;
    use approx::assert_relative_eq;

    fn sweep() -> FrequencySweep {
        FrequencySweep { start_hz: 1e9, stop_hz: 10e9, points: 21 }
    }

    #[test]
    fn single_capacitor_assembly() {
        let mut b = NetlistBuilder::new();
        let n1 = b.node();
        b.capacitor(1e-12, n1, 0).port(n1, 50.0);
        let y = assemble_admittance(&b.build().unwrap(), TAU * 1e9).unwrap();
        assert_relative_eq!(y[(0, 0)].im, TAU * 1e9 * 1e-12, max_relative = 1e-12);
    }

    #[test]
    fn series_capacitor_is_symmetric_floating_stamp() {
        let mut b = NetlistBuilder::new();
        let n1 = b.node();
        let n2 = b.node();
        b.capacitor(1e-12, n1, n2).capacitor(1e-15, n1, 0).capacitor(1e-15, n2, 0);
        b.port(n1, 50.0);
        let netlist = b.build().unwrap();
        let y = assemble_admittance(&netlist, TAU * 1e9).unwrap();
        let yc = TAU * 1e9 * 1e-12;
        assert_relative_eq!(y[(0, 1)].im, -yc, max_relative = 1e-10);
        assert_relative_eq!(y[(1, 0)].im, -yc, max_relative = 1e-10);
        assert_relative_eq!(y[(0, 0)].im, yc + TAU * 1e9 * 1e-15, max_relative = 1e-10);
    }

    #[test]
    fn parallel_lc_cancels_at_resonance() {
        // L = 1 nH, C = 1 pF: omega0 = 1/sqrt(LC)
        let mut b = NetlistBuilder::new();
        let n1 = b.node();
        b.inductor(1e-9, n1, 0).capacitor(1e-12, n1, 0).port(n1, 50.0);
        let omega0 = 1.0 / (1e-9f64 * 1e-12).sqrt();
        let y = assemble_admittance(&b.build().unwrap(), omega0).unwrap();
        assert!(y[(0, 0)].norm() < 1e-12);
    }

    #[test]
    fn matched_load_has_zero_reflection() {
        let mut b = NetlistBuilder::new();
        let n1 = b.node();
        b.resistor(50.0, n1, 0).port(n1, 50.0);
        let resp = s_parameters(&b.build().unwrap(), &sweep()).unwrap();
        for s in &resp.s {
            assert!(s[(0, 0)].norm() < 1e-12);
        }
    }

    #[test]
    fn open_circuit_reflects_fully() {
        // One port, no elements: S11 = 1 exactly.
        let mut b = NetlistBuilder::new();
        let n1 = b.node();
        b.port(n1, 50.0);
        let resp = s_parameters(&b.build().unwrap(), &sweep()).unwrap();
        for s in &resp.s {
            assert_eq!(s[(0, 0)], Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn kron_reduction_matches_direct_two_port() {
        // 50-ohm series resistor realized as two resistors through an internal
        // node; S21 must match the single-element answer 2/3 (Z = Z0 system).
        let mut b = NetlistBuilder::new();
        let n1 = b.node();
        let mid = b.node();
        let n2 = b.node();
        b.resistor(25.0, n1, mid).resistor(25.0, mid, n2);
        b.port(n1, 50.0).port(n2, 50.0);
        let resp = s_parameters(&b.build().unwrap(), &sweep()).unwrap();
        for s in &resp.s {
            assert_relative_eq!(s[(0, 1)].re, 2.0 / 3.0, max_relative = 1e-10);
            assert_relative_eq!(s[(0, 0)].re, 1.0 / 3.0, max_relative = 1e-10);
        }
    }

    #[test]
    fn capacitor_input_admittance_is_lossless() {
        let mut b = NetlistBuilder::new();
        let n1 = b.node();
        b.capacitor(2e-12, n1, 0).port(n1, 50.0);
        let y = input_admittance(&b.build().unwrap(), 0, &sweep()).unwrap();
        for (f, yf) in sweep().frequencies().iter().zip(&y) {
            assert_eq!(yf.re, 0.0);
            assert_relative_eq!(yf.im, TAU * f * 2e-12, max_relative = 1e-12);
        }
    }

    #[test]
    fn resistor_input_admittance_is_flat() {
        let mut b = NetlistBuilder::new();
        let n1 = b.node();
        b.resistor(200.0, n1, 0).port(n1, 50.0);
        let y = input_admittance(&b.build().unwrap(), 0, &sweep()).unwrap();
        for yf in &y {
            assert_relative_eq!(yf.re, 5e-3, max_relative = 1e-12);
            assert_eq!(yf.im, 0.0);
        }
    }

    #[test]
    fn other_ports_are_terminated_in_reference() {
        // Probe port 0 connected through nothing but the port-1 termination:
        // a series capacitor to the port-1 node shows the 50-ohm load there.
        let mut b = NetlistBuilder::new();
        let n1 = b.node();
        let n2 = b.node();
        b.capacitor(1e-9, n1, n2); // large C: nearly a short at GHz
        b.port(n1, 50.0).port(n2, 50.0);
        let y = input_admittance(&b.build().unwrap(), 0, &sweep()).unwrap();
        // at 10 GHz the 1 nF series cap is ~j63 S: environment ~ 50 ohms
        assert_relative_eq!(y.last().unwrap().re, 1.0 / 50.0, max_relative = 1e-2);
    }
}
