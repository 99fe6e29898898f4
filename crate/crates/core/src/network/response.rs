//! Port responses and derived figures of merit.

use super::NetworkError;
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::{PI, TAU};

/// Swept port quantities: one complex S-matrix per frequency and, when
/// computed, the input admittance at a designated port.
#[derive(Debug, Clone)]
pub struct PortResponse {
    pub frequencies: Vec<f64>,
    /// Port reference impedances, in port order.
    pub z_refs: Vec<f64>,
    pub s: Vec<DMatrix<Complex64>>,
    pub y_in: Option<Vec<Complex64>>,
}

impl PortResponse {
    pub fn port_count(&self) -> usize {
        self.z_refs.len()
    }

    /// Magnitude of `S[to, from]` in dB at every frequency.
    pub fn s_db(&self, to: usize, from: usize) -> Vec<f64> {
        self.s.iter().map(|s| 20.0 * s[(to, from)].norm().log10()).collect()
    }
}

/// Unwraps a phase sequence in place: successive jumps larger than pi are
/// folded back by multiples of 2*pi.
pub(crate) fn unwrap_phase(phase: &mut [f64]) {
    for i in 1..phase.len() {
        let mut delta = phase[i] - phase[i - 1];
        while delta > PI {
            delta -= TAU;
        }
        while delta < -PI {
            delta += TAU;
        }
        phase[i] = phase[i - 1] + delta;
    }
}

/// Group delay `tau_D = -d(phase)/d(omega)` of the chosen S-matrix entry,
/// via central differences on the unwrapped phase (one-sided stencils at the
/// sweep edges).
pub fn group_delay(
    response: &PortResponse,
    entry: (usize, usize),
) -> Result<Vec<f64>, NetworkError> {
    let n = response.frequencies.len();
    if n < 2 {
        return Err(NetworkError::InsufficientData);
    }
    let mut phase: Vec<f64> =
        response.s.iter().map(|s| s[(entry.0, entry.1)].arg()).collect();
    unwrap_phase(&mut phase);
    let omega: Vec<f64> = response.frequencies.iter().map(|f| TAU * f).collect();
    let mut tau = vec![0.0; n];
    tau[0] = -(phase[1] - phase[0]) / (omega[1] - omega[0]);
    tau[n - 1] = -(phase[n - 1] - phase[n - 2]) / (omega[n - 1] - omega[n - 2]);
    for i in 1..n - 1 {
        tau[i] = -(phase[i + 1] - phase[i - 1]) / (omega[i + 1] - omega[i - 1]);
    }
    Ok(tau)
}

/// External linewidth from a reflection group-delay peak:
/// `kappa_e / 2pi = 2 / (pi * tau_D)`.
pub fn extract_linewidth(tau_d_peak: f64) -> Result<f64, NetworkError> {
    if !(tau_d_peak > 0.0) {
        return Err(NetworkError::InvalidPeak(tau_d_peak));
    }
    Ok(2.0 / (PI * tau_d_peak))
}

/// Purcell T1 bound from the environment admittance at the qubit frequency:
/// `T1 = C_total / Re Y`. Returns `f64::INFINITY` when the real part is zero
/// (to numerical tolerance), and rejects negative real parts.
pub fn purcell_t1_limit(y_env: Complex64, c_total: f64) -> Result<f64, NetworkError> {
    if c_total <= 0.0 {
        return Err(NetworkError::InvalidNetlist(format!(
            "qubit shunt capacitance must be positive, got {c_total}"
        )));
    }
    // Lossless networks produce |Re Y| at roundoff scale; treat as zero.
    let tol = 1e-15 * y_env.norm().max(1e-30);
    if y_env.re.abs() <= tol {
        return Ok(f64::INFINITY);
    }
    if y_env.re < 0.0 {
        return Err(NetworkError::NonPassiveInput(y_env.re));
    }
    Ok(c_total / y_env.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Over-coupled lossless single-pole reflection:
    /// `S11 = (j*delta - ke/2) / (j*delta + ke/2)` with delta = omega - omega0.
    pub fn single_pole_reflection(f: f64, f0: f64, kappa_e: f64) -> Complex64 {
        let delta = TAU * (f - f0);
        let j = Complex64::new(0.0, 1.0);
        (j * delta - kappa_e / 2.0) / (j * delta + kappa_e / 2.0)
    }

    fn response_from(f: &[f64], s11: impl Fn(f64) -> Complex64) -> PortResponse {
        PortResponse {
            frequencies: f.to_vec(),
            z_refs: vec![50.0],
            s: f.iter().map(|&fi| DMatrix::from_element(1, 1, s11(fi))).collect(),
            y_in: None,
        }
    }

    #[test]
    fn constant_phase_has_zero_delay() {
        let f: Vec<f64> = (0..101).map(|i| 1e9 + 1e6 * i as f64).collect();
        let resp = response_from(&f, |_| Complex64::from_polar(1.0, 0.7));
        let tau = group_delay(&resp, (0, 0)).unwrap();
        assert!(tau.iter().all(|t| t.abs() < 1e-18));
    }

    #[test]
    fn ideal_delay_line_is_flat() {
        let tau0 = 3.2e-9;
        let f: Vec<f64> = (0..201).map(|i| 1e9 + 5e5 * i as f64).collect();
        let resp = response_from(&f, |fi| Complex64::from_polar(1.0, -TAU * fi * tau0));
        let tau = group_delay(&resp, (0, 0)).unwrap();
        for t in tau {
            assert_relative_eq!(t, tau0, max_relative = 1e-6);
        }
    }

    #[test]
    fn single_pole_peak_delay_is_4_over_kappa() {
        // kappa_e/2pi = 1 MHz -> peak tau_D = 4/kappa_e = 636.6 ns
        let kappa_e = TAU * 1e6;
        let f0 = 5e9;
        let f: Vec<f64> = (0..4001).map(|i| f0 - 10e6 + 5e3 * i as f64).collect();
        let resp = response_from(&f, |fi| single_pole_reflection(fi, f0, kappa_e));
        let tau = group_delay(&resp, (0, 0)).unwrap();
        let peak = tau.iter().cloned().fold(f64::MIN, f64::max);
        assert_relative_eq!(peak, 4.0 / kappa_e, max_relative = 1e-3);
        assert_relative_eq!(peak, 636.6e-9, max_relative = 1e-3);
    }

    #[test]
    fn linewidth_round_trip() {
        // tau_D = 636.6 ns -> kappa_e/2pi = 1.000 MHz
        let kappa = extract_linewidth(636.6e-9).unwrap();
        assert_relative_eq!(kappa, 1e6, max_relative = 1e-3);
        // tau -> infinity: kappa -> 0
        assert!(extract_linewidth(1e3).unwrap() < 1e-3);
        assert!(extract_linewidth(0.0).is_err());
        assert!(extract_linewidth(-1.0).is_err());
    }

    #[test]
    fn purcell_bound_cases() {
        // Re Y = 0 -> unbounded
        assert!(purcell_t1_limit(Complex64::new(0.0, 1e-3), 80e-15).unwrap().is_infinite());
        // 1 Mohm shunt, 80 fF: T1 = R*C = 80 ns
        let t1 = purcell_t1_limit(Complex64::new(1e-6, 0.0), 80e-15).unwrap();
        assert_relative_eq!(t1, 80e-9, max_relative = 1e-12);
        // 1 Gohm shunt, 80 fF: T1 = 80 us
        let t1 = purcell_t1_limit(Complex64::new(1e-9, 0.0), 80e-15).unwrap();
        assert_relative_eq!(t1, 80e-6, max_relative = 1e-12);
        assert!(purcell_t1_limit(Complex64::new(-1e-6, 0.0), 80e-15).is_err());
    }

    #[test]
    fn unwrap_handles_wraparound() {
        let mut phase = vec![3.0, -3.0, 3.0];
        unwrap_phase(&mut phase);
        assert_relative_eq!(phase[1], TAU - 3.0, max_relative = 1e-12);
        assert_relative_eq!(phase[2], 3.0, max_relative = 1e-12);
    }
}
