//! Driven-cavity pointer-state dynamics.
//!
//! In the frame rotating at the demodulation carrier, the coherent state of
//! a readout resonator obeys
//!
//! `d alpha/dt = [j (delta -/+ chi) - kappa/2] alpha - j sqrt(kappa_e) eps(t)`
//!
//! with `delta = omega_carrier - omega_r`, the upper sign for the excited
//! qubit. Integration is fixed-step RK4 with `dt <= min(1/(20 kappa), 1 ns)`
//! (further reduced to resolve the beat note when the drive carrier differs
//! from the demodulation frame).

use super::{ReadoutError, ReadoutPulse, ResonatorParams};
use num_complex::Complex64;
use std::f64::consts::TAU;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QubitState {
    Ground,
    Excited,
}

impl QubitState {
    /// Effective detuning including the state-dependent dispersive shift.
    pub fn effective_detuning(self, delta: f64, chi: f64) -> f64 {
        match self {
            QubitState::Excited => delta - chi,
            QubitState::Ground => delta + chi,
        }
    }
}

/// A pointer-state trajectory on a uniform time grid starting at t = 0.
#[derive(Debug, Clone)]
pub struct CavityTrajectory {
    pub dt: f64,
    pub alpha: Vec<Complex64>,
    /// Complex rate `j (delta -/+ chi) - kappa/2` of the homogeneous part.
    pub decay_rate: Complex64,
}

impl CavityTrajectory {
    pub fn duration(&self) -> f64 {
        self.dt * (self.alpha.len() - 1) as f64
    }

    /// Linear interpolation of alpha at time `t` (clamped to the grid).
    pub fn at(&self, t: f64) -> Complex64 {
        let n = self.alpha.len();
        let x = (t / self.dt).clamp(0.0, (n - 1) as f64);
        let i = (x as usize).min(n - 2);
        let frac = x - i as f64;
        self.alpha[i] * (1.0 - frac) + self.alpha[i + 1] * frac
    }

    /// Free evolution of the endpoint value for `elapsed` seconds after the
    /// grid ends (drive assumed off).
    pub fn ringdown(&self, elapsed: f64) -> Complex64 {
        self.alpha[self.alpha.len() - 1] * (self.decay_rate * elapsed).exp()
    }
}

/// Steady-state amplitude under a constant drive rate `epsilon`:
/// `alpha_ss = -j sqrt(kappa_e) eps / (kappa/2 - j (delta -/+ chi))`.
pub fn steady_state_amplitude(
    res: &ResonatorParams,
    state: QubitState,
    delta: f64,
    epsilon: f64,
) -> Complex64 {
    let d = state.effective_detuning(delta, res.chi);
    let j = Complex64::new(0.0, 1.0);
    -j * res.kappa_e.sqrt() * epsilon / Complex64::new(res.kappa / 2.0, -d)
}

/// Integrates the trajectory over `[0, t_end]` from `alpha0`, demodulated in
/// the frame of `frame_carrier_hz`. When the pulse carrier differs from the
/// frame the forcing picks up the beat factor `exp(-j 2 pi (f_pulse -
/// f_frame) t)`.
pub fn cavity_response_in_frame(
    pulse: &ReadoutPulse,
    res: &ResonatorParams,
    state: QubitState,
    alpha0: Complex64,
    frame_carrier_hz: f64,
    t_end: f64,
) -> Result<CavityTrajectory, ReadoutError> {
    pulse.validate()?;
    res.validate()?;
    let delta = TAU * frame_carrier_hz - res.omega_r;
    let beat = TAU * (pulse.carrier_hz - frame_carrier_hz);
    let lambda = Complex64::new(-res.kappa / 2.0, state.effective_detuning(delta, res.chi));
    let j = Complex64::new(0.0, 1.0);

    let mut dt = (1.0 / (20.0 * res.kappa)).min(1e-9);
    if beat != 0.0 {
        dt = dt.min(0.2 / beat.abs());
    }
    let steps = (t_end / dt).ceil() as usize;
    let dt = t_end / steps as f64;

    let force = |t: f64| -> Complex64 {
        let eps = pulse.envelope(t);
        if eps == 0.0 {
            Complex64::new(0.0, 0.0)
        } else if beat == 0.0 {
            -j * res.kappa_e.sqrt() * eps
        } else {
            -j * res.kappa_e.sqrt() * eps * Complex64::new(0.0, -beat * t).exp()
        }
    };

    let mut alpha = Vec::with_capacity(steps + 1);
    alpha.push(alpha0);
    let mut a = alpha0;
    for k in 0..steps {
        let t = k as f64 * dt;
        let k1 = lambda * a + force(t);
        let k2 = lambda * (a + 0.5 * dt * k1) + force(t + 0.5 * dt);
        let k3 = lambda * (a + 0.5 * dt * k2) + force(t + 0.5 * dt);
        let k4 = lambda * (a + dt * k3) + force(t + dt);
        let next = a + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        // a passive step (no drive) can only shrink the amplitude
        if pulse.envelope(t) == 0.0
            && pulse.envelope(t + dt) == 0.0
            && next.norm() > a.norm() * (1.0 + 1e-9)
        {
            return Err(ReadoutError::IntegratorFault { step: k });
        }
        a = next;
        alpha.push(a);
    }
    Ok(CavityTrajectory { dt, alpha, decay_rate: lambda })
}

/// Trajectory in the pulse's own carrier frame (the common case).
pub fn cavity_response(
    pulse: &ReadoutPulse,
    res: &ResonatorParams,
    state: QubitState,
    alpha0: Complex64,
    t_end: f64,
) -> Result<CavityTrajectory, ReadoutError> {
    cavity_response_in_frame(pulse, res, state, alpha0, pulse.carrier_hz, t_end)
}
