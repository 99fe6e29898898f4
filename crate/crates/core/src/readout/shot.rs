//! Single-shot signal generation.
//!
//! The integrated signal is `s = int w(t) sqrt(kappa_e) alpha(t) dt + n`
//! with a boxcar weight over the flat top of the pulse and complex Gaussian
//! noise `n`. A relaxation jump at `t_j` switches the trajectory from the
//! excited to the ground dynamics with `alpha` continuous at the jump; the
//! post-jump evolution is the ground forced solution plus the mismatch
//! propagated by the (closed-form) homogeneous ground response, so a shot
//! costs O(1) after the two no-jump trajectories are integrated once.

use super::ode::{cavity_response, CavityTrajectory, QubitState};
use super::params::{NoiseModel, QubitParams, ReadoutPulse, ResonatorParams};
use super::rng::ShotRng;
use super::ReadoutError;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Herald outcome attached to a shot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HeraldOutcome {
    Pass,
    Fail,
}

/// Precomputed quantities for fast repeated shots of one qubit-resonator
/// pair: the two no-jump trajectories, their windowed integrals and prefix
/// sums, and the deterministic means used for herald thresholding.
#[derive(Debug, Clone)]
pub struct ShotContext {
    pub window: (f64, f64),
    traj_g: CavityTrajectory,
    traj_e: CavityTrajectory,
    sqrt_kappa_e: f64,
    /// prefix integrals of sqrt(kappa_e) * alpha over [window.0, t]
    prefix_g: Vec<Complex64>,
    prefix_e: Vec<Complex64>,
    /// deterministic no-jump signals
    pub s_ground: Complex64,
    pub s_excited: Complex64,
}

impl ShotContext {
    /// Integrates both pointer trajectories for the pulse (from the given
    /// initial fields) and prepares the windowed integrals. The integration
    /// window is the flat top `[edge, duration - edge]`.
    pub fn new(
        pulse: &ReadoutPulse,
        res: &ResonatorParams,
        alpha0_g: Complex64,
        alpha0_e: Complex64,
    ) -> Result<Self, ReadoutError> {
        let t_end = pulse.duration;
        let traj_g = cavity_response(pulse, res, QubitState::Ground, alpha0_g, t_end)?;
        let traj_e = cavity_response(pulse, res, QubitState::Excited, alpha0_e, t_end)?;
        let window = (pulse.edge, pulse.duration - pulse.edge);
        let sqrt_kappa_e = res.kappa_e.sqrt();
        let prefix_g = prefix_integral(&traj_g, window, sqrt_kappa_e);
        let prefix_e = prefix_integral(&traj_e, window, sqrt_kappa_e);
        let s_ground = *prefix_g.last().unwrap();
        let s_excited = *prefix_e.last().unwrap();
        Ok(Self {
            window,
            traj_g,
            traj_e,
            sqrt_kappa_e,
            prefix_g,
            prefix_e,
            s_ground,
            s_excited,
        })
    }

    pub fn trajectories(&self) -> (&CavityTrajectory, &CavityTrajectory) {
        (&self.traj_g, &self.traj_e)
    }

    /// Noise-free integrated signal for a shot that starts excited and jumps
    /// to the ground dynamics at `t_jump` (continuous alpha at the jump).
    pub fn signal_with_jump(&self, t_jump: f64) -> Complex64 {
        let (t0, t1) = self.window;
        if t_jump >= t1 {
            return self.s_excited;
        }
        if t_jump <= 0.0 {
            return self.s_ground;
        }
        // excited part up to the jump
        let head =
            interp_prefix(&self.prefix_e, &self.traj_e, t_jump, self.window, self.sqrt_kappa_e);
        // ground forced solution over the remainder
        let tail = self.s_ground
            - interp_prefix(&self.prefix_g, &self.traj_g, t_jump, self.window, self.sqrt_kappa_e);
        // mismatch propagated by the homogeneous ground response, integrated
        // over [max(t_jump, t0), t1] in closed form
        let mismatch = self.traj_e.at(t_jump) - self.traj_g.at(t_jump);
        let lambda = self.traj_g.decay_rate;
        let a = t_jump.max(t0);
        let correction = ((lambda * (t1 - t_jump)).exp() - (lambda * (a - t_jump)).exp()) / lambda;
        head + tail + self.sqrt_kappa_e * mismatch * correction
    }

    /// Noise-free signal for a fixed state over the whole window.
    pub fn signal_without_jump(&self, state: QubitState) -> Complex64 {
        match state {
            QubitState::Ground => self.s_ground,
            QubitState::Excited => self.s_excited,
        }
    }

    /// Midpoint of the two deterministic means, for herald thresholding.
    pub fn midpoint(&self) -> Complex64 {
        0.5 * (self.s_ground + self.s_excited)
    }

    /// Unit vector from the ground to the excited mean.
    pub fn axis(&self) -> Complex64 {
        let d = self.s_excited - self.s_ground;
        d / d.norm()
    }

    /// Deterministic assignment: excited iff the projection onto the axis
    /// reaches the midpoint (ties assign excited).
    pub fn threshold_assign(&self, s: Complex64) -> QubitState {
        let axis = self.axis();
        let proj = ((s - self.midpoint()) * axis.conj()).re;
        if proj >= 0.0 {
            QubitState::Excited
        } else {
            QubitState::Ground
        }
    }
}

fn prefix_integral(
    traj: &CavityTrajectory,
    window: (f64, f64),
    scale: f64,
) -> Vec<Complex64> {
    let (t0, t1) = window;
    let n = traj.alpha.len();
    let mut out = Vec::with_capacity(n);
    let mut acc = Complex64::new(0.0, 0.0);
    out.push(acc);
    for i in 1..n {
        let ta = traj.dt * (i - 1) as f64;
        let tb = traj.dt * i as f64;
        // overlap of [ta, tb] with the boxcar window
        let lo = ta.max(t0);
        let hi = tb.min(t1);
        if hi > lo {
            // trapezoid on the clipped segment
            let fa = traj.at(lo);
            let fb = traj.at(hi);
            acc += 0.5 * (fa + fb) * (hi - lo) * scale;
        }
        out.push(acc);
    }
    out
}

fn interp_prefix(
    prefix: &[Complex64],
    traj: &CavityTrajectory,
    t: f64,
    window: (f64, f64),
    scale: f64,
) -> Complex64 {
    let (t0, t1) = window;
    let tc = t.clamp(0.0, traj.duration());
    let i = ((tc / traj.dt) as usize).min(prefix.len() - 2);
    let ta = traj.dt * i as f64;
    let lo = ta.max(t0);
    let hi = tc.min(t1);
    let base = prefix[i];
    if hi > lo {
        base + 0.5 * (traj.at(lo) + traj.at(hi)) * (hi - lo) * scale
    } else {
        base
    }
}

/// Integrates one shot from explicit trajectories (the spec-level
/// operation): boxcar window over the flat top, plus complex Gaussian noise.
pub fn integrate_shot(
    traj_g: &CavityTrajectory,
    traj_e: &CavityTrajectory,
    state: QubitState,
    window: (f64, f64),
    kappa_e: f64,
    noise: &NoiseModel,
    rng: &mut ShotRng,
) -> Complex64 {
    let traj = match state {
        QubitState::Ground => traj_g,
        QubitState::Excited => traj_e,
    };
    let prefix = prefix_integral(traj, window, kappa_e.sqrt());
    *prefix.last().unwrap() + rng.complex_normal(noise.sigma_s)
}

/// One complete single-measurement shot: thermal initialization (prepared
/// 0) or a perfect pi pulse (prepared pi), a relaxation jump during the
/// window when excited, and the integrated noisy signal.
pub fn simulate_shot(
    qubit: &QubitParams,
    context: &ShotContext,
    prepared: PulseLabel,
    noise: &NoiseModel,
    init_rng: &mut ShotRng,
    jump_rng: &mut ShotRng,
    noise_rng: &mut ShotRng,
) -> (Complex64, QubitState) {
    let thermal = init_rng.uniform();
    let state = match prepared {
        PulseLabel::Zero => {
            if thermal < qubit.p_th {
                QubitState::Excited
            } else {
                QubitState::Ground
            }
        }
        PulseLabel::Pi => QubitState::Excited,
    };
    let t_jump = jump_rng.jump_time(qubit.t1);
    let s = match state {
        QubitState::Ground => context.s_ground,
        QubitState::Excited => context.signal_with_jump(t_jump),
    };
    let final_state = match state {
        QubitState::Excited if t_jump < context.window.1 => QubitState::Ground,
        other => other,
    };
    (s + noise_rng.complex_normal(noise.sigma_s), final_state)
}

/// Preparation label: no pulse or a pi pulse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PulseLabel {
    Zero,
    Pi,
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::TAU;

    fn fixture() -> (ReadoutPulse, ResonatorParams) {
        let res = ResonatorParams {
            omega_r: TAU * 9.871e9,
            kappa: TAU * 0.8e6,
            kappa_e: TAU * 0.8e6,
            chi: -TAU * 1.7e6,
        };
        let pulse = ReadoutPulse {
            carrier_hz: 9.871e9,
            xi: 1.0,
            duration: 1.03e-6,
            edge: 15e-9,
            amplitude: 1.5e4,
        };
        (pulse, res)
    }

    #[test]
    fn states_separate_without_noise() {
        let (pulse, res) = fixture();
        let ctx =
            ShotContext::new(&pulse, &res, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))
                .unwrap();
        assert!((ctx.s_excited - ctx.s_ground).norm() > 0.0);
    }

    #[test]
    fn jump_limits_recover_pure_states() {
        let (pulse, res) = fixture();
        let ctx =
            ShotContext::new(&pulse, &res, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))
                .unwrap();
        assert_eq!(ctx.signal_with_jump(pulse.duration + 1e-9), ctx.s_excited);
        assert_eq!(ctx.signal_with_jump(0.0), ctx.s_ground);
    }

    #[test]
    fn jump_signal_matches_switched_integration() {
        // oracle: integrate the switched trajectory directly on the grid
        let (pulse, res) = fixture();
        let ctx =
            ShotContext::new(&pulse, &res, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))
                .unwrap();
        for &t_jump in &[0.2e-6, 0.5e-6, 0.9e-6] {
            let oracle = switched_signal_oracle(&pulse, &res, t_jump);
            let fast = ctx.signal_with_jump(t_jump);
            assert_relative_eq!(fast.re, oracle.re, max_relative = 2e-3);
            assert_relative_eq!(fast.im, oracle.im, max_relative = 2e-3);
        }
    }

    /// Direct RK4 of the jump shot: excited dynamics to t_jump, then ground
    /// dynamics continuing from the same alpha.
    fn switched_signal_oracle(
        pulse: &ReadoutPulse,
        res: &ResonatorParams,
        t_jump: f64,
    ) -> Complex64 {
        let head = cavity_response(
            pulse,
            res,
            QubitState::Excited,
            Complex64::new(0.0, 0.0),
            t_jump,
        )
        .unwrap();
        let alpha_at_jump = *head.alpha.last().unwrap();
        // ground dynamics from t_jump with the drive shifted accordingly
        let res2 = *res;
        let lambda_g = Complex64::new(
            -res.kappa / 2.0,
            QubitState::Ground.effective_detuning(0.0, res.chi),
        );
        let mut a = alpha_at_jump;
        let dt = 0.2e-9;
        let steps = ((pulse.duration - t_jump) / dt).ceil() as usize;
        let dt = (pulse.duration - t_jump) / steps as f64;
        let j = Complex64::new(0.0, 1.0);
        let force = |t: f64| -j * res2.kappa_e.sqrt() * pulse.envelope(t);
        let mut tail_alpha = vec![a];
        for k in 0..steps {
            let t = t_jump + k as f64 * dt;
            let k1 = lambda_g * a + force(t);
            let k2 = lambda_g * (a + 0.5 * dt * k1) + force(t + 0.5 * dt);
            let k3 = lambda_g * (a + 0.5 * dt * k2) + force(t + 0.5 * dt);
            let k4 = lambda_g * (a + dt * k3) + force(t + dt);
            a += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            tail_alpha.push(a);
        }
        // trapezoid over the boxcar window on the combined trajectory
        let (t0, t1) = (pulse.edge, pulse.duration - pulse.edge);
        let sample = |t: f64| -> Complex64 {
            if t <= t_jump {
                head.at(t)
            } else {
                let x = (t - t_jump) / dt;
                let i = (x as usize).min(tail_alpha.len() - 2);
                let frac = x - i as f64;
                tail_alpha[i] * (1.0 - frac) + tail_alpha[i + 1] * frac
            }
        };
        let n = 20_000;
        let h = (t1 - t0) / n as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            let ta = t0 + i as f64 * h;
            acc += 0.5 * (sample(ta) + sample(ta + h)) * h;
        }
        acc * res.kappa_e.sqrt()
    }

    #[test]
    fn swapping_trajectories_reflects_signal_about_midpoint() {
        let (pulse, res) = fixture();
        let ctx =
            ShotContext::new(&pulse, &res, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))
                .unwrap();
        let noise = NoiseModel { sigma_s: 1e-9, seed: 1 };
        let mut rng1 = ShotRng::new(1, super::super::rng::Stage::MainNoise, 0, 0);
        let mut rng2 = ShotRng::new(1, super::super::rng::Stage::MainNoise, 0, 0);
        let (tg, te) = ctx.trajectories();
        let s_ge =
            integrate_shot(tg, te, QubitState::Ground, ctx.window, res.kappa_e, &noise, &mut rng1);
        let s_eg =
            integrate_shot(te, tg, QubitState::Ground, ctx.window, res.kappa_e, &noise, &mut rng2);
        // swapped roles: the two signals are mirror images about the midpoint
        let mid = ctx.midpoint();
        assert_relative_eq!((s_ge - mid).re, -(s_eg - mid).re, max_relative = 1e-6);
        assert_relative_eq!((s_ge - mid).im, -(s_eg - mid).im, max_relative = 1e-6);
    }

    #[test]
    fn threshold_tie_assigns_excited() {
        let (pulse, res) = fixture();
        let ctx =
            ShotContext::new(&pulse, &res, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))
                .unwrap();
        assert_eq!(ctx.threshold_assign(ctx.midpoint()), QubitState::Excited);
        assert_eq!(ctx.threshold_assign(ctx.s_ground), QubitState::Ground);
        assert_eq!(ctx.threshold_assign(ctx.s_excited), QubitState::Excited);
    }
}
