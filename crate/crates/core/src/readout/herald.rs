//! Heralded initialization: post-selection on the herald outcome and state
//! evolution through the herald-to-measurement delay.

use super::ode::QubitState;
use super::rng::{ShotRng, Stage};
use super::shot::HeraldOutcome;

/// Per-qubit bookkeeping of a heralded batch.
#[derive(Debug, Clone, Copy)]
pub struct HeraldReport {
    pub total: usize,
    pub kept: usize,
    /// Residual excited fraction among kept shots right before the state
    /// preparation pulse.
    pub p_post: f64,
}

/// Evolves one surviving shot through the delay: the state may relax
/// (probability `1 - exp(-delay/t1)`) and a ground-state qubit may re-excite
/// (probability `1 - exp(-rate * delay)`). Both draws are always consumed so
/// the stream layout does not depend on the branch taken.
pub fn evolve_through_delay(
    state: QubitState,
    t1: f64,
    delay: f64,
    re_excitation_rate: f64,
    rng: &mut ShotRng,
) -> QubitState {
    let u_decay = rng.uniform();
    let u_excite = rng.uniform();
    let after_decay = match state {
        QubitState::Excited if u_decay < 1.0 - (-delay / t1).exp() => QubitState::Ground,
        other => other,
    };
    match after_decay {
        QubitState::Ground if u_excite < 1.0 - (-re_excitation_rate * delay).exp() => {
            QubitState::Excited
        }
        other => other,
    }
}

/// Post-selects a herald batch and evolves the survivors through the delay.
/// Input: per shot, the herald assignment and the true state right after the
/// herald window. Output: per shot, `Some(state before the preparation
/// pulse)` for kept shots and `None` for discarded ones, plus the report.
pub fn herald_and_delay(
    herald: &[(HeraldOutcome, QubitState)],
    t1: f64,
    delay: f64,
    re_excitation_rate: f64,
    seed: u64,
    qubit: usize,
) -> (Vec<Option<QubitState>>, HeraldReport) {
    let mut kept = 0usize;
    let mut excited = 0usize;
    let states: Vec<Option<QubitState>> = herald
        .iter()
        .enumerate()
        .map(|(shot, &(outcome, state))| {
            // the delay stream is always advanced deterministically per shot
            let mut rng = ShotRng::new(seed, Stage::Delay, qubit, shot as u64);
            let evolved = evolve_through_delay(state, t1, delay, re_excitation_rate, &mut rng);
            if outcome == HeraldOutcome::Fail {
                return None;
            }
            kept += 1;
            if evolved == QubitState::Excited {
                excited += 1;
            }
            Some(evolved)
        })
        .collect();
    let report = HeraldReport {
        total: herald.len(),
        kept,
        p_post: if kept > 0 { excited as f64 / kept as f64 } else { 0.0 },
    };
    (states, report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_herald_no_reexcitation_gives_zero_p_post() {
        let herald: Vec<(HeraldOutcome, QubitState)> = (0..10_000)
            .map(|i| {
                if i % 10 == 0 {
                    (HeraldOutcome::Fail, QubitState::Excited)
                } else {
                    (HeraldOutcome::Pass, QubitState::Ground)
                }
            })
            .collect();
        let (states, report) = herald_and_delay(&herald, 50e-6, 1e-6, 0.0, 7, 0);
        assert_eq!(report.kept, 9000);
        assert_eq!(report.p_post, 0.0);
        assert_eq!(states.iter().filter(|s| s.is_none()).count(), 1000);
    }

    #[test]
    fn reexcitation_rate_sets_p_post() {
        let herald = vec![(HeraldOutcome::Pass, QubitState::Ground); 200_000];
        let rate = 3e3; // 1 - exp(-rate * 1 us) = 0.3%
        let (_, report) = herald_and_delay(&herald, 50e-6, 1e-6, rate, 11, 1);
        let expected = 1.0 - (-rate * 1e-6f64).exp();
        assert!(
            (report.p_post - expected).abs() < 3e-4,
            "p_post {} vs expected {expected}",
            report.p_post
        );
    }

    #[test]
    fn excited_survivor_can_decay() {
        let herald = vec![(HeraldOutcome::Pass, QubitState::Excited); 100_000];
        // long delay: almost everything decays
        let (_, report) = herald_and_delay(&herald, 1e-6, 20e-6, 0.0, 3, 2);
        assert!(report.p_post < 1e-3);
    }
}
