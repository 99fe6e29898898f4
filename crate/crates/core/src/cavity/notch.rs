//! Interferometric notch synthesis.
//!
//! The probed qubit's emission reaches the dissipative environment through
//! the resonator path and through the cross couplings `c_x1`, `c_xq`. At a
//! transmission zero the paths interfere destructively and the real part of
//! the environment admittance seen from the junction collapses. The search
//! tunes the two signed couplings to minimize `Re Y` at the prescribed
//! frequencies.

use super::{
    build_configuration, CavityError, CouplingNetwork, FilterConfiguration, ReentrantCavityParams,
    ResonatorCircuit,
};
use crate::network::{input_admittance, FrequencySweep, Netlist};
use crate::optimize::{golden_minimum, minimize, NelderMeadOptions};
use crate::readout::QubitParams;

/// Search bounds for the signed cross couplings, farads.
#[derive(Debug, Clone, Copy)]
pub struct NotchTunables {
    pub c_x1: (f64, f64),
    pub c_xq: (f64, f64),
}

impl Default for NotchTunables {
    fn default() -> Self {
        Self { c_x1: (-5e-15, 5e-15), c_xq: (-5e-15, 5e-15) }
    }
}

/// Result of a notch placement run.
#[derive(Debug, Clone)]
pub struct NotchOutcome {
    /// Coupling network with the optimized `c_x1`, `c_xq` installed.
    pub network: CouplingNetwork,
    /// Local `Re Y` minima nearest each target, Hz.
    pub achieved_hz: Vec<f64>,
    /// Suppression of `Re Y` at each achieved zero relative to the
    /// no-interference configuration, dB (positive = rejection).
    pub rejection_db: Vec<f64>,
    /// Best objective value after each accepted search iteration.
    pub objective_trace: Vec<f64>,
    pub evaluations: usize,
}

fn junction_re_y(netlist: &Netlist, freq_hz: f64) -> Result<f64, CavityError> {
    // two-point sweep: only the first frequency is used
    let sweep = FrequencySweep { start_hz: freq_hz, stop_hz: freq_hz * (1.0 + 1e-9), points: 2 };
    let y = input_admittance(netlist, 0, &sweep)?;
    Ok(y[0].re)
}

/// Places `Re Y` zeros at `targets_hz` (one or two frequencies) by tuning the
/// cross couplings of the probed qubit cell. The search is a deterministic
/// coarse grid scan followed by bounded Nelder-Mead descent; achieved zeros
/// are located by a dense local sweep plus golden-section refinement around
/// each target.
pub fn place_notches(
    targets_hz: &[f64],
    qubits: &[QubitParams],
    circuit: &ResonatorCircuit,
    network: &CouplingNetwork,
    cavity: &ReentrantCavityParams,
    probed: usize,
    tunables: NotchTunables,
) -> Result<NotchOutcome, CavityError> {
    if targets_hz.is_empty() || targets_hz.len() > 2 {
        return Err(CavityError::InvalidParams(format!(
            "need one or two notch targets, got {}",
            targets_hz.len()
        )));
    }
    let x_reference_hz = targets_hz.iter().product::<f64>().powf(1.0 / targets_hz.len() as f64);

    // baseline without interference, for normalization and rejection figures
    let base = build_configuration(
        FilterConfiguration::FilteredNoInterference,
        qubits,
        circuit,
        network,
        cavity,
        probed,
    )?;
    let baseline: Vec<f64> = targets_hz
        .iter()
        .map(|&f| junction_re_y(&base, f))
        .collect::<Result<_, _>>()?;
    if baseline.iter().any(|&b| !(b > 0.0)) {
        return Err(CavityError::InvalidParams(
            "baseline Re Y must be positive at the notch targets".into(),
        ));
    }

    let with_couplings = |c_x1: f64, c_xq: f64| -> Result<Netlist, CavityError> {
        let mut tuned = network.clone();
        tuned.c_x1 = c_x1;
        tuned.c_xq = c_xq;
        tuned.x_reference_hz = x_reference_hz;
        build_configuration(
            FilterConfiguration::FilteredWithInterference,
            qubits,
            circuit,
            &tuned,
            cavity,
            probed,
        )
    };

    // normalized objective: mean of Re Y ratios to the baseline at the targets
    let objective = |x: &[f64]| -> f64 {
        let netlist = match with_couplings(x[0], x[1]) {
            Ok(n) => n,
            Err(_) => return f64::MAX,
        };
        let mut total = 0.0;
        for (&f, &b) in targets_hz.iter().zip(&baseline) {
            match junction_re_y(&netlist, f) {
                Ok(re) => total += (re / b).max(0.0),
                Err(_) => return f64::MAX,
            }
        }
        total / targets_hz.len() as f64
    };

    // deterministic coarse scan over the signed box, then simplex descent
    let grid = 9;
    let mut best = (0.0, 0.0, objective(&[0.0, 0.0]));
    let mut evaluations = 1;
    for i in 0..grid {
        for k in 0..grid {
            let cx1 = tunables.c_x1.0
                + (tunables.c_x1.1 - tunables.c_x1.0) * i as f64 / (grid - 1) as f64;
            let cxq = tunables.c_xq.0
                + (tunables.c_xq.1 - tunables.c_xq.0) * k as f64 / (grid - 1) as f64;
            let v = objective(&[cx1, cxq]);
            evaluations += 1;
            if v < best.2 {
                best = (cx1, cxq, v);
            }
        }
    }
    let options = NelderMeadOptions {
        initial_step: 0.15,
        zero_step: 0.02e-15,
        max_evals: 600,
        f_tol: 1e-14,
    };
    let result = minimize(
        objective,
        &[best.0, best.1],
        &[tunables.c_x1, tunables.c_xq],
        &options,
    )?;
    evaluations += result.evaluations;

    // notches must suppress Re Y by at least 20 dB relative to baseline
    let threshold = 1e-2;
    if !(result.value < threshold) {
        return Err(CavityError::InfeasibleNotch {
            best_objective: result.value,
            threshold,
            c_x1: result.x[0],
            c_xq: result.x[1],
        });
    }

    let netlist = with_couplings(result.x[0], result.x[1])?;
    let mut achieved_hz = Vec::new();
    let mut rejection_db = Vec::new();
    for (&target, &base_re) in targets_hz.iter().zip(&baseline) {
        let (lo, hi) = (target * 0.97, target * 1.03);
        let sweep = FrequencySweep { start_hz: lo, stop_hz: hi, points: 601 };
        let ys = input_admittance(&netlist, 0, &sweep)?;
        let freqs = sweep.frequencies();
        let coarse = freqs
            .iter()
            .zip(&ys)
            .min_by(|a, b| a.1.re.total_cmp(&b.1.re))
            .map(|(f, _)| *f)
            .unwrap();
        let step = (hi - lo) / 600.0;
        let refined = golden_minimum(
            |f| junction_re_y(&netlist, f).unwrap_or(f64::MAX),
            coarse - step,
            coarse + step,
            1e3,
        );
        let re_min = junction_re_y(&netlist, refined)?.max(1e-300);
        achieved_hz.push(refined);
        rejection_db.push(10.0 * (base_re / re_min).log10());
    }

    let mut tuned = network.clone();
    tuned.c_x1 = result.x[0];
    tuned.c_xq = result.x[1];
    tuned.x_reference_hz = x_reference_hz;
    Ok(NotchOutcome {
        network: tuned,
        achieved_hz,
        rejection_db,
        objective_trace: result.trace,
        evaluations,
    })
}
