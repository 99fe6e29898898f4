//! Small deterministic optimizers used for circuit calibration and model
//! fitting: bounded Nelder-Mead simplex search, damped Gauss-Newton
//! (Levenberg-Marquardt) least squares, and 1D root/minimum refinement.

mod levenberg_marquardt;
mod nelder_mead;
mod root;

pub use levenberg_marquardt::{fit_least_squares, LeastSquaresFit, LmOptions};
pub use nelder_mead::{minimize, NelderMeadOptions, NelderMeadResult};
pub use root::{bisect_root, golden_minimum};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum OptimizeError {
    #[error("no sign change in bracket [{0}, {1}]")]
    NoBracket(f64, f64),
    #[error("fit failed to converge after {iterations} iterations (cost {cost:.3e})")]
    FitFailure { iterations: usize, cost: f64 },
    #[error("invalid optimizer input: {0}")]
    InvalidInput(String),
}
