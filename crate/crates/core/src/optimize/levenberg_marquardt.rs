//! Damped least squares with analytic Jacobian.

use super::OptimizeError;
use nalgebra::{DMatrix, DVector};

#[derive(Debug, Clone)]
pub struct LmOptions {
    pub max_iterations: usize,
    /// Converged when the relative cost decrease falls below this.
    pub cost_tol: f64,
    /// Converged when the step is this small relative to the parameters.
    pub step_tol: f64,
    pub initial_lambda: f64,
}

impl Default for LmOptions {
    fn default() -> Self {
        Self { max_iterations: 200, cost_tol: 1e-12, step_tol: 1e-12, initial_lambda: 1e-3 }
    }
}

#[derive(Debug, Clone)]
pub struct LeastSquaresFit {
    pub params: Vec<f64>,
    /// Sum of weighted squared residuals at the solution.
    pub cost: f64,
    /// 1-sigma parameter errors from the scaled covariance.
    pub errors: Vec<f64>,
    /// Covariance of the parameters (row-major).
    pub covariance: Vec<f64>,
    pub iterations: usize,
    /// Cost after each accepted step.
    pub trace: Vec<f64>,
}

/// Minimizes `sum_i w_i * (y_i - model(x_i, p))^2` by Levenberg-Marquardt
/// damping. `model_and_jacobian(p, i)` returns the model value and its
/// gradient with respect to the parameters at data point `i`.
pub fn fit_least_squares<F>(
    y: &[f64],
    weights: &[f64],
    p0: &[f64],
    mut model_and_jacobian: F,
    options: &LmOptions,
) -> Result<LeastSquaresFit, OptimizeError>
where
    F: FnMut(&[f64], usize) -> (f64, Vec<f64>),
{
    let m = y.len();
    let n = p0.len();
    if m < n {
        return Err(OptimizeError::InvalidInput(format!(
            "need at least as many points ({m}) as parameters ({n})"
        )));
    }
    if weights.len() != m {
        return Err(OptimizeError::InvalidInput("weights length mismatch".into()));
    }

    let residuals_and_jacobian = |p: &[f64], f: &mut F| {
        let mut r = DVector::zeros(m);
        let mut jac = DMatrix::zeros(m, n);
        for i in 0..m {
            let (value, grad) = f(p, i);
            let w = weights[i].sqrt();
            r[i] = w * (y[i] - value);
            for k in 0..n {
                jac[(i, k)] = -w * grad[k];
            }
        }
        (r, jac)
    };

    let mut params = DVector::from_column_slice(p0);
    let (mut residuals, mut jacobian) = residuals_and_jacobian(params.as_slice(), &mut model_and_jacobian);
    let mut cost = residuals.norm_squared();
    let mut lambda = options.initial_lambda;
    let mut trace = vec![cost];
    let mut iterations = 0;
    let mut converged = false;

    while iterations < options.max_iterations {
        iterations += 1;
        let jt = jacobian.transpose();
        let mut normal = &jt * &jacobian;
        let gradient = &jt * &residuals;
        for k in 0..n {
            normal[(k, k)] *= 1.0 + lambda;
        }
        let step = match normal.clone().lu().solve(&(-&gradient)) {
            Some(s) => s,
            None => {
                lambda *= 10.0;
                continue;
            }
        };
        let candidate = &params + &step;
        let (r_new, j_new) = residuals_and_jacobian(candidate.as_slice(), &mut model_and_jacobian);
        let cost_new = r_new.norm_squared();
        if cost_new < cost {
            let rel_drop = (cost - cost_new) / cost.max(1e-300);
            let rel_step = step.norm() / (params.norm() + 1e-300);
            params = candidate;
            residuals = r_new;
            jacobian = j_new;
            cost = cost_new;
            trace.push(cost);
            lambda = (lambda * 0.3).max(1e-12);
            if rel_drop < options.cost_tol || rel_step < options.step_tol {
                converged = true;
                break;
            }
        } else {
            lambda *= 10.0;
            if lambda > 1e12 {
                converged = true; // damping exhausted: a (local) minimum
                break;
            }
        }
    }

    if !converged && iterations >= options.max_iterations {
        return Err(OptimizeError::FitFailure { iterations, cost });
    }

    // covariance = s^2 * (J^T J)^-1 with s^2 the reduced chi-square
    let jt = jacobian.transpose();
    let normal = &jt * &jacobian;
    let dof = (m - n).max(1) as f64;
    let scale = cost / dof;
    let (errors, covariance) = match normal.try_inverse() {
        Some(inv) => {
            let cov: Vec<f64> = (0..n)
                .flat_map(|i| (0..n).map(move |k| (i, k)))
                .map(|(i, k)| inv[(i, k)] * scale)
                .collect();
            let errs = (0..n).map(|i| (inv[(i, i)] * scale).max(0.0).sqrt()).collect();
            (errs, cov)
        }
        None => (vec![f64::NAN; n], vec![f64::NAN; n * n]),
    };

    Ok(LeastSquaresFit {
        params: params.as_slice().to_vec(),
        cost,
        errors,
        covariance,
        iterations,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn recovers_exponential_decay() {
        // y = a * exp(-b x); exact data, exact Jacobian
        let (a, b) = (0.93, 2.4);
        let xs: Vec<f64> = (0..30).map(|i| i as f64 * 0.05).collect();
        let ys: Vec<f64> = xs.iter().map(|x| a * (-b * x).exp()).collect();
        let w = vec![1.0; xs.len()];
        let fit = fit_least_squares(
            &ys,
            &w,
            &[0.5, 1.0],
            |p, i| {
                let e = (-p[1] * xs[i]).exp();
                (p[0] * e, vec![e, -p[0] * xs[i] * e])
            },
            &LmOptions::default(),
        )
        .unwrap();
        assert_relative_eq!(fit.params[0], a, max_relative = 1e-8);
        assert_relative_eq!(fit.params[1], b, max_relative = 1e-8);
        assert!(fit.cost < 1e-18);
    }

    #[test]
    fn cost_trace_is_monotone() {
        let xs: Vec<f64> = (0..20).map(|i| i as f64 * 0.1).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x + 1.0 + 0.01 * (x * 50.0).sin()).collect();
        let w = vec![1.0; xs.len()];
        let fit = fit_least_squares(
            &ys,
            &w,
            &[0.0, 0.0],
            |p, i| (p[0] * xs[i] + p[1], vec![xs[i], 1.0]),
            &LmOptions::default(),
        )
        .unwrap();
        for pair in fit.trace.windows(2) {
            assert!(pair[1] <= pair[0]);
        }
    }

    #[test]
    fn underdetermined_fit_rejected() {
        let r = fit_least_squares(
            &[1.0],
            &[1.0],
            &[0.0, 0.0],
            |_, _| (0.0, vec![0.0, 0.0]),
            &LmOptions::default(),
        );
        assert!(r.is_err());
    }
}
