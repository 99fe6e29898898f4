//! Bounded Nelder-Mead simplex minimization.
//!
//! Deterministic given the starting point and options: the initial simplex is
//! built by displacing each coordinate by a fixed relative step, and all
//! candidate points are clamped to the box bounds.

use super::OptimizeError;

#[derive(Debug, Clone)]
pub struct NelderMeadOptions {
    /// Relative displacement used to build the initial simplex.
    pub initial_step: f64,
    /// Absolute displacement used when a coordinate starts at zero.
    pub zero_step: f64,
    pub max_evals: usize,
    /// Converged when the simplex spread of objective values falls below this.
    pub f_tol: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self { initial_step: 0.1, zero_step: 1e-3, max_evals: 2000, f_tol: 1e-12 }
    }
}

#[derive(Debug, Clone)]
pub struct NelderMeadResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    /// Objective value after each accepted iteration, for convergence traces.
    pub trace: Vec<f64>,
}

fn clamp(x: &mut [f64], bounds: &[(f64, f64)]) {
    for (xi, &(lo, hi)) in x.iter_mut().zip(bounds) {
        *xi = xi.clamp(lo, hi);
    }
}

/// Minimizes `f` over the box `bounds`, starting from `x0`.
pub fn minimize<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    x0: &[f64],
    bounds: &[(f64, f64)],
    options: &NelderMeadOptions,
) -> Result<NelderMeadResult, OptimizeError> {
    let n = x0.len();
    if n == 0 || bounds.len() != n {
        return Err(OptimizeError::InvalidInput(format!(
            "dimension mismatch: {} parameters, {} bounds",
            n,
            bounds.len()
        )));
    }
    for (i, &(lo, hi)) in bounds.iter().enumerate() {
        if !(lo <= hi) {
            return Err(OptimizeError::InvalidInput(format!("bounds[{i}] inverted: [{lo}, {hi}]")));
        }
    }

    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        f(x)
    };

    // initial simplex: x0 plus one displaced vertex per coordinate
    let mut start = x0.to_vec();
    clamp(&mut start, bounds);
    let mut simplex: Vec<Vec<f64>> = vec![start.clone()];
    for i in 0..n {
        let mut v = start.clone();
        let step = if v[i] != 0.0 { v[i].abs() * options.initial_step } else { options.zero_step };
        // step away from the nearer bound so the vertex stays distinct
        v[i] = if v[i] + step <= bounds[i].1 { v[i] + step } else { v[i] - step };
        clamp(&mut v, bounds);
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| eval(v, &mut evals)).collect();
    let mut trace = Vec::new();

    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);
    while evals < options.max_evals {
        // order best -> worst
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let reordered: Vec<Vec<f64>> = order.iter().map(|&i| simplex[i].clone()).collect();
        let revalues: Vec<f64> = order.iter().map(|&i| values[i]).collect();
        simplex = reordered;
        values = revalues;
        trace.push(values[0]);

        if (values[n] - values[0]).abs() <= options.f_tol * (1.0 + values[0].abs()) {
            break;
        }

        // centroid of all but the worst
        let mut centroid = vec![0.0; n];
        for v in &simplex[..n] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / n as f64;
            }
        }

        let blend = |a: &[f64], b: &[f64], t: f64| -> Vec<f64> {
            let mut out: Vec<f64> =
                a.iter().zip(b).map(|(ai, bi)| ai + t * (bi - ai)).collect();
            clamp(&mut out, bounds);
            out
        };

        let reflected = blend(&centroid, &simplex[n], -alpha);
        let f_r = eval(&reflected, &mut evals);
        if f_r < values[0] {
            let expanded = blend(&centroid, &simplex[n], -gamma);
            let f_e = eval(&expanded, &mut evals);
            if f_e < f_r {
                simplex[n] = expanded;
                values[n] = f_e;
            } else {
                simplex[n] = reflected;
                values[n] = f_r;
            }
        } else if f_r < values[n - 1] {
            simplex[n] = reflected;
            values[n] = f_r;
        } else {
            let contracted = if f_r < values[n] {
                blend(&centroid, &reflected, rho)
            } else {
                blend(&centroid, &simplex[n], rho)
            };
            let f_c = eval(&contracted, &mut evals);
            if f_c < values[n].min(f_r) {
                simplex[n] = contracted;
                values[n] = f_c;
            } else {
                // shrink toward the best vertex
                for i in 1..=n {
                    simplex[i] = blend(&simplex[0], &simplex[i], sigma);
                    values[i] = eval(&simplex[i], &mut evals);
                }
            }
        }
    }

    let best = (0..=n).min_by(|&a, &b| values[a].total_cmp(&values[b])).unwrap();
    Ok(NelderMeadResult {
        x: simplex[best].clone(),
        value: values[best],
        evaluations: evals,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn quadratic_bowl() {
        let f = |x: &[f64]| (x[0] - 1.5).powi(2) + 3.0 * (x[1] + 0.5).powi(2);
        let r = minimize(
            f,
            &[0.0, 0.0],
            &[(-10.0, 10.0), (-10.0, 10.0)],
            &NelderMeadOptions::default(),
        )
        .unwrap();
        assert_relative_eq!(r.x[0], 1.5, epsilon = 1e-5);
        assert_relative_eq!(r.x[1], -0.5, epsilon = 1e-5);
    }

    #[test]
    fn respects_bounds() {
        let f = |x: &[f64]| (x[0] - 5.0).powi(2);
        let r = minimize(f, &[0.5], &[(0.0, 1.0)], &NelderMeadOptions::default()).unwrap();
        assert_relative_eq!(r.x[0], 1.0, epsilon = 1e-8);
    }

    #[test]
    fn rosenbrock_2d() {
        let f = |x: &[f64]| {
            100.0 * (x[1] - x[0] * x[0]).powi(2) + (1.0 - x[0]).powi(2)
        };
        let opts = NelderMeadOptions { max_evals: 5000, ..Default::default() };
        let r = minimize(f, &[-1.2, 1.0], &[(-5.0, 5.0), (-5.0, 5.0)], &opts).unwrap();
        assert_relative_eq!(r.x[0], 1.0, epsilon = 1e-3);
        assert_relative_eq!(r.x[1], 1.0, epsilon = 1e-3);
    }

    #[test]
    fn deterministic_given_same_start() {
        let f = |x: &[f64]| x[0].sin() + (x[1] * 0.7).cos();
        let opts = NelderMeadOptions::default();
        let bounds = [(-3.0, 3.0), (-3.0, 3.0)];
        let a = minimize(f, &[0.3, 0.3], &bounds, &opts).unwrap();
        let b = minimize(f, &[0.3, 0.3], &bounds, &opts).unwrap();
        assert_eq!(a.x, b.x);
        assert_eq!(a.evaluations, b.evaluations);
    }
}
