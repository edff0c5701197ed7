//! Derivative-free local search with random restarts.

use rayon::prelude::*;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::stream_rng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerOptions {
    /// Random restarts, in addition to any caller-supplied starting points.
    pub restarts: usize,
    /// Iteration cap per restart.
    pub max_iterations: usize,
    /// Stop when the simplex values agree to this tolerance.
    pub tolerance: f64,
    /// Edge length of the initial simplex.
    pub initial_step: f64,
    pub seed: u64,
}

impl Default for OptimizerOptions {
    fn default() -> Self {
        Self {
            restarts: 32,
            max_iterations: 2000,
            tolerance: 1e-9,
            initial_step: 0.25,
            seed: 0,
        }
    }
}

/// Result of one local search.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalMinimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Nelder–Mead minimization with dimension-adaptive coefficients.
///
/// Non-finite objective values are treated as `+∞`. After convergence the
/// simplex is rebuilt once around the best vertex with a smaller step, which
/// guards against collapsed simplices.
pub fn nelder_mead<F>(f: &F, x0: &[f64], options: &OptimizerOptions) -> LocalMinimum
where
    F: Fn(&[f64]) -> f64 + ?Sized,
{
    let first = nelder_mead_once(f, x0, options.initial_step, options.max_iterations, options.tolerance);
    if !first.converged || first.iterations >= options.max_iterations {
        return first;
    }
    let budget = options.max_iterations - first.iterations;
    let second = nelder_mead_once(f, &first.x, options.initial_step * 0.1, budget, options.tolerance);
    let iterations = first.iterations + second.iterations;
    if second.value <= first.value {
        LocalMinimum { iterations, ..second }
    } else {
        LocalMinimum { iterations, ..first }
    }
}

fn nelder_mead_once<F>(f: &F, x0: &[f64], step: f64, max_iterations: usize, tolerance: f64) -> LocalMinimum
where
    F: Fn(&[f64]) -> f64 + ?Sized,
{
    let n = x0.len();
    let eval = |x: &[f64]| {
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    };
    if n == 0 {
        return LocalMinimum {
            x: Vec::new(),
            value: eval(x0),
            iterations: 0,
            converged: true,
        };
    }
    let nf = n as f64;
    let (alpha, gamma) = (1.0, 1.0 + 2.0 / nf);
    let (rho, sigma) = (0.75 - 1.0 / (2.0 * nf), 1.0 - 1.0 / nf);

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += step;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| eval(v)).collect();
    let mut order: Vec<usize> = (0..=n).collect();
    let mut iterations = 0;
    let mut converged = false;

    while iterations < max_iterations {
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let (best, worst, second) = (order[0], order[n], order[n - 1]);
        let spread = values[worst] - values[best];
        if spread <= tolerance * values[best].abs().max(1.0) {
            converged = true;
            break;
        }
        iterations += 1;

        let mut centroid = vec![0.0; n];
        for &i in &order[..n] {
            for (c, x) in centroid.iter_mut().zip(&simplex[i]) {
                *c += x / nf;
            }
        }
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[worst])
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let xr = along(alpha);
        let fr = eval(&xr);
        if fr < values[best] {
            let xe = along(alpha * gamma);
            let fe = eval(&xe);
            if fe < fr {
                simplex[worst] = xe;
                values[worst] = fe;
            } else {
                simplex[worst] = xr;
                values[worst] = fr;
            }
            continue;
        }
        if fr < values[second] {
            simplex[worst] = xr;
            values[worst] = fr;
            continue;
        }
        let (xc, fc) = if fr < values[worst] {
            let xc = along(alpha * rho);
            let fc = eval(&xc);
            (xc, fc)
        } else {
            let xc = along(-rho);
            let fc = eval(&xc);
            (xc, fc)
        };
        if fc < values[worst].min(fr) {
            simplex[worst] = xc;
            values[worst] = fc;
            continue;
        }
        let anchor = simplex[best].clone();
        for &i in &order[1..] {
            for (x, a) in simplex[i].iter_mut().zip(&anchor) {
                *x = a + sigma * (*x - a);
            }
            values[i] = eval(&simplex[i]);
        }
    }
    let best = (0..=n).min_by(|&a, &b| values[a].total_cmp(&values[b])).unwrap();
    LocalMinimum {
        x: simplex[best].clone(),
        value: values[best],
        iterations,
        converged,
    }
}

/// Outcome of [`multistart_minimize`].
#[derive(Debug, Clone, PartialEq)]
pub struct MultistartResult {
    /// Best run over every start.
    pub best: LocalMinimum,
    /// Final values of the caller-supplied starts, in order.
    pub seeded_values: Vec<f64>,
    /// Final values of the random restarts, in order.
    pub restart_values: Vec<f64>,
    pub total_iterations: usize,
}

/// Runs [`nelder_mead`] from every supplied start and from `options.restarts`
/// standard Gaussian points of dimension `dim`.
///
/// Restart `i` draws its point from stream `i` of `options.seed`, so results
/// do not depend on scheduling.
pub fn multistart_minimize<F>(f: &F, dim: usize, starts: &[Vec<f64>], options: &OptimizerOptions) -> MultistartResult
where
    F: Fn(&[f64]) -> f64 + Sync + ?Sized,
{
    let seeded: Vec<LocalMinimum> = starts.par_iter().map(|x0| nelder_mead(f, x0, options)).collect();
    let random: Vec<LocalMinimum> = (0..options.restarts)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(options.seed, i as u64);
            let x0: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
            nelder_mead(f, &x0, options)
        })
        .collect();
    let total_iterations = seeded.iter().chain(&random).map(|r| r.iterations).sum();
    let best = seeded
        .iter()
        .chain(&random)
        .min_by(|a, b| a.value.total_cmp(&b.value))
        .cloned()
        .unwrap_or(LocalMinimum {
            x: Vec::new(),
            value: f64::INFINITY,
            iterations: 0,
            converged: false,
        });
    MultistartResult {
        best,
        seeded_values: seeded.iter().map(|r| r.value).collect(),
        restart_values: random.iter().map(|r| r.value).collect(),
        total_iterations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimizes_a_quadratic() {
        let f = |x: &[f64]| (x[0] - 1.0).powi(2) + 3.0 * (x[1] + 2.0).powi(2) + 0.5;
        let r = nelder_mead(&f, &[0.0, 0.0], &OptimizerOptions::default());
        assert!(r.converged);
        assert!((r.value - 0.5).abs() < 1e-8);
        assert!((r.x[0] - 1.0).abs() < 1e-3 && (r.x[1] + 2.0).abs() < 1e-3);
    }

    #[test]
    fn minimizes_rosenbrock() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let opts = OptimizerOptions {
            tolerance: 1e-14,
            ..Default::default()
        };
        let r = nelder_mead(&f, &[-1.2, 1.0], &opts);
        assert!(r.value < 1e-8, "value {}", r.value);
    }

    #[test]
    fn respects_iteration_cap() {
        let f = |x: &[f64]| x.iter().map(|v| v.abs()).sum::<f64>();
        let opts = OptimizerOptions {
            max_iterations: 5,
            ..Default::default()
        };
        let r = nelder_mead(&f, &[3.0; 6], &opts);
        assert!(r.iterations <= 5);
        assert!(!r.converged);
    }

    #[test]
    fn multistart_is_deterministic_and_keeps_the_best() {
        // Two wells; the deeper one is at x = 2.
        let f = |x: &[f64]| ((x[0] + 1.0).powi(2)).min((x[0] - 2.0).powi(2) - 0.5);
        let opts = OptimizerOptions {
            restarts: 8,
            seed: 3,
            ..Default::default()
        };
        let a = multistart_minimize(&f, 1, &[vec![-1.0]], &opts);
        let b = multistart_minimize(&f, 1, &[vec![-1.0]], &opts);
        assert_eq!(a, b);
        assert!(a.best.value <= -0.5 + 1e-9);
        assert!(a.seeded_values[0] >= -1e-9);
        assert!(a.restart_values.iter().all(|&v| v >= a.best.value));
    }
}
