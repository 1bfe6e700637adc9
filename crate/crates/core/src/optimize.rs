//! Derivative-free multi-start Nelder–Mead.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub max_evals: usize,
    /// Absolute spread of simplex values at which a restart stops.
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            restarts: 8,
            max_evals: 2000,
            tolerance: 1e-10,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeResult {
    pub params: Vec<f64>,
    pub value: f64,
    /// Final value of every restart, in start order.
    pub restart_values: Vec<f64>,
    pub evaluations: usize,
}

/// Minimise `f` from `cfg.restarts` uniform starts in [-pi, pi]^dim.
/// Non-finite objective values are treated as +inf.
pub fn nelder_mead_multistart<F>(f: F, dim: usize, cfg: &OptimizerConfig) -> OptimizeResult
where
    F: Fn(&[f64]) -> f64,
{
    let pi = std::f64::consts::PI;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut restart_values = Vec::with_capacity(cfg.restarts.max(1));
    let mut evaluations = 0;
    for _ in 0..cfg.restarts.max(1) {
        let start: Vec<f64> = (0..dim).map(|_| rng.gen_range(-pi..pi)).collect();
        let (x, v, used) = nelder_mead(&f, &start, 0.6, cfg.max_evals, cfg.tolerance);
        evaluations += used;
        restart_values.push(v);
        if best.as_ref().is_none_or(|(_, bv)| v < *bv) {
            best = Some((x, v));
        }
    }
    let (params, value) = best.expect("at least one restart");
    OptimizeResult {
        params,
        value,
        restart_values,
        evaluations,
    }
}

/// Single Nelder–Mead run. Returns (argmin, min, evaluations used).
pub fn nelder_mead<F>(
    f: &F,
    start: &[f64],
    scale: f64,
    max_evals: usize,
    tol: f64,
) -> (Vec<f64>, f64, usize)
where
    F: Fn(&[f64]) -> f64,
{
    let dim = start.len();
    let eval = |x: &[f64]| {
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    };
    if dim == 0 {
        return (vec![], eval(start), 1);
    }
    let mut simplex: Vec<Vec<f64>> = vec![start.to_vec()];
    for i in 0..dim {
        let mut p = start.to_vec();
        p[i] += scale;
        simplex.push(p);
    }
    let mut vals: Vec<f64> = simplex.iter().map(|p| eval(p)).collect();
    let mut used = dim + 1;
    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);
    loop {
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        vals = order.iter().map(|&i| vals[i]).collect();
        let spread = vals[dim] - vals[0];
        let width = simplex[1..]
            .iter()
            .flat_map(|p| p.iter().zip(&simplex[0]).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if used >= max_evals || (spread <= tol && width <= 1e-7) {
            break;
        }
        let centroid: Vec<f64> = (0..dim)
            .map(|j| simplex[..dim].iter().map(|p| p[j]).sum::<f64>() / dim as f64)
            .collect();
        let toward = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[dim])
                .map(|(c, w)| c + t * (w - c))
                .collect()
        };
        let xr = toward(-alpha);
        let fr = eval(&xr);
        used += 1;
        if fr < vals[0] {
            let xe = toward(-gamma);
            let fe = eval(&xe);
            used += 1;
            if fe < fr {
                simplex[dim] = xe;
                vals[dim] = fe;
            } else {
                simplex[dim] = xr;
                vals[dim] = fr;
            }
            continue;
        }
        if fr < vals[dim - 1] {
            simplex[dim] = xr;
            vals[dim] = fr;
            continue;
        }
        let (xc, fc) = if fr < vals[dim] {
            let xc = toward(-rho);
            let fc = eval(&xc);
            (xc, fc)
        } else {
            let xc = toward(rho);
            let fc = eval(&xc);
            (xc, fc)
        };
        used += 1;
        if fc < vals[dim].min(fr) {
            simplex[dim] = xc;
            vals[dim] = fc;
            continue;
        }
        for i in 1..=dim {
            let shrunk: Vec<f64> = simplex[0]
                .iter()
                .zip(&simplex[i])
                .map(|(b, p)| b + sigma * (p - b))
                .collect();
            vals[i] = eval(&shrunk);
            simplex[i] = shrunk;
        }
        used += dim;
    }
    (simplex[0].clone(), vals[0], used)
}
