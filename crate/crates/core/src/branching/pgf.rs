use serde::Serialize;

use crate::model::{AttributeWeights, DEFAULT_EPSILON_C};

/// Right-hand side of the extinction equation, evaluated in log space:
/// `exp(sum_i log1p(-p_i * (1 - (1 - p_i (1 - x))^n)))`.
///
/// Equal consecutive probabilities are evaluated once per run, so uniform
/// vectors cost O(1) regardless of `m`.
pub fn gw_map(w: &AttributeWeights, x: f64) -> f64 {
    let n = w.n() as f64;
    let y = 1.0 - x;
    let mut log_g = 0.0;
    for r in w.runs() {
        let p = r.value;
        if p == 0.0 {
            continue;
        }
        // 1 - (1 - p y)^n, without cancellation near y = 0
        let reached = -(n * (-p * y).ln_1p()).exp_m1();
        log_g += r.len as f64 * (-p * reached).ln_1p();
    }
    log_g.exp()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// Criticalities `c <= 1 + epsilon_c` are answered with `rho = 1`.
    pub epsilon_c: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: 1e-12,
            max_iter: 1_000_000,
            epsilon_c: DEFAULT_EPSILON_C,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExtinctionSolution {
    pub rho: f64,
    pub iterations: usize,
    /// `|g(rho) - rho|`.
    pub residual: f64,
    pub converged: bool,
    /// `1 < c <= 1 + epsilon_c`: reported as certain extinction.
    pub critical_band: bool,
}

/// The iterates `g(0), g(g(0)), ...`, which increase monotonically to the
/// least fixed point.
pub struct FixedPointIter<'a> {
    weights: &'a AttributeWeights,
    x: f64,
}

impl<'a> FixedPointIter<'a> {
    pub fn new(weights: &'a AttributeWeights) -> Self {
        FixedPointIter { weights, x: 0.0 }
    }
}

impl Iterator for FixedPointIter<'_> {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        self.x = gw_map(self.weights, self.x);
        Some(self.x)
    }
}

pub fn extinction_probability(
    w: &AttributeWeights,
    tol: f64,
    max_iter: usize,
) -> ExtinctionSolution {
    extinction_probability_with(
        w,
        &SolverOptions {
            tol,
            max_iter,
            ..SolverOptions::default()
        },
    )
}

/// Least fixed point of [`gw_map`] by iteration from 0.
pub fn extinction_probability_with(
    w: &AttributeWeights,
    opts: &SolverOptions,
) -> ExtinctionSolution {
    assert!(
        opts.tol > 0.0 && opts.max_iter >= 1,
        "tol must be positive and max_iter at least 1"
    );
    let c = w.c();
    if c <= 1.0 + opts.epsilon_c {
        return ExtinctionSolution {
            rho: 1.0,
            iterations: 0,
            residual: 0.0,
            converged: true,
            critical_band: c > 1.0,
        };
    }
    let mut x = 0.0;
    let mut iterations = 0;
    let mut converged = false;
    for next in FixedPointIter::new(w).take(opts.max_iter) {
        iterations += 1;
        debug_assert!(
            next <= 1.0 && next + 4.0 * f64::EPSILON >= x,
            "iteration left [x_k, 1]: {x} -> {next}"
        );
        let step = (next - x).abs();
        x = next;
        if step <= opts.tol {
            converged = true;
            break;
        }
    }
    let residual = (gw_map(w, x) - x).abs();
    ExtinctionSolution {
        rho: x,
        iterations,
        residual,
        converged,
        critical_band: false,
    }
}
