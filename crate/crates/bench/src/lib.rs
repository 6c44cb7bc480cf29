//! Shared fixtures for the criterion benchmarks.

use rigphase::{build_weights, AttributeWeights, WeightSpec};

/// Uniform weights with `m = n` at criticality `c`.
pub fn linear_uniform(n: usize, c: f64) -> AttributeWeights {
    build_weights(&WeightSpec::uniform(n, c, n)).expect("valid uniform spec")
}

/// Uniform weights with `m = round(sqrt(n))`.
pub fn sqrt_uniform(n: usize, c: f64) -> AttributeWeights {
    let m = (n as f64).sqrt().round() as usize;
    build_weights(&WeightSpec::uniform(n, c, m)).expect("valid uniform spec")
}
