//! Weight specifications, the criticality parameter `c = n * sum(p_i^2)` and
//! regime diagnostics.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Default half-width of the band around `c = 1` treated as critical.
pub const DEFAULT_EPSILON_C: f64 = 0.01;

/// `gamma_witness` at or below this value is flagged as marginal.
pub const MARGINAL_GAMMA: f64 = 0.55;

/// How the probability vector is generated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Model {
    /// `m` equal entries `sqrt(c / (m n))`.
    Uniform { c: f64, m: usize },
    /// `p_i = s * i^(-tau)` for `i = 1..=m`, with `s` fixed by the target `c`.
    #[serde(rename = "powerlaw")]
    PowerLaw { tau: f64, c: f64, m: usize },
    /// Probabilities given verbatim.
    Explicit { values: Vec<f64> },
}

/// A vertex count together with a [`Model`]; the JSON form used by every
/// command-line entry point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightSpec {
    pub n: usize,
    pub model: Model,
}

impl WeightSpec {
    pub fn uniform(n: usize, c: f64, m: usize) -> Self {
        WeightSpec {
            n,
            model: Model::Uniform { c, m },
        }
    }

    pub fn power_law(n: usize, tau: f64, c: f64, m: usize) -> Self {
        WeightSpec {
            n,
            model: Model::PowerLaw { tau, c, m },
        }
    }

    pub fn explicit(n: usize, values: Vec<f64>) -> Self {
        WeightSpec {
            n,
            model: Model::Explicit { values },
        }
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("WeightSpec is always serializable")
    }
}

/// A maximal block of consecutive attributes sharing one probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Run {
    pub value: f64,
    pub len: usize,
}

/// A concrete probability vector for `n` vertices.
///
/// Entries are stored run-length encoded, so uniform families with `m` in
/// the hundreds of millions cost a single run. Index order is preserved.
#[derive(Debug, Clone, PartialEq)]
pub struct AttributeWeights {
    n: usize,
    m: usize,
    runs: Vec<Run>,
    // starts[k] is the index of the first attribute in runs[k]
    starts: Vec<usize>,
    c: f64,
    p_max: f64,
}

impl AttributeWeights {
    /// Builds weights from an explicit vector, validating every entry.
    pub fn new(n: usize, values: &[f64]) -> Result<Self> {
        let mut runs: Vec<Run> = Vec::new();
        for (index, &value) in values.iter().enumerate() {
            check_probability(index, value)?;
            match runs.last_mut() {
                Some(r) if r.value.to_bits() == value.to_bits() => r.len += 1,
                _ => runs.push(Run { value, len: 1 }),
            }
        }
        Self::from_runs(n, runs)
    }

    /// `m` copies of the same probability.
    pub fn constant(n: usize, value: f64, m: usize) -> Result<Self> {
        check_probability(0, value)?;
        Self::from_runs(n, vec![Run { value, len: m }])
    }

    pub fn from_runs(n: usize, runs: Vec<Run>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSpec("n must be at least 1".into()));
        }
        if n > u32::MAX as usize {
            return Err(Error::InvalidSpec(format!(
                "n = {n} exceeds the 32-bit vertex id range"
            )));
        }
        let runs: Vec<Run> = runs.into_iter().filter(|r| r.len > 0).collect();
        let mut starts = Vec::with_capacity(runs.len());
        let mut m = 0usize;
        let mut p_max = 0.0f64;
        for r in &runs {
            check_probability(m, r.value)?;
            starts.push(m);
            m += r.len;
            p_max = p_max.max(r.value);
        }
        if m == 0 {
            return Err(Error::InvalidSpec(
                "at least one attribute is required".into(),
            ));
        }
        let mut w = AttributeWeights {
            n,
            m,
            runs,
            starts,
            c: 0.0,
            p_max,
        };
        w.c = criticality(&w);
        Ok(w)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `n * sum(p_i^2)`.
    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn p_max(&self) -> f64 {
        self.p_max
    }

    pub fn runs(&self) -> &[Run] {
        &self.runs
    }

    /// Probability of attribute `i`. Panics if `i >= m`.
    pub fn get(&self, i: usize) -> f64 {
        assert!(i < self.m, "attribute {i} out of range (m = {})", self.m);
        let k = self.starts.partition_point(|&s| s <= i) - 1;
        self.runs[k].value
    }

    /// All `m` probabilities in index order.
    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.runs
            .iter()
            .flat_map(|r| std::iter::repeat_n(r.value, r.len))
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.iter().collect()
    }

    /// `sum(p_i)`, the expected degree of a vertex in the bipartite graph.
    pub fn total_weight(&self) -> f64 {
        neumaier_sum(self.runs.iter().map(|r| r.len as f64 * r.value))
    }
}

fn check_probability(index: usize, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) {
        return Err(Error::ProbabilityOutOfRange { index, value });
    }
    Ok(())
}

/// Neumaier's variant of Kahan summation.
pub(crate) fn neumaier_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for x in values {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Materializes a [`WeightSpec`].
pub fn build_weights(spec: &WeightSpec) -> Result<AttributeWeights> {
    let n = spec.n;
    if n == 0 {
        return Err(Error::InvalidSpec("n must be at least 1".into()));
    }
    match spec.model {
        Model::Uniform { c, m } => {
            check_target(c)?;
            if m == 0 {
                return Err(Error::InvalidSpec("m must be at least 1".into()));
            }
            let p = (c / (m as f64 * n as f64)).sqrt();
            if p > 1.0 {
                return Err(Error::ProbabilityOutOfRange { index: 0, value: p });
            }
            AttributeWeights::constant(n, p, m)
        }
        Model::PowerLaw { tau, c, m } => {
            check_target(c)?;
            if !(tau > 0.0) || !tau.is_finite() {
                return Err(Error::InvalidSpec(format!(
                    "tau must be positive, got {tau}"
                )));
            }
            if m == 0 {
                return Err(Error::InvalidSpec("m must be at least 1".into()));
            }
            let norm = neumaier_sum((1..=m).map(|i| (i as f64).powf(-2.0 * tau)));
            let scale = (c / (n as f64 * norm)).sqrt();
            // p_1 = scale is the largest entry; refuse instead of clamping
            if scale > 1.0 {
                return Err(Error::ProbabilityOutOfRange {
                    index: 0,
                    value: scale,
                });
            }
            let values: Vec<f64> = (1..=m).map(|i| scale * (i as f64).powf(-tau)).collect();
            AttributeWeights::new(n, &values)
        }
        Model::Explicit { ref values } => {
            if values.is_empty() {
                return Err(Error::InvalidSpec(
                    "explicit weights must be non-empty".into(),
                ));
            }
            AttributeWeights::new(n, values)
        }
    }
}

fn check_target(c: f64) -> Result<()> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::NonPositiveCriticality(c));
    }
    Ok(())
}

/// `n * sum(p_i^2)` with compensated summation.
pub fn criticality(w: &AttributeWeights) -> f64 {
    let sum_sq = neumaier_sum(w.runs.iter().map(|r| r.len as f64 * r.value * r.value));
    w.n as f64 * sum_sq
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Subcritical,
    Critical,
    Supercritical,
}

impl Phase {
    pub fn classify(c: f64, epsilon_c: f64) -> Phase {
        if c < 1.0 - epsilon_c {
            Phase::Subcritical
        } else if c > 1.0 + epsilon_c {
            Phase::Supercritical
        } else {
            Phase::Critical
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub c: f64,
    pub p_max: f64,
    /// `-ln(p_max) / ln(n)`: the largest `gamma` with `p_max <= n^-gamma`.
    pub gamma_witness: Option<f64>,
    pub phase: Phase,
    /// Supercritical with `gamma_witness > 1/2`.
    pub theorem2_hypotheses_met: bool,
}

impl RegimeReport {
    /// The exponent condition holds, but only barely at this `n`.
    pub fn gamma_marginal(&self) -> bool {
        matches!(self.gamma_witness, Some(g) if g > 0.5 && g <= MARGINAL_GAMMA)
    }
}

/// Classifies the phase and checks the supercritical hypotheses.
pub fn regime(w: &AttributeWeights, epsilon_c: f64) -> Result<RegimeReport> {
    if !(epsilon_c > 0.0 && epsilon_c < 0.5) {
        return Err(Error::InvalidArgument(format!(
            "epsilon_c must lie in (0, 0.5), got {epsilon_c}"
        )));
    }
    let c = w.c();
    let p_max = w.p_max();
    let gamma_witness = gamma_witness(p_max, w.n());
    let phase = Phase::classify(c, epsilon_c);
    let theorem2_hypotheses_met =
        phase == Phase::Supercritical && gamma_witness.is_some_and(|g| g > 0.5);
    Ok(RegimeReport {
        c,
        p_max,
        gamma_witness,
        phase,
        theorem2_hypotheses_met,
    })
}

pub(crate) fn gamma_witness(p_max: f64, n: usize) -> Option<f64> {
    if p_max > 0.0 && p_max < 1.0 && n > 1 {
        Some(-p_max.ln() / (n as f64).ln())
    } else {
        None
    }
}
