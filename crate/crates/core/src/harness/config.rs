use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::branching::SolverOptions;
use crate::model::{build_weights, AttributeWeights, WeightSpec, DEFAULT_EPSILON_C};
use crate::{Error, Result};

/// Shape of the probability vector, independent of `m` and `c`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Shape {
    Uniform,
    #[serde(rename = "powerlaw")]
    PowerLaw {
        tau: f64,
    },
}

impl Shape {
    /// Weights with `m` attributes at criticality `c`. `c = 0` gives the
    /// all-zero vector.
    pub fn weights(&self, n: usize, m: usize, c: f64) -> Result<AttributeWeights> {
        if c == 0.0 {
            if m == 0 {
                return Err(Error::InvalidSpec("m must be at least 1".into()));
            }
            return AttributeWeights::constant(n, 0.0, m);
        }
        let spec = match *self {
            Shape::Uniform => WeightSpec::uniform(n, c, m),
            Shape::PowerLaw { tau } => WeightSpec::power_law(n, tau, c, m),
        };
        build_weights(&spec)
    }
}

/// Number of attributes as a function of `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AttrCount {
    Fixed(usize),
    /// `m = round(n^alpha)`.
    Power {
        alpha: f64,
    },
    /// `m = round(beta n)`.
    Linear {
        beta: f64,
    },
}

impl AttrCount {
    pub fn resolve(&self, n: usize) -> usize {
        match *self {
            AttrCount::Fixed(m) => m,
            AttrCount::Power { alpha } => ((n as f64).powf(alpha).round() as usize).max(1),
            AttrCount::Linear { beta } => ((beta * n as f64).round() as usize).max(1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Family {
    pub shape: Shape,
    pub m: AttrCount,
}

/// Constants hidden by the asymptotic statements.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    /// Small components must stay below `k_log * max(n p ln n, ln n)`.
    pub k_log: f64,
    /// The giant must reach `kappa * min(1 / p, n)`.
    pub kappa: f64,
    /// Allowed mean gap between `L1 / n` and `1 - rho`.
    pub delta: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        // Calibrated on uniform sweeps with 10 to 20 trials per point (3 at n = 1e6):
        // k_log: at n = 1e5, c = 0.5 the largest L1 / max(np ln n, ln n) was
        //   4.3 for m = n and 1.4 for m = sqrt(n).
        // kappa: at c = 2 the smallest L1 p was 0.39 (m = sqrt(n), n = 1e3)
        //   over m in {sqrt(n), n} and n in {1e3, ..., 1e6}.
        // delta: at m = n, c = 2 the mean |L1/n - (1 - rho)| was 2.6e-3 at
        //   n = 1e5 and 2.1e-2 at n = 1e3, so 0.02 is meant for n >= 1e4.
        Thresholds {
            k_log: 50.0,
            kappa: 0.1,
            delta: 0.02,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Outputs {
    pub csv: Option<PathBuf>,
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
struct SolverConfig {
    tol: f64,
    max_iter: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        let d = SolverOptions::default();
        SolverConfig {
            tol: d.tol,
            max_iter: d.max_iter,
        }
    }
}

fn default_epsilon_c() -> f64 {
    DEFAULT_EPSILON_C
}

/// A sweep of `steps` evenly spaced criticalities in `[c_min, c_max]`,
/// with `trials_per_point` samples each.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub n: usize,
    pub family: Family,
    pub c_min: f64,
    pub c_max: f64,
    pub steps: usize,
    pub trials_per_point: usize,
    pub master_seed: u64,
    #[serde(default = "default_epsilon_c")]
    pub epsilon_c: f64,
    #[serde(default)]
    pub thresholds: Thresholds,
    /// Fill the `wall_ms` column. Off by default so output is reproducible.
    #[serde(default)]
    pub record_timing: bool,
    #[serde(default)]
    solver: SolverConfig,
    #[serde(default)]
    pub outputs: Outputs,
}

impl SweepConfig {
    pub fn new(
        n: usize,
        family: Family,
        c_min: f64,
        c_max: f64,
        steps: usize,
        trials_per_point: usize,
        master_seed: u64,
    ) -> Self {
        SweepConfig {
            n,
            family,
            c_min,
            c_max,
            steps,
            trials_per_point,
            master_seed,
            epsilon_c: DEFAULT_EPSILON_C,
            thresholds: Thresholds::default(),
            record_timing: false,
            solver: SolverConfig::default(),
            outputs: Outputs::default(),
        }
    }

    /// Uniform weights with `m = n^alpha`, `alpha < 1`.
    pub fn example1(
        n: usize,
        alpha: f64,
        c_min: f64,
        c_max: f64,
        steps: usize,
        trials: usize,
        seed: u64,
    ) -> Self {
        let family = Family {
            shape: Shape::Uniform,
            m: AttrCount::Power { alpha },
        };
        Self::new(n, family, c_min, c_max, steps, trials, seed)
    }

    /// Uniform weights with `m = beta n`.
    pub fn example2(
        n: usize,
        beta: f64,
        c_min: f64,
        c_max: f64,
        steps: usize,
        trials: usize,
        seed: u64,
    ) -> Self {
        let family = Family {
            shape: Shape::Uniform,
            m: AttrCount::Linear { beta },
        };
        Self::new(n, family, c_min, c_max, steps, trials, seed)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.into(),
            source,
        })?;
        let cfg: SweepConfig = serde_json::from_str(&text).map_err(|source| Error::Json {
            path: path.into(),
            source,
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSpec(msg));
        if self.n == 0 {
            return bad("n must be at least 1".into());
        }
        if self.steps == 0 || self.trials_per_point == 0 {
            return bad("steps and trials_per_point must be at least 1".into());
        }
        if !(self.c_min >= 0.0) || !self.c_max.is_finite() {
            return bad(format!(
                "c range [{}, {}] must be finite and non-negative",
                self.c_min, self.c_max
            ));
        }
        if self.c_min > self.c_max || (self.steps > 1 && self.c_min == self.c_max) {
            return bad(format!(
                "need c_min < c_max for {} steps, got [{}, {}]",
                self.steps, self.c_min, self.c_max
            ));
        }
        if !(self.epsilon_c > 0.0 && self.epsilon_c < 0.5) {
            return bad(format!(
                "epsilon_c must lie in (0, 0.5), got {}",
                self.epsilon_c
            ));
        }
        if self.m() == 0 {
            return bad("m resolves to 0".into());
        }
        Ok(())
    }

    pub fn m(&self) -> usize {
        self.family.m.resolve(self.n)
    }

    pub fn c_points(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.c_min];
        }
        let span = self.c_max - self.c_min;
        (0..self.steps)
            .map(|k| {
                if k + 1 == self.steps {
                    self.c_max
                } else {
                    self.c_min + span * k as f64 / (self.steps - 1) as f64
                }
            })
            .collect()
    }

    pub fn solver_options(&self) -> SolverOptions {
        SolverOptions {
            tol: self.solver.tol,
            max_iter: self.solver.max_iter,
            epsilon_c: self.epsilon_c,
        }
    }

    pub fn hypotheses(&self) -> Hypotheses {
        Hypotheses {
            shape: self.family.shape.clone(),
            epsilon_c: self.epsilon_c,
            thresholds: self.thresholds,
            theorems: default_theorems(),
        }
    }
}

fn default_theorems() -> Vec<u8> {
    vec![1, 2, 3]
}

/// What `verify` needs besides the records: the family shape (to recover
/// `p_max` for each `(c, n, m)`), the criticality band and the constants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hypotheses {
    pub shape: Shape,
    #[serde(default = "default_epsilon_c")]
    pub epsilon_c: f64,
    #[serde(default)]
    pub thresholds: Thresholds,
    /// Subset of {1, 2, 3} to check.
    #[serde(default = "default_theorems")]
    pub theorems: Vec<u8>,
}

impl Hypotheses {
    pub fn new(shape: Shape) -> Self {
        Hypotheses {
            shape,
            epsilon_c: DEFAULT_EPSILON_C,
            thresholds: Thresholds::default(),
            theorems: default_theorems(),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.into(),
            source,
        })?;
        let h: Hypotheses = serde_json::from_str(&text).map_err(|source| Error::Json {
            path: path.into(),
            source,
        })?;
        if !(h.epsilon_c > 0.0 && h.epsilon_c < 0.5) {
            return Err(Error::InvalidSpec(format!(
                "epsilon_c must lie in (0, 0.5), got {}",
                h.epsilon_c
            )));
        }
        if let Some(t) = h.theorems.iter().find(|t| !(1..=3).contains(*t)) {
            return Err(Error::InvalidSpec(format!(
                "unknown theorem {t}; expected 1, 2 or 3"
            )));
        }
        Ok(h)
    }

    pub fn wants(&self, theorem: u8) -> bool {
        self.theorems.contains(&theorem)
    }
}
