use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::Serialize;

use crate::model::AttributeWeights;
use crate::rng::{derive_seed, rng_from_seed};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GwStatus {
    Extinct,
    SurvivedToCap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GwOutcome {
    pub status: GwStatus,
    /// Type-0 individuals ever born, the ancestor included.
    pub total_type0_progeny: u64,
    /// Type-0 generations that were non-empty.
    pub generations: u64,
}

/// Simulator for the `(m + 1)`-type process of one weight vector.
///
/// Populations are tracked as counts per run of equal probabilities. With
/// `N` type-0 individuals and a run of `len` attributes of probability `p`,
/// the run contributes `K ~ Binomial(N len, p)` attribute individuals, which
/// together have `Binomial(K n, p)` type-0 children. Both identities are
/// exact, so a generation costs O(runs) no matter how large it is.
#[derive(Debug, Clone)]
pub struct GwSimulator {
    n: u64,
    groups: Vec<(f64, u64)>,
}

impl GwSimulator {
    pub fn new(w: &AttributeWeights) -> Self {
        let groups = w
            .runs()
            .iter()
            .filter(|r| r.value > 0.0)
            .map(|r| (r.value, r.len as u64))
            .collect();
        GwSimulator {
            n: w.n() as u64,
            groups,
        }
    }

    /// One run from a single type-0 ancestor. Stops when the type-0
    /// population dies out, reaches `population_cap`, or after
    /// `generation_cap` generations.
    pub fn run(&self, seed: u64, population_cap: u64, generation_cap: u64) -> GwOutcome {
        assert!(
            population_cap >= 1 && generation_cap >= 1,
            "caps must be at least 1"
        );
        let mut rng = rng_from_seed(seed);
        let mut alive: u64 = 1;
        let mut progeny: u64 = 1;
        let mut generations: u64 = 1;
        loop {
            let mut next: u64 = 0;
            for &(p, len) in &self.groups {
                let attrs = Binomial::new(alive.saturating_mul(len), p)
                    .expect("p in (0, 1]")
                    .sample(&mut rng);
                if attrs > 0 {
                    next += Binomial::new(attrs.saturating_mul(self.n), p)
                        .expect("p in (0, 1]")
                        .sample(&mut rng);
                }
            }
            if next == 0 {
                return GwOutcome {
                    status: GwStatus::Extinct,
                    total_type0_progeny: progeny,
                    generations,
                };
            }
            alive = next;
            progeny = progeny.saturating_add(next);
            generations += 1;
            if alive >= population_cap || generations >= generation_cap {
                return GwOutcome {
                    status: GwStatus::SurvivedToCap,
                    total_type0_progeny: progeny,
                    generations,
                };
            }
        }
    }
}

pub fn simulate_gw(
    w: &AttributeWeights,
    seed: u64,
    population_cap: u64,
    generation_cap: u64,
) -> GwOutcome {
    GwSimulator::new(w).run(seed, population_cap, generation_cap)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExtinctionEstimate {
    pub runs: u64,
    pub extinct: u64,
    pub frequency: f64,
    /// Binomial standard error `sqrt(f (1 - f) / runs)`.
    pub std_error: f64,
}

/// Runs `runs` independent simulations in parallel; run `r` uses seed
/// `derive_seed(seed, [r])`.
pub fn estimate_extinction(
    w: &AttributeWeights,
    runs: u64,
    seed: u64,
    population_cap: u64,
    generation_cap: u64,
) -> ExtinctionEstimate {
    let sim = GwSimulator::new(w);
    let extinct = (0..runs)
        .into_par_iter()
        .filter(|&r| {
            sim.run(derive_seed(seed, &[r]), population_cap, generation_cap)
                .status
                == GwStatus::Extinct
        })
        .count() as u64;
    let frequency = if runs == 0 {
        f64::NAN
    } else {
        extinct as f64 / runs as f64
    };
    let std_error = (frequency * (1.0 - frequency) / runs as f64).sqrt();
    ExtinctionEstimate {
        runs,
        extinct,
        frequency,
        std_error,
    }
}
