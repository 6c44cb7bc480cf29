use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::SweepConfig;
use super::gap::{giant_gap_scan, GapSummary};
use super::verify::{verify_theorems, VerificationReport};
use crate::branching::extinction_probability_with;
use crate::components::component_sizes;
use crate::model::AttributeWeights;
use crate::rng::derive_seed;
use crate::sampler::sample_bipartite;
use crate::{Error, Result};

pub const CSV_HEADER: &str = "c,n,m,trial,seed,L1,L2,rho_pred,giant_frac_pred,wall_ms";

/// One sampled graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub c: f64,
    pub n: usize,
    pub m: usize,
    pub trial: usize,
    pub seed: u64,
    #[serde(rename = "L1")]
    pub l1: usize,
    #[serde(rename = "L2")]
    pub l2: usize,
    pub rho_pred: f64,
    pub giant_frac_pred: f64,
    /// 0 unless timing was requested.
    pub wall_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialFailure {
    pub c: f64,
    pub trial: usize,
    pub seed: u64,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutput {
    /// Ordered by criticality, then trial.
    pub records: Vec<SweepRecord>,
    pub failures: Vec<TrialFailure>,
}

/// JSON sidecar written next to the CSV.
#[derive(Debug, Clone, Serialize)]
pub struct SweepReport<'a> {
    pub config: &'a SweepConfig,
    pub points: usize,
    pub records: usize,
    pub failures: &'a [TrialFailure],
    pub verification: VerificationReport,
    pub gap: GapSummary,
}

impl SweepOutput {
    pub fn report<'a>(&'a self, config: &'a SweepConfig) -> SweepReport<'a> {
        SweepReport {
            config,
            points: config.steps,
            records: self.records.len(),
            failures: &self.failures,
            verification: verify_theorems(&self.records, &config.hypotheses()),
            gap: giant_gap_scan(&self.records, gap_delta(config)),
        }
    }
}

/// Distance from 1 of the criticalities compared in the gap scan: as far
/// out as the sweep reaches on both sides.
fn gap_delta(config: &SweepConfig) -> f64 {
    (1.0 - config.c_min).min(config.c_max - 1.0).max(0.0)
}

struct Point {
    index: usize,
    c: f64,
    weights: AttributeWeights,
    rho: f64,
}

/// Runs every `(c, trial)` pair on a pool of `workers` threads (all cores
/// when `None`). Trial seeds depend only on the master seed and the
/// `(point, trial)` position, so the output does not depend on `workers`.
///
/// A trial that panics is reported in `failures` and the sweep continues.
pub fn run_sweep(config: &SweepConfig, workers: Option<usize>) -> Result<SweepOutput> {
    config.validate()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers {
        if w == 0 {
            return Err(Error::InvalidArgument("workers must be at least 1".into()));
        }
        builder = builder.num_threads(w);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    pool.install(|| sweep_in_pool(config))
}

fn sweep_in_pool(config: &SweepConfig) -> Result<SweepOutput> {
    let n = config.n;
    let m = config.m();
    let opts = config.solver_options();
    let points = config
        .c_points()
        .into_par_iter()
        .enumerate()
        .map(|(index, c)| {
            let weights = config.family.shape.weights(n, m, c)?;
            let rho = extinction_probability_with(&weights, &opts).rho;
            Ok(Point {
                index,
                c,
                weights,
                rho,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let jobs: Vec<(&Point, usize)> = points
        .iter()
        .flat_map(|p| (0..config.trials_per_point).map(move |t| (p, t)))
        .collect();
    let results: Vec<std::result::Result<SweepRecord, TrialFailure>> = jobs
        .into_par_iter()
        .map(|(point, trial)| run_trial(config, point, trial))
        .collect();

    let mut out = SweepOutput {
        records: Vec::with_capacity(results.len()),
        failures: Vec::new(),
    };
    for r in results {
        match r {
            Ok(rec) => out.records.push(rec),
            Err(f) => out.failures.push(f),
        }
    }
    Ok(out)
}

fn run_trial(
    config: &SweepConfig,
    point: &Point,
    trial: usize,
) -> std::result::Result<SweepRecord, TrialFailure> {
    let seed = derive_seed(config.master_seed, &[point.index as u64, trial as u64]);
    let started = Instant::now();
    let summary = catch_unwind(AssertUnwindSafe(|| {
        component_sizes(&sample_bipartite(&point.weights, seed))
    }))
    .map_err(|payload| TrialFailure {
        c: point.c,
        trial,
        seed,
        message: panic_message(payload.as_ref()),
    })?;
    let wall_ms = if config.record_timing {
        started.elapsed().as_millis() as u64
    } else {
        0
    };
    Ok(SweepRecord {
        c: point.c,
        n: point.weights.n(),
        m: point.weights.m(),
        trial,
        seed,
        l1: summary.largest,
        l2: summary.second_largest,
        rho_pred: point.rho,
        giant_frac_pred: 1.0 - point.rho,
        wall_ms,
    })
}

fn panic_message(payload: &(dyn std::any::Any + Send)) -> String {
    if let Some(s) = payload.downcast_ref::<&str>() {
        (*s).to_string()
    } else if let Some(s) = payload.downcast_ref::<String>() {
        s.clone()
    } else {
        "trial panicked".to_string()
    }
}

pub fn write_csv_to<W: Write>(records: &[SweepRecord], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if records.is_empty() {
        w.write_record(CSV_HEADER.split(','))?;
    }
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv(records: &[SweepRecord], path: &Path) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|source| Error::Io {
        path: path.into(),
        source,
    })?;
    write_csv_to(records, std::io::BufWriter::new(file)).map_err(|source| Error::Csv {
        path: path.into(),
        source,
    })
}

pub fn read_csv(path: &Path) -> Result<Vec<SweepRecord>> {
    let mut rdr = csv::Reader::from_path(path).map_err(|source| Error::Csv {
        path: path.into(),
        source,
    })?;
    rdr.deserialize()
        .collect::<csv::Result<Vec<_>>>()
        .map_err(|source| Error::Csv {
            path: path.into(),
            source,
        })
}
