//! Sampling, component analysis and branching-process predictions for
//! inhomogeneous random intersection graphs.
//!
//! A graph is described by `n` vertices and a vector of attribute
//! probabilities `p`. Every vertex joins attribute `i` independently with
//! probability `p_i`, and two vertices are adjacent when they share an
//! attribute. The giant component appears once `n * sum(p_i^2)` exceeds 1;
//! its size is predicted by the extinction probability of an associated
//! `(m + 1)`-type Galton-Watson process.
//!
//! Module map:
//!
//! * [`model`] weight specifications, criticality and regime diagnostics
//! * [`sampler`] seeded sampling of the bipartite vertex/attribute graph
//! * [`components`] union-find component sizes and an exhaustive oracle
//! * [`discovery`] the breadth-first discovery process and its per-step trace
//! * [`branching`] extinction fixed point, closed forms, simulator, domination
//! * [`bounds`] Chernoff and Chung-Lu tail bound calculators
//! * [`harness`] parameter sweeps, theorem verification and reporting

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod branching;
pub mod components;
pub mod discovery;
mod error;
pub mod harness;
pub mod model;
pub mod rng;
pub mod sampler;
mod union_find;

pub use error::{Error, Result};
pub use union_find::UnionFind;

pub use bounds::{chernoff_upper, chung_lu_lower, chung_lu_upper, BoundKind, TailBound};
pub use branching::{
    compare_extinction, extinction_probability, gw_map, simulate_gw, uniform_extinction,
    DominationReport, ExtinctionSolution, GwOutcome, GwStatus, SolverOptions, UniformRegime,
};
pub use components::{
    component_sizes, exact_largest_distribution, ComponentSummary, ExactSizeDistribution,
};
pub use discovery::{
    discover, requires_large_component_witness, DiscoveryTrace, Explorer, StepRecord,
};
pub use harness::{
    giant_gap_scan, run_sweep, verify_theorems, GapSummary, Hypotheses, SweepConfig, SweepRecord,
    VerificationReport,
};
pub use model::{
    build_weights, criticality, regime, AttributeWeights, Model, Phase, RegimeReport, WeightSpec,
};
pub use sampler::{project, sample_bipartite, BipartiteSample, ProjectedGraph};
