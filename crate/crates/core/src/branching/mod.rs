//! The `(m + 1)`-type Galton-Watson process attached to a weight vector.
//!
//! A type-0 individual (a vertex) has a type-`i` child with probability
//! `p_i` for each attribute `i`; a type-`i` individual (an attribute) has
//! `Binomial(n, p_i)` type-0 children. Its extinction probability from a
//! single type-0 ancestor is the least fixed point in `[0, 1]` of
//!
//! ```text
//! g(x) = prod_i [1 - p_i (1 - (1 - p_i (1 - x))^n)]
//! ```
//!
//! and `1 - rho` predicts the giant component fraction.

mod domination;
mod pgf;
mod sim;
mod uniform;

pub use domination::{compare_extinction, compare_extinction_with, DominationReport, ORDERING_TOL};
pub use pgf::{
    extinction_probability, extinction_probability_with, gw_map, ExtinctionSolution,
    FixedPointIter, SolverOptions,
};
pub use sim::{
    estimate_extinction, simulate_gw, ExtinctionEstimate, GwOutcome, GwSimulator, GwStatus,
};
pub use uniform::{uniform_extinction, zeta, zeta_star, UniformRegime};
