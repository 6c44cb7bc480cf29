use std::collections::BTreeMap;

use serde::Serialize;

use super::pgf::{extinction_probability_with, SolverOptions};
use crate::model::AttributeWeights;
use crate::{Error, Result};

/// Slack allowed when checking `rho_p >= rho_q`.
pub const ORDERING_TOL: f64 = 1e-9;

/// Relative tolerance for the equal-criticality condition.
const CRITICALITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DominationReport {
    pub hypotheses_hold: bool,
    /// Why the hypotheses fail, when they do.
    pub violated: Option<String>,
    /// Entries of `q` left unmatched (the set `S`).
    pub unmatched_q: usize,
    /// Entries of `p` outside the image of the matching.
    pub unmatched_p: usize,
    pub rho_p: Option<f64>,
    pub rho_q: Option<f64>,
    pub ordering_respected: Option<bool>,
}

fn multiset(w: &AttributeWeights) -> BTreeMap<u64, i64> {
    let mut counts = BTreeMap::new();
    for r in w.runs() {
        *counts.entry(r.value.to_bits()).or_insert(0) += r.len as i64;
    }
    counts
}

pub fn compare_extinction(
    w_p: &AttributeWeights,
    w_q: &AttributeWeights,
) -> Result<DominationReport> {
    compare_extinction_with(w_p, w_q, &SolverOptions::default(), ORDERING_TOL)
}

/// Checks whether `p` is obtained from `q` by matching equal entries and
/// replacing the rest of `q` by entries of `p` that are at least as large,
/// at equal criticality. If so, the extinction probability of `p` must be at
/// least that of `q`; both are solved and the ordering is checked.
///
/// Matching as many equal entries as possible is optimal: every unmatched
/// entry only adds constraints, so the hypotheses hold for some matching iff
/// they hold for the maximal one.
pub fn compare_extinction_with(
    w_p: &AttributeWeights,
    w_q: &AttributeWeights,
    opts: &SolverOptions,
    ordering_tol: f64,
) -> Result<DominationReport> {
    if w_p.n() != w_q.n() {
        return Err(Error::MismatchedVertexCount(w_p.n(), w_q.n()));
    }
    let mut diff = multiset(w_p);
    for (bits, count) in multiset(w_q) {
        *diff.entry(bits).or_insert(0) -= count;
    }
    // positive counts: left over in p; negative: left over in q (the set S)
    let leftover_p = diff.iter().filter(|(_, &c)| c > 0);
    let leftover_q = diff.iter().filter(|(_, &c)| c < 0);
    let unmatched_p: i64 = leftover_p.clone().map(|(_, &c)| c).sum();
    let unmatched_q: i64 = leftover_q.clone().map(|(_, &c)| -c).sum();
    // BTreeMap keys of non-negative floats sort like the values
    let min_p = leftover_p.map(|(&b, _)| f64::from_bits(b)).next();
    let max_q = leftover_q.map(|(&b, _)| f64::from_bits(b)).next_back();

    let mut violated = None;
    if let (Some(lo), Some(hi)) = (min_p, max_q) {
        if lo < hi {
            violated = Some(format!(
                "an unmatched entry {lo} of p is below an unmatched entry {hi} of q"
            ));
        }
    }
    let (c_p, c_q) = (w_p.c(), w_q.c());
    if violated.is_none() && (c_p - c_q).abs() > CRITICALITY_TOL * c_q.abs().max(1.0) {
        violated = Some(format!("criticalities differ: {c_p} vs {c_q}"));
    }

    let mut report = DominationReport {
        hypotheses_hold: violated.is_none(),
        violated,
        unmatched_q: unmatched_q as usize,
        unmatched_p: unmatched_p as usize,
        rho_p: None,
        rho_q: None,
        ordering_respected: None,
    };
    if report.hypotheses_hold {
        let rho_p = extinction_probability_with(w_p, opts).rho;
        let rho_q = extinction_probability_with(w_q, opts).rho;
        report.rho_p = Some(rho_p);
        report.rho_q = Some(rho_q);
        report.ordering_respected = Some(rho_p >= rho_q - ordering_tol);
    }
    Ok(report)
}
