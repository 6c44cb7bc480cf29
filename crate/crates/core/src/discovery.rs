//! The discovery process: a breadth-first exploration of the bipartite graph
//! from one vertex, recording for every step the newly discovered attributes
//! `A_i'`, their weight `W_i = sum(p_j, j in A_i')`, the number of newly
//! discovered vertices `X_i` and the number of unsaturated vertices `|U_i|`.
//!
//! Unsaturated vertices are processed first-in first-out. Any order yields
//! the same component; only the per-step trace depends on it.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::model::AttributeWeights;
use crate::sampler::BipartiteSample;
use crate::{Error, Result};

/// Vertex -> attributes adjacency (the transpose of a [`BipartiteSample`]).
#[derive(Debug, Clone)]
pub struct VertexIndex {
    offsets: Vec<usize>,
    attrs: Vec<u32>,
}

impl VertexIndex {
    pub fn build(b: &BipartiteSample) -> Self {
        let mut degree = vec![0usize; b.n() + 1];
        for members in b.attrs() {
            for &v in members {
                degree[v as usize + 1] += 1;
            }
        }
        for i in 1..degree.len() {
            degree[i] += degree[i - 1];
        }
        let offsets = degree;
        let mut cursor = offsets.clone();
        let mut attrs = vec![0u32; b.edge_count()];
        for (a, members) in b.attrs().enumerate() {
            for &v in members {
                attrs[cursor[v as usize]] = a as u32;
                cursor[v as usize] += 1;
            }
        }
        VertexIndex { offsets, attrs }
    }

    /// Attributes of vertex `v`, ascending.
    pub fn attrs_of(&self, v: usize) -> &[u32] {
        &self.attrs[self.offsets[v]..self.offsets[v + 1]]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    /// 1-based step index `i`.
    pub step: usize,
    /// The vertex `v_i` processed at this step.
    pub vertex: u32,
    /// `A_i'`.
    pub new_attrs: Vec<u32>,
    /// `X_i = |V_i'|`.
    pub new_vertices: usize,
    /// `W_i`.
    pub attr_weight: f64,
    /// `|U_i|` after the step.
    pub unsaturated: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscoveryTrace {
    pub start_vertex: u32,
    pub steps: Vec<StepRecord>,
    /// `1 + sum(X_i)`; the full component size when `exhausted`.
    pub component_size: usize,
    /// Number of steps executed.
    pub terminated_at: usize,
    /// The process stopped because `U` ran empty rather than at `max_steps`.
    pub exhausted: bool,
}

impl DiscoveryTrace {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trace is always serializable")
    }
}

/// Reusable exploration state over one sample.
///
/// The index is borrowed so several explorers (one per thread) can share it;
/// visitation marks are epoch-stamped so consecutive traces cost only the
/// work they do.
pub struct Explorer<'a> {
    sample: &'a BipartiteSample,
    index: &'a VertexIndex,
    weights: &'a AttributeWeights,
    vertex_epoch: Vec<u32>,
    attr_epoch: Vec<u32>,
    epoch: u32,
}

impl<'a> Explorer<'a> {
    pub fn new(
        sample: &'a BipartiteSample,
        index: &'a VertexIndex,
        weights: &'a AttributeWeights,
    ) -> Result<Self> {
        if sample.n() != weights.n() || sample.m() != weights.m() {
            return Err(Error::InvalidArgument(format!(
                "sample has (n, m) = ({}, {}) but weights have ({}, {})",
                sample.n(),
                sample.m(),
                weights.n(),
                weights.m()
            )));
        }
        Ok(Explorer {
            sample,
            index,
            weights,
            vertex_epoch: vec![0; sample.n()],
            attr_epoch: vec![0; sample.m()],
            epoch: 0,
        })
    }

    /// Runs the process from `start` for at most `max_steps` steps
    /// (`None` = until `U` is empty).
    pub fn trace(&mut self, start: usize, max_steps: Option<usize>) -> Result<DiscoveryTrace> {
        let n = self.sample.n();
        if start >= n {
            return Err(Error::VertexOutOfRange { vertex: start, n });
        }
        self.epoch = self.epoch.checked_add(1).unwrap_or_else(|| {
            self.vertex_epoch.fill(0);
            self.attr_epoch.fill(0);
            1
        });
        let epoch = self.epoch;
        let limit = max_steps.unwrap_or(usize::MAX);

        let mut unsaturated = VecDeque::from([start as u32]);
        self.vertex_epoch[start] = epoch;
        let mut steps = Vec::new();
        let mut discovered = 1usize;

        while steps.len() < limit {
            let Some(v) = unsaturated.pop_front() else {
                break;
            };
            let mut new_attrs = Vec::new();
            let mut attr_weight = 0.0;
            let mut new_vertices = 0usize;
            for &a in self.index.attrs_of(v as usize) {
                if self.attr_epoch[a as usize] == epoch {
                    continue;
                }
                self.attr_epoch[a as usize] = epoch;
                new_attrs.push(a);
                attr_weight += self.weights.get(a as usize);
                for &u in self.sample.attr(a as usize) {
                    if self.vertex_epoch[u as usize] != epoch {
                        self.vertex_epoch[u as usize] = epoch;
                        unsaturated.push_back(u);
                        new_vertices += 1;
                    }
                }
            }
            discovered += new_vertices;
            steps.push(StepRecord {
                step: steps.len() + 1,
                vertex: v,
                new_attrs,
                new_vertices,
                attr_weight,
                unsaturated: unsaturated.len(),
            });
        }

        Ok(DiscoveryTrace {
            start_vertex: start as u32,
            terminated_at: steps.len(),
            steps,
            component_size: discovered,
            exhausted: unsaturated.is_empty(),
        })
    }
}

/// One-shot discovery from `start`. Builds the vertex index; use
/// [`Explorer`] when tracing many start vertices on one sample.
pub fn discover(
    b: &BipartiteSample,
    w: &AttributeWeights,
    start: usize,
    max_steps: Option<usize>,
) -> Result<DiscoveryTrace> {
    if start >= b.n() {
        return Err(Error::VertexOutOfRange {
            vertex: start,
            n: b.n(),
        });
    }
    let index = VertexIndex::build(b);
    Explorer::new(b, &index, w)?.trace(start, max_steps)
}

/// Whether the trace shows the growth pattern of a large component: it ran at
/// least `k_plus` steps and `|U_k| >= (c - 1) k / 2` for every `k` in
/// `[k_minus, k_plus]`.
pub fn requires_large_component_witness(
    trace: &DiscoveryTrace,
    c: f64,
    k_minus: usize,
    k_plus: usize,
) -> bool {
    if trace.terminated_at < k_plus {
        return false;
    }
    let from = k_minus.max(1);
    (from..=k_plus).all(|k| trace.steps[k - 1].unsaturated as f64 >= (c - 1.0) * k as f64 / 2.0)
}

/// Lower end of the window in which the supercritical argument forbids
/// components: `max(5 n p c, 125 c) * ln(n) / (1 - c)^2`.
pub fn k_minus_diagnostic(n: usize, p_max: f64, c: f64) -> f64 {
    let ln_n = (n as f64).ln();
    let denom = (1.0 - c).powi(2);
    (5.0 * n as f64 * p_max * c * ln_n / denom).max(125.0 * c * ln_n / denom)
}

/// `ceil(n^gamma)`.
pub fn k_plus(n: usize, gamma: f64) -> usize {
    (n as f64).powf(gamma).ceil() as usize
}
