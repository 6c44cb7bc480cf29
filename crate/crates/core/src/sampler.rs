//! Sampling the random bipartite graph between vertices and attributes.
//!
//! Each attribute is drawn independently: first its member count
//! `k ~ Binomial(n, p_i)`, then a uniform `k`-subset of the vertices. The
//! resulting law is exactly that of `n` independent `Bernoulli(p_i)`
//! memberships, at a cost of `O(sum(n p_i) + m)` rather than `O(n m)`.

use std::io::Write;

use rand::seq::index;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::model::AttributeWeights;
use crate::rng::stream_rng;
use crate::{Error, Result};

/// Below this many attributes sampling stays on the calling thread.
const PAR_THRESHOLD: usize = 4096;

/// One realization of the bipartite graph `B`, stored as attribute member
/// lists in compressed form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SampleRepr", into = "SampleRepr")]
pub struct BipartiteSample {
    n: usize,
    seed: u64,
    offsets: Vec<usize>,
    members: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct SampleRepr {
    n: usize,
    seed: u64,
    attrs: Vec<Vec<u32>>,
}

impl TryFrom<SampleRepr> for BipartiteSample {
    type Error = Error;

    fn try_from(r: SampleRepr) -> Result<Self> {
        BipartiteSample::from_lists(r.n, r.seed, r.attrs)
    }
}

impl From<BipartiteSample> for SampleRepr {
    fn from(b: BipartiteSample) -> Self {
        SampleRepr {
            n: b.n,
            seed: b.seed,
            attrs: b.attrs().map(<[u32]>::to_vec).collect(),
        }
    }
}

impl BipartiteSample {
    /// Builds a sample from explicit member lists, checking that each list
    /// is strictly increasing and inside `0..n`.
    pub fn from_lists(n: usize, seed: u64, attrs: Vec<Vec<u32>>) -> Result<Self> {
        if n > u32::MAX as usize {
            return Err(Error::MalformedSample(format!(
                "n = {n} exceeds the 32-bit vertex id range"
            )));
        }
        let mut offsets = Vec::with_capacity(attrs.len() + 1);
        offsets.push(0);
        let mut members = Vec::with_capacity(attrs.iter().map(Vec::len).sum());
        for (i, list) in attrs.into_iter().enumerate() {
            if !list.windows(2).all(|w| w[0] < w[1]) {
                return Err(Error::MalformedSample(format!(
                    "attribute {i}: members not strictly increasing"
                )));
            }
            if let Some(&v) = list.last() {
                if v as usize >= n {
                    return Err(Error::MalformedSample(format!(
                        "attribute {i}: vertex {v} out of range for n = {n}"
                    )));
                }
            }
            members.extend_from_slice(&list);
            offsets.push(members.len());
        }
        Ok(BipartiteSample {
            n,
            seed,
            offsets,
            members,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of attributes.
    pub fn m(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Sorted members of attribute `i`.
    pub fn attr(&self, i: usize) -> &[u32] {
        &self.members[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn attrs(&self) -> impl ExactSizeIterator<Item = &[u32]> + '_ {
        self.offsets.windows(2).map(|w| &self.members[w[0]..w[1]])
    }

    /// Number of edges of the bipartite graph.
    pub fn edge_count(&self) -> usize {
        self.members.len()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("BipartiteSample is always serializable")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}

fn sample_attribute(n: usize, p: f64, seed: u64, attr: usize) -> Vec<u32> {
    if p <= 0.0 {
        return Vec::new();
    }
    if p >= 1.0 {
        return (0..n as u32).collect();
    }
    let mut rng = stream_rng(seed, attr as u64);
    let k = Binomial::new(n as u64, p)
        .expect("p checked in (0, 1)")
        .sample(&mut rng) as usize;
    let mut chosen: Vec<u32> = index::sample(&mut rng, n, k)
        .into_iter()
        .map(|v| v as u32)
        .collect();
    chosen.sort_unstable();
    chosen
}

/// Draws `B` for weights `w`. Attribute `i` uses ChaCha stream `i` under the
/// key derived from `seed`, so the output is the same whether or not the
/// attributes are sampled in parallel.
pub fn sample_bipartite(w: &AttributeWeights, seed: u64) -> BipartiteSample {
    let n = w.n();
    let mut spans = Vec::with_capacity(w.runs().len());
    let mut start = 0;
    for r in w.runs() {
        spans.push((start, r.len, r.value));
        start += r.len;
    }
    let lists: Vec<Vec<u32>> = if w.m() < PAR_THRESHOLD {
        spans
            .iter()
            .flat_map(|&(s, len, p)| (s..s + len).map(move |i| (i, p)))
            .map(|(i, p)| sample_attribute(n, p, seed, i))
            .collect()
    } else {
        spans
            .par_iter()
            .flat_map(|&(s, len, p)| (s..s + len).into_par_iter().map(move |i| (i, p)))
            .map(|(i, p)| sample_attribute(n, p, seed, i))
            .collect()
    };
    let mut offsets = Vec::with_capacity(lists.len() + 1);
    offsets.push(0);
    let mut members = Vec::with_capacity(lists.iter().map(Vec::len).sum());
    for list in &lists {
        members.extend_from_slice(list);
        offsets.push(members.len());
    }
    BipartiteSample {
        n,
        seed,
        offsets,
        members,
    }
}

/// The intersection graph `G`: vertices sharing an attribute are adjacent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectedGraph {
    pub n: usize,
    /// Sorted, deduplicated pairs `(u, v)` with `u < v`.
    pub edges: Vec<(u32, u32)>,
}

impl ProjectedGraph {
    /// Writes one `u v` line per edge.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for &(u, v) in &self.edges {
            writeln!(out, "{u} {v}")?;
        }
        Ok(())
    }

    pub fn to_edge_list(&self) -> String {
        let mut buf = Vec::new();
        self.write_edge_list(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("edge list is ASCII")
    }

    pub fn adjacency(&self) -> Vec<Vec<u32>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        adj
    }
}

/// Materializes every attribute clique. Quadratic in attribute sizes; meant
/// for inspection and small oracle checks.
pub fn project(b: &BipartiteSample) -> ProjectedGraph {
    let mut edges = Vec::new();
    for members in b.attrs() {
        for (k, &u) in members.iter().enumerate() {
            for &v in &members[k + 1..] {
                edges.push((u, v));
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    ProjectedGraph { n: b.n(), edges }
}
