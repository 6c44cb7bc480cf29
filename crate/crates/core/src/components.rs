//! Component sizes of the intersection graph, computed straight from the
//! bipartite sample.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::model::AttributeWeights;
use crate::sampler::BipartiteSample;
use crate::union_find::UnionFind;
use crate::{Error, Result};

/// Largest `n * m` accepted by [`exact_largest_distribution`].
pub const EXACT_LIMIT: usize = 20;

/// Number of sizes written by [`ComponentSummary::to_json`].
pub const JSON_TOP_K: usize = 100;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentSummary {
    /// All component sizes, descending; isolated vertices count as 1.
    pub sizes: Vec<usize>,
    pub largest: usize,
    /// 0 when there is a single component.
    pub second_largest: usize,
    pub count: usize,
}

#[derive(Serialize)]
struct SummaryJson<'a> {
    n: usize,
    sizes_topk: &'a [usize],
    largest: usize,
    second: usize,
    count: usize,
}

impl ComponentSummary {
    pub fn from_sizes(mut sizes: Vec<usize>) -> Self {
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        let largest = sizes.first().copied().unwrap_or(0);
        let second_largest = sizes.get(1).copied().unwrap_or(0);
        let count = sizes.len();
        ComponentSummary {
            sizes,
            largest,
            second_largest,
            count,
        }
    }

    pub fn n(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn to_json(&self) -> String {
        let top = &self.sizes[..self.sizes.len().min(JSON_TOP_K)];
        serde_json::to_string(&SummaryJson {
            n: self.n(),
            sizes_topk: top,
            largest: self.largest,
            second: self.second_largest,
            count: self.count,
        })
        .expect("summary is always serializable")
    }
}

/// Unions every attribute's members as a chain anchored at its first member,
/// which connects the same vertices as the full clique.
pub fn union_attributes(b: &BipartiteSample) -> UnionFind {
    let mut uf = UnionFind::new(b.n());
    for members in b.attrs() {
        if let Some((&first, rest)) = members.split_first() {
            for &v in rest {
                uf.union(first as usize, v as usize);
            }
        }
    }
    uf
}

pub fn component_sizes(b: &BipartiteSample) -> ComponentSummary {
    ComponentSummary::from_sizes(union_attributes(b).set_sizes())
}

/// Exact law of the largest component size.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactSizeDistribution {
    pub n: usize,
    pub m: usize,
    /// Largest component size -> probability. Sizes with probability 0 are absent.
    pub support: BTreeMap<usize, f64>,
}

impl ExactSizeDistribution {
    pub fn probability(&self, k: usize) -> f64 {
        self.support.get(&k).copied().unwrap_or(0.0)
    }

    /// Total-variation distance to an empirical histogram of largest sizes.
    pub fn total_variation(&self, counts: &BTreeMap<usize, u64>) -> f64 {
        let total: u64 = counts.values().sum();
        let mut keys: Vec<usize> = self.support.keys().chain(counts.keys()).copied().collect();
        keys.sort_unstable();
        keys.dedup();
        0.5 * keys
            .into_iter()
            .map(|k| {
                let emp = counts.get(&k).copied().unwrap_or(0) as f64 / total as f64;
                (self.probability(k) - emp).abs()
            })
            .sum::<f64>()
    }
}

/// Enumerates all `2^(n m)` bipartite graphs and accumulates the probability
/// of each largest-component size.
///
/// Works on vertex bitmasks and shares no code with [`component_sizes`].
pub fn exact_largest_distribution(w: &AttributeWeights) -> Result<ExactSizeDistribution> {
    let (n, m) = (w.n(), w.m());
    let nm = n * m;
    if nm > EXACT_LIMIT {
        return Err(Error::InstanceTooLarge {
            nm,
            limit: EXACT_LIMIT,
        });
    }
    let p = w.to_vec();
    // weight[i][k]: probability that attribute i has one specific k-member set
    let weight: Vec<Vec<f64>> = p
        .iter()
        .map(|&pi| {
            (0..=n)
                .map(|k| pi.powi(k as i32) * (1.0 - pi).powi((n - k) as i32))
                .collect()
        })
        .collect();
    let vertex_mask = (1u32 << n) - 1;
    let mut support = BTreeMap::new();
    let mut comps: Vec<u32> = Vec::with_capacity(n);
    for config in 0u32..(1u32 << nm) {
        let mut prob = 1.0;
        comps.clear();
        for (i, wi) in weight.iter().enumerate() {
            let members = (config >> (i * n)) & vertex_mask;
            prob *= wi[members.count_ones() as usize];
            if members == 0 {
                continue;
            }
            // fold every existing component that touches this attribute
            let mut merged = members;
            comps.retain(|&c| {
                if c & merged != 0 {
                    merged |= c;
                    false
                } else {
                    true
                }
            });
            comps.push(merged);
        }
        if prob == 0.0 {
            continue;
        }
        let largest = comps
            .iter()
            .map(|c| c.count_ones() as usize)
            .max()
            .unwrap_or(0)
            .max(1);
        *support.entry(largest).or_insert(0.0) += prob;
    }
    Ok(ExactSizeDistribution { n, m, support })
}
