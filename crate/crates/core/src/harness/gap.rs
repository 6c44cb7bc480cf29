use std::collections::BTreeMap;

use serde::Serialize;

use super::sweep::SweepRecord;

/// Median L1 on either side of the critical point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapSummary {
    /// `(c, median L1)` for every criticality present, ascending in `c`.
    pub medians: Vec<(f64, f64)>,
    /// Subcritical point nearest `1 - delta`.
    pub below: Option<(f64, f64)>,
    /// Supercritical point nearest `1 + delta`.
    pub above: Option<(f64, f64)>,
    /// `above / below`.
    pub ratio: Option<f64>,
    /// Median `L1 / n` at `above`.
    pub above_fraction: Option<f64>,
    /// The records do not straddle `c = 1`.
    pub incomplete: bool,
}

pub fn median(values: &mut [f64]) -> f64 {
    assert!(!values.is_empty(), "median of an empty set");
    values.sort_unstable_by(f64::total_cmp);
    let k = values.len() / 2;
    if values.len() % 2 == 1 {
        values[k]
    } else {
        0.5 * (values[k - 1] + values[k])
    }
}

pub fn giant_gap_scan(records: &[SweepRecord], delta: f64) -> GapSummary {
    let mut by_c: BTreeMap<u64, (f64, Vec<f64>, usize)> = BTreeMap::new();
    for r in records {
        // order-preserving key for non-negative floats
        let e = by_c
            .entry(r.c.to_bits())
            .or_insert_with(|| (r.c, Vec::new(), r.n));
        e.1.push(r.l1 as f64);
    }
    let mut groups: Vec<(f64, f64, usize)> = by_c
        .into_values()
        .map(|(c, mut l1, n)| (c, median(&mut l1), n))
        .collect();
    groups.sort_by(|a, b| a.0.total_cmp(&b.0));

    let nearest = |target: f64, keep: &dyn Fn(f64) -> bool| {
        groups
            .iter()
            .filter(|g| keep(g.0))
            .min_by(|a, b| (a.0 - target).abs().total_cmp(&(b.0 - target).abs()))
            .copied()
    };
    let below = nearest(1.0 - delta, &|c| c < 1.0);
    let above = nearest(1.0 + delta, &|c| c > 1.0);
    let ratio = match (below, above) {
        (Some(b), Some(a)) => Some(a.1 / b.1),
        _ => None,
    };
    GapSummary {
        medians: groups.iter().map(|g| (g.0, g.1)).collect(),
        below: below.map(|g| (g.0, g.1)),
        above: above.map(|g| (g.0, g.1)),
        ratio,
        above_fraction: above.map(|g| g.1 / g.2 as f64),
        incomplete: ratio.is_none(),
    }
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn scaling_exponent(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 || points.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0)) {
        return None;
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let k = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}
