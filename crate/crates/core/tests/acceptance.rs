//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rigphase::bounds::{chernoff_upper, chung_lu_lower, chung_lu_upper};
use rigphase::branching::{estimate_extinction, extinction_probability, gw_map};
use rigphase::components::union_attributes;
use rigphase::discovery::{Explorer, VertexIndex};
use rigphase::harness::{median, scaling_exponent, write_csv_to};
use rigphase::rng::derive_seed;
use rigphase::{
    build_weights, compare_extinction, component_sizes, exact_largest_distribution, run_sweep,
    sample_bipartite, AttributeWeights, SweepConfig, SweepRecord, WeightSpec,
};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn uniform(n: usize, c: f64, m: usize) -> AttributeWeights {
    build_weights(&WeightSpec::uniform(n, c, m)).expect("valid uniform spec")
}

/// Root of `f` on `(0, 1)` where `f(lo) > 0 > f(hi)`.
fn bisect(f: impl Fn(f64) -> f64) -> f64 {
    let (mut lo, mut hi) = (1e-15, 1.0 - 1e-12);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn sweep(cfg: &SweepConfig) -> Vec<SweepRecord> {
    let out = run_sweep(cfg, None).expect("sweep runs");
    assert!(
        out.failures.is_empty(),
        "trial failures: {:?}",
        out.failures
    );
    out.records
}

fn exhaustive_oracle() -> Outcome {
    let w = AttributeWeights::new(3, &[0.5, 0.5]).unwrap();
    let exact = exact_largest_distribution(&w).unwrap();
    let mut counts = BTreeMap::new();
    let samples = 100_000u64;
    for i in 0..samples {
        let largest = component_sizes(&sample_bipartite(&w, derive_seed(1, &[i]))).largest;
        *counts.entry(largest).or_insert(0u64) += 1;
    }
    let tv = exact.total_variation(&counts);
    outcome(
        tv < 0.01,
        format!("TV distance {tv:.5} over {samples} samples (limit 0.01)"),
    )
}

fn solver_vs_closed_form_small_np() -> Outcome {
    let n = 1_000;
    let w = uniform(n, 2.0, n * n);
    let rho = extinction_probability(&w, 1e-12, 1_000_000).rho;
    let zeta = bisect(|x| (2.0 * (x - 1.0)).exp() - x);
    let gap = (rho - zeta).abs();
    outcome(
        gap <= 5e-3,
        format!("rho {rho:.6}, zeta {zeta:.6}, |diff| {gap:.2e} (limit 5e-3)"),
    )
}

fn solver_vs_closed_form_linear() -> Outcome {
    let n = 1_000_000;
    let w = uniform(n, 2.0, n);
    let rho = extinction_probability(&w, 1e-12, 1_000_000).rho;
    let s = 2f64.sqrt();
    let zeta_star = bisect(|x| (s * (s * (x - 1.0)).exp_m1()).exp() - x);
    let gap = (rho - zeta_star).abs();
    outcome(
        gap <= 1e-4,
        format!("rho {rho:.8}, zeta* {zeta_star:.8}, |diff| {gap:.2e} (limit 1e-4)"),
    )
}

fn solver_vs_simulator() -> Outcome {
    let n = 10_000;
    let mut passed = true;
    let mut parts = Vec::new();
    for (k, c) in [1.5, 2.0, 3.0].into_iter().enumerate() {
        let w = uniform(n, c, n);
        let rho = extinction_probability(&w, 1e-12, 1_000_000).rho;
        let est = estimate_extinction(&w, 100_000, derive_seed(3, &[k as u64]), 1_000_000, 10_000);
        let z = (est.frequency - rho).abs() / est.std_error;
        passed &= z <= 3.0;
        parts.push(format!(
            "c={c}: sim {:.4} vs {rho:.4} ({z:.2} SE)",
            est.frequency
        ));
    }
    outcome(passed, parts.join("; "))
}

fn giant_prediction() -> Outcome {
    let n = 100_000;
    let records = sweep(&SweepConfig::example2(n, 1.0, 2.0, 2.0, 1, 20, 4));
    let mean_dev = records
        .iter()
        .map(|r| (r.l1 as f64 / n as f64 - r.giant_frac_pred).abs())
        .sum::<f64>()
        / records.len() as f64;
    let l2_limit = 50.0 * (n as f64).ln();
    let max_l2 = records.iter().map(|r| r.l2).max().unwrap();
    outcome(
        mean_dev <= 0.02 && (max_l2 as f64) <= l2_limit,
        format!("mean |L1/n - (1 - rho)| {mean_dev:.4} (limit 0.02); max L2 {max_l2} (limit {l2_limit:.0})"),
    )
}

fn subcritical_bound() -> Outcome {
    let n = 100_000;
    let ln_n = (n as f64).ln();
    let linear = sweep(&SweepConfig::example2(n, 1.0, 0.5, 0.5, 1, 20, 5));
    let max_linear = linear.iter().map(|r| r.l1).max().unwrap();
    let sqrt = sweep(&SweepConfig::example1(n, 0.5, 0.5, 0.5, 1, 20, 5));
    let m = sqrt[0].m;
    let p = (0.5 / (m as f64 * n as f64)).sqrt();
    let max_sqrt = sqrt.iter().map(|r| r.l1).max().unwrap();
    let (lim_linear, lim_sqrt) = (50.0 * ln_n, 50.0 * n as f64 * p * ln_n);
    outcome(
        max_linear as f64 <= lim_linear && max_sqrt as f64 <= lim_sqrt,
        format!("m=n: max L1 {max_linear} (limit {lim_linear:.0}); m=sqrt(n): max L1 {max_sqrt} (limit {lim_sqrt:.0})"),
    )
}

fn median_l1_exponent(make: impl Fn(usize) -> SweepConfig) -> f64 {
    let points: Vec<(f64, f64)> = [10_000usize, 100_000, 1_000_000]
        .into_iter()
        .map(|n| {
            let mut l1: Vec<f64> = sweep(&make(n)).iter().map(|r| r.l1 as f64).collect();
            (n as f64, median(&mut l1))
        })
        .collect();
    scaling_exponent(&points).expect("three positive points")
}

fn jump_scaling() -> Outcome {
    let s_sqrt = median_l1_exponent(|n| SweepConfig::example1(n, 0.5, 2.0, 2.0, 1, 7, 6));
    let s_lin = median_l1_exponent(|n| SweepConfig::example2(n, 1.0, 2.0, 2.0, 1, 7, 6));
    outcome(
        (s_sqrt - 0.75).abs() <= 0.1 && (s_lin - 1.0).abs() <= 0.05,
        format!("slope m=sqrt(n) {s_sqrt:.3} (0.75 +- 0.1); slope m=n {s_lin:.3} (1.0 +- 0.05)"),
    )
}

/// `q` at criticality `c`, and `p` from `q` by replacing its `k` smallest
/// entries with `parts` equal entries of the same total square mass.
fn domination_pair(rng: &mut ChaCha8Rng, n: usize) -> Option<(AttributeWeights, AttributeWeights)> {
    let m = rng.random_range(5..200);
    let raw: Vec<f64> = (0..m).map(|_| rng.random_range(0.05..1.0)).collect();
    let c = rng.random_range(1.1..4.0);
    let scale = (c / (n as f64 * raw.iter().map(|x| x * x).sum::<f64>())).sqrt();
    let mut q: Vec<f64> = raw.iter().map(|x| x * scale).collect();
    if q.iter().any(|&x| x > 1.0) {
        return None;
    }
    q.sort_by(f64::total_cmp);
    let k = rng.random_range(2..=m);
    let parts = rng.random_range(1..k);
    let (merged, kept) = q.split_at(k);
    let v = (merged.iter().map(|x| x * x).sum::<f64>() / parts as f64).sqrt();
    if v > 1.0 {
        return None;
    }
    let mut p = kept.to_vec();
    p.extend(std::iter::repeat_n(v, parts));
    Some((
        AttributeWeights::new(n, &p).ok()?,
        AttributeWeights::new(n, &q).ok()?,
    ))
}

fn domination_ordering() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut tested, mut violations, mut attempts) = (0, 0, 0);
    let mut worst = f64::INFINITY;
    while tested < 100 && attempts < 100_000 {
        attempts += 1;
        let Some((p, q)) = domination_pair(&mut rng, 100) else {
            continue;
        };
        let report = compare_extinction(&p, &q).unwrap();
        if !report.hypotheses_hold {
            continue;
        }
        tested += 1;
        let (rp, rq) = (report.rho_p.unwrap(), report.rho_q.unwrap());
        worst = worst.min(rp - rq);
        if rp < rq - 1e-9 {
            violations += 1;
        }
    }
    outcome(
        tested == 100 && violations == 0,
        format!("{tested} pairs, {violations} violations, min rho_p - rho_q {worst:.3e}"),
    )
}

fn discovery_invariants() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut traces, mut failures) = (0, Vec::new());
    for s in 0..1_000u64 {
        let n = rng.random_range(1..=1_000);
        let m = rng.random_range(1..=1_500);
        let c = rng.random_range(0.1..3.0);
        let w = if rng.random_bool(0.5) {
            uniform(n, c, m)
        } else {
            let raw: Vec<f64> = (0..m).map(|_| rng.random_range(0.0..1.0)).collect();
            let scale = (c / (n as f64 * raw.iter().map(|x| x * x).sum::<f64>())).sqrt();
            AttributeWeights::new(
                n,
                &raw.iter().map(|x| (x * scale).min(1.0)).collect::<Vec<_>>(),
            )
            .unwrap()
        };
        let b = sample_bipartite(&w, derive_seed(8, &[s]));
        let index = VertexIndex::build(&b);
        let mut explorer = Explorer::new(&b, &index, &w).unwrap();
        let mut uf = union_attributes(&b);
        for _ in 0..3 {
            let start = rng.random_range(0..n);
            let t = explorer.trace(start, None).unwrap();
            traces += 1;
            let mut sum_x = 0;
            for (k, step) in t.steps.iter().enumerate() {
                sum_x += step.new_vertices;
                if sum_x != step.unsaturated + k {
                    failures.push(format!("sample {s}: conservation broken at step {}", k + 1));
                }
            }
            if !t.exhausted || t.component_size != uf.set_size(start) {
                failures.push(format!(
                    "sample {s}: size {} vs union-find {}",
                    t.component_size,
                    uf.set_size(start)
                ));
            }
        }
    }
    let first = failures
        .first()
        .map(|f| format!(", first: {f}"))
        .unwrap_or_default();
    outcome(
        failures.is_empty(),
        format!(
            "{traces} traces over 1000 samples, {} violations{first}",
            failures.len()
        ),
    )
}

fn binomial_pmf(n: u64, p: f64) -> Vec<f64> {
    let mut choose = 1.0f64;
    (0..=n)
        .map(|k| {
            if k > 0 {
                choose = choose * (n - k + 1) as f64 / k as f64;
            }
            choose * p.powi(k as i32) * (1.0 - p).powi((n - k) as i32)
        })
        .collect()
}

fn bound_validity() -> Outcome {
    let mut checked = 0usize;
    let mut bad = Vec::new();
    // exact binomial tails
    for n in 1..=30u64 {
        for p in [0.02, 0.1, 0.25, 0.5, 0.75, 0.9, 0.98] {
            let pmf = binomial_pmf(n, p);
            let mean = n as f64 * p;
            for step in 1..=40 {
                let t = step as f64 * 0.25;
                let upper: f64 = pmf
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| *k as f64 >= mean + t)
                    .map(|(_, q)| q)
                    .sum();
                let lower: f64 = pmf
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| *k as f64 <= mean - t)
                    .map(|(_, q)| q)
                    .sum();
                let ch = chernoff_upper(n, p, t).unwrap().bound;
                let cu = chung_lu_upper(mean, 1.0, t).unwrap().bound;
                let cl = chung_lu_lower(mean, 0.0, t).unwrap().bound;
                checked += 3;
                for (name, bound, exact) in [
                    ("chernoff", ch, upper),
                    ("chung-lu upper", cu, upper),
                    ("chung-lu lower", cl, lower),
                ] {
                    if bound < exact * (1.0 - 1e-12) {
                        bad.push(format!(
                            "{name} n={n} p={p} t={t}: {bound:.3e} < {exact:.3e}"
                        ));
                    }
                }
            }
        }
    }
    // weighted sums W = sum p_j I_j with I_j ~ Bernoulli(p_j)
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let samples = 100_000;
    for case in 0..4 {
        let m = [20, 100, 400, 2_000][case];
        let p: Vec<f64> = (0..m).map(|_| rng.random_range(0.001..0.3)).collect();
        let mean: f64 = p.iter().map(|x| x * x).sum();
        let norm_sq: f64 = p.iter().map(|x| x * x * x).sum();
        let m2 = p.iter().copied().fold(0.0, f64::max);
        let draws: Vec<f64> = (0..samples)
            .map(|_| p.iter().filter(|&&pj| rng.random_bool(pj)).sum::<f64>())
            .collect();
        let sd = norm_sq.sqrt();
        for mult in [0.25, 0.5, 1.0, 1.5, 2.0, 3.0] {
            let lambda = mult * sd;
            for (name, bound, hits) in [
                (
                    "chung-lu upper",
                    chung_lu_upper(norm_sq, m2, lambda).unwrap().bound,
                    draws.iter().filter(|&&w| w >= mean + lambda).count(),
                ),
                (
                    "chung-lu lower",
                    chung_lu_lower(norm_sq, 0.0, lambda).unwrap().bound,
                    draws.iter().filter(|&&w| w <= mean - lambda).count(),
                ),
            ] {
                let freq = hits as f64 / samples as f64;
                let se = (freq * (1.0 - freq) / samples as f64).sqrt();
                checked += 1;
                if bound < freq + 3.0 * se {
                    bad.push(format!(
                        "{name} m={m} lambda={lambda:.3e}: {bound:.4} < {freq:.4} + 3 SE"
                    ));
                }
            }
        }
    }
    let first = bad
        .first()
        .map(|f| format!(", first: {f}"))
        .unwrap_or_default();
    outcome(
        bad.is_empty(),
        format!("{checked} comparisons, {} violations{first}", bad.len()),
    )
}

fn determinism() -> Outcome {
    let cfg = SweepConfig::example2(20_000, 1.0, 0.5, 2.0, 4, 5, 10);
    let csv = |workers| {
        let out = run_sweep(&cfg, Some(workers)).unwrap();
        let mut buf = Vec::new();
        write_csv_to(&out.records, &mut buf).unwrap();
        buf
    };
    let (a, b) = (csv(1), csv(4));
    outcome(
        a == b,
        format!(
            "{} CSV bytes with 1 worker, {} with 4; identical: {}",
            a.len(),
            b.len(),
            a == b
        ),
    )
}

fn random_weights(rng: &mut ChaCha8Rng) -> AttributeWeights {
    loop {
        let n = rng.random_range(2..100_000);
        let m = rng.random_range(1..5_000);
        let c = rng.random_range(0.2..5.0);
        let raw: Vec<f64> = (0..m).map(|_| rng.random_range(0.01..1.0)).collect();
        let scale = (c / (n as f64 * raw.iter().map(|x| x * x).sum::<f64>())).sqrt();
        let p: Vec<f64> = raw.iter().map(|x| x * scale).collect();
        if p.iter().all(|&x| x <= 1.0) {
            return AttributeWeights::new(n, &p).unwrap();
        }
    }
}

fn map_numerics() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut vectors: Vec<AttributeWeights> = Vec::new();
    // m = 1e6 distinct entries with p_max = 1e-6
    for n in [500_000usize, 3_000_000] {
        let p: Vec<f64> = (0..1_000_000)
            .map(|i| 1e-6 * (1.0 - i as f64 / 2e6))
            .collect();
        vectors.push(AttributeWeights::new(n, &p).unwrap());
    }
    vectors.push(uniform(1_000_000, 1.0, 1_000_000));
    while vectors.len() < 50 {
        vectors.push(random_weights(&mut rng));
    }
    let h = 1e-5;
    let (mut worst, mut underflow) = (0.0f64, 0);
    for w in &vectors {
        let derivative = (gw_map(w, 1.0 + h) - gw_map(w, 1.0 - h)) / (2.0 * h);
        worst = worst.max((derivative - w.c()).abs());
        if gw_map(w, 0.0).is_nan() || gw_map(w, 0.0) <= 0.0 {
            underflow += 1;
        }
    }
    outcome(
        worst <= 1e-3 && underflow == 0,
        format!(
            "{} vectors, max |g'(1) - c| {worst:.2e} (limit 1e-3), g(0) = 0 in {underflow}",
            vectors.len()
        ),
    )
}

fn main() {
    type Check = fn() -> Outcome;
    let criteria: [(&str, &str, Check, u64); 12] = [
        (
            "1",
            "exhaustive oracle vs Monte Carlo",
            exhaustive_oracle,
            10,
        ),
        (
            "2a",
            "solver vs zeta, m = n^2",
            solver_vs_closed_form_small_np,
            5,
        ),
        (
            "2b",
            "solver vs zeta*, m = n",
            solver_vs_closed_form_linear,
            5,
        ),
        (
            "3",
            "solver vs branching simulation",
            solver_vs_simulator,
            60,
        ),
        ("4", "giant component size", giant_prediction, 60),
        ("5", "subcritical component bound", subcritical_bound, 60),
        ("6", "giant size scaling exponent", jump_scaling, 600),
        ("7", "domination ordering", domination_ordering, 30),
        ("8", "discovery invariants", discovery_invariants, 30),
        ("9", "tail bound validity", bound_validity, 30),
        ("10", "sweep determinism across workers", determinism, 60),
        ("11", "gw_map derivative and underflow", map_numerics, 30),
    ];
    let mut failed = Vec::new();
    for (id, name, check, limit) in criteria {
        let started = Instant::now();
        let out = check();
        let elapsed = started.elapsed();
        let in_time = elapsed <= Duration::from_secs(limit);
        let passed = out.passed && in_time;
        println!(
            "[{}] {id:>3} {name}: {}; {:.1} s (limit {limit} s)",
            if passed { "PASS" } else { "FAIL" },
            out.detail,
            elapsed.as_secs_f64()
        );
        if !passed {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria passed");
    } else {
        println!("acceptance: failed {}", failed.join(", "));
        std::process::exit(1);
    }
}
