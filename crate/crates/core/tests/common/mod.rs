//! Generators and property bodies shared by the property tests and the
//! acceptance runner.

#![allow(dead_code)]

use std::sync::Arc;

use divcover::algorithms::{capped_fitness, run_observed, step, Algorithm, RunConfig};
use divcover::covers::is_cover;
use divcover::mutation::jump_and_repair_traced;
use divcover::{hamming, Graph, Population, VertexSet};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn bits_to_set(bits: &[bool]) -> VertexSet {
    VertexSet::from_indices(
        bits.len(),
        bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i),
    )
    .unwrap()
}

/// Random simple graph on `2..=max_n` vertices.
pub fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n)
        .prop_flat_map(|n| {
            (
                Just(n),
                prop::collection::vec(prop::bool::weighted(0.35), n * (n - 1) / 2),
            )
        })
        .prop_map(|(n, mask)| {
            let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
            let edges = pairs.zip(mask).filter(|(_, keep)| *keep).map(|(e, _)| e);
            Graph::new(n, edges).unwrap()
        })
}

/// Turns an arbitrary set into a cover by adding the larger endpoint of each
/// uncovered edge.
pub fn make_cover(g: &Graph, mut s: VertexSet) -> VertexSet {
    for &(u, v) in g.edges() {
        if !s.contains(u) && !s.contains(v) {
            s.insert(v);
        }
    }
    s
}

/// A graph with a cover of it.
pub fn graph_and_cover(max_n: usize) -> impl Strategy<Value = (Graph, VertexSet)> {
    graph(max_n).prop_flat_map(|g| {
        let n = g.n();
        (Just(g), prop::collection::vec(any::<bool>(), n)).prop_map(|(g, bits)| {
            let s = make_cover(&g, bits_to_set(&bits));
            (g, s)
        })
    })
}

/// A population of `1..=max_mu` random sets of a common width `1..=max_n`.
pub fn population(max_mu: usize, max_n: usize) -> impl Strategy<Value = Population> {
    (1..=max_mu, 1..=max_n).prop_flat_map(|(mu, n)| {
        prop::collection::vec(prop::collection::vec(any::<bool>(), n), mu).prop_map(|rows| {
            Population::new(rows.iter().map(|r| bits_to_set(r)).collect()).unwrap()
        })
    })
}

pub fn pairwise_diversity(p: &Population) -> u64 {
    let m = p.members();
    let mut total = 0;
    for i in 0..m.len() {
        for j in i + 1..m.len() {
            total += hamming(&m[i], &m[j]).unwrap();
        }
    }
    total
}

pub fn count_formula_matches_pairwise(p: &Population) -> Result<(), TestCaseError> {
    prop_assert_eq!(p.total_hamming(), pairwise_diversity(p));
    let bound = Population::diversity_upper_bound(p.width(), p.mu());
    prop_assert!(p.total_hamming() <= bound);
    let (lo, hi) = ((p.mu() / 2) as u32, p.mu().div_ceil(2) as u32);
    let balanced = p.counts().iter().all(|&c| c == lo || c == hi);
    prop_assert_eq!(p.total_hamming() == bound, balanced);
    Ok(())
}

pub fn replace_delta_matches_rebuild(
    p: &Population,
    j: usize,
    c: &VertexSet,
) -> Result<(), TestCaseError> {
    let mut members = p.members().to_vec();
    members[j] = c.clone();
    let rebuilt = Population::new(members).unwrap();
    let expected = rebuilt.total_hamming() as i64 - p.total_hamming() as i64;
    prop_assert_eq!(p.replace_delta(j, c).unwrap(), expected);

    let mut edited = p.clone();
    edited.replace(j, c.clone()).unwrap();
    prop_assert!(edited.ledger_is_coherent());
    prop_assert_eq!(edited.total_hamming(), rebuilt.total_hamming());
    Ok(())
}

/// Output is a cover; exactly `k` vertices whenever repair alone stays within `k`.
pub fn jump_and_repair_contract(
    g: &Graph,
    x: &VertexSet,
    extra: usize,
    seed: u64,
) -> Result<(), TestCaseError> {
    let k = (x.len() + extra).min(g.n());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = jump_and_repair_traced(g, k, x, &mut rng).unwrap();
    prop_assert!(is_cover(g, &m.before_padding).unwrap());
    prop_assert!(is_cover(g, &m.offspring).unwrap());
    prop_assert!(m.removed.is_subset(x));
    prop_assert!(m.before_padding.is_subset(&m.offspring));
    if m.before_padding.len() <= k {
        prop_assert_eq!(m.offspring.len(), k);
    } else {
        prop_assert_eq!(&m.offspring, &m.before_padding);
    }
    let mut again = ChaCha8Rng::seed_from_u64(seed);
    prop_assert_eq!(jump_and_repair_traced(g, k, x, &mut again).unwrap(), m);
    Ok(())
}

pub const ALGORITHMS: [Algorithm; 3] = [
    Algorithm::MuPlusOne,
    Algorithm::MuPlusLambda,
    Algorithm::OneMuOneMu,
];

fn min_fitness(cfg: &RunConfig, p: &Population) -> i64 {
    p.members()
        .iter()
        .map(|m| capped_fitness(&cfg.graph, cfg.k, m))
        .min()
        .unwrap()
}

/// Population size stays μ, the ledger stays coherent, the minimum capped
/// fitness never drops for the elitist EAs, and (1_μ+1_μ) never loses
/// diversity. The start population need not be feasible for the elitist EAs.
pub fn step_invariants(
    g: Graph,
    start: Vec<VertexSet>,
    k: usize,
    algorithm: Algorithm,
    lambda: usize,
    seed: u64,
    steps: usize,
) -> Result<(), TestCaseError> {
    let mu = start.len();
    let mut cfg = RunConfig::new(Arc::new(g), algorithm, k, mu);
    cfg.lambda = lambda;
    let mut pop = Population::new(start).unwrap();
    if algorithm == Algorithm::OneMuOneMu {
        prop_assume!(min_fitness(&cfg, &pop) == 0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..steps {
        let before_fit = min_fitness(&cfg, &pop);
        let before_d = pop.total_hamming();
        step(&mut pop, &cfg, &mut rng);
        prop_assert_eq!(pop.mu(), mu);
        prop_assert!(pop.ledger_is_coherent());
        prop_assert!(min_fitness(&cfg, &pop) >= before_fit);
        if algorithm == Algorithm::OneMuOneMu {
            prop_assert!(pop.total_hamming() >= before_d);
        }
    }
    Ok(())
}

/// Equal seeds give equal records and final populations.
pub fn run_is_reproducible(
    g: Graph,
    cover: VertexSet,
    algorithm: Algorithm,
    mu: usize,
    seed: u64,
) -> Result<(), TestCaseError> {
    let k = cover.len();
    let mut cfg = RunConfig::new(Arc::new(g), algorithm, k, mu);
    cfg.budget = 30;
    cfg.seed = seed;
    let start = Population::copies(&cover, mu).unwrap();
    let mut trace_a = Vec::new();
    let a = run_observed(&cfg, Some(start.clone()), |_, p, acc| {
        trace_a.push((p.clone(), acc))
    })
    .unwrap();
    let mut trace_b = Vec::new();
    let b = run_observed(&cfg, Some(start), |_, p, acc| {
        trace_b.push((p.clone(), acc))
    })
    .unwrap();
    prop_assert_eq!(&a, &b);
    prop_assert_eq!(trace_a, trace_b);
    prop_assert_eq!(a.0.iterations_run, 30);
    Ok(())
}
