//! Fixtures shared by the benchmarks.

use std::sync::Arc;

use divcover::algorithms::{Algorithm, RunConfig};
use divcover::{extended_instance, Graph, Population, VertexSet};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random `G(n, p)` graph.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut r = rng(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if r.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges).unwrap()
}

/// Every vertex except the first: a cover of any graph on at least one vertex.
pub fn near_full_cover(g: &Graph) -> VertexSet {
    VertexSet::from_indices(g.n(), 1..g.n()).unwrap()
}

/// `mu` uniform random sets of width `n`.
pub fn random_population(n: usize, mu: usize, seed: u64) -> Population {
    let mut r = rng(seed);
    let members = (0..mu)
        .map(|_| VertexSet::from_indices(n, (0..n).filter(|_| r.random_bool(0.5))).unwrap())
        .collect();
    Population::new(members).unwrap()
}

/// Config and start population on `extended_instance(m)` with `k = m + 4`.
pub fn extended_setup(algorithm: Algorithm, m: usize, mu: usize) -> (RunConfig, Population) {
    let g = Arc::new(extended_instance(m).unwrap());
    let mut cfg = RunConfig::new(g, algorithm, m + 4, mu);
    cfg.lambda = mu;
    let start = divcover::landscape::extended_population(mu, m).unwrap();
    (cfg, start)
}
