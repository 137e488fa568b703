//! Evolutionary diversity optimization for the k-vertex cover problem.
//!
//! The crate evolves populations of μ covers (each a set of at most `k`
//! vertices touching every edge) towards maximal total Hamming distance. It
//! provides:
//!
//! * [`graph`]: immutable graphs, the edge-list format, and the 8-vertex
//!   instance with a population local optimum plus its `K_{m,m}` extension;
//! * [`covers`]: cover predicates, an exhaustive cover oracle and start-cover
//!   search;
//! * [`diversity`]: the population type with its one-count ledger;
//! * [`mutation`]: jump-and-repair mutation;
//! * [`algorithms`]: the (μ+1), (μ+λ) and (1_μ+1_μ) EAs;
//! * [`landscape`]: exhaustive optimum and local-optimum oracles;
//! * [`harness`]: batched seeded experiments and hitting-time statistics.

pub mod algorithms;
pub mod covers;
pub mod diversity;
pub mod error;
pub mod graph;
pub mod harness;
pub mod landscape;
pub mod mutation;
pub mod vertex_set;

pub use algorithms::{run, Algorithm, RunConfig, TrialRecord};
pub use diversity::{hamming, Population};
pub use error::{Error, Result};
pub use graph::{extended_instance, paper_instance, parse_graph, Graph};
pub use vertex_set::VertexSet;
