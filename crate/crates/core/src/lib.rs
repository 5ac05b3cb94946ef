//! Greedy maximum-cardinality matching on sparse random graphs.
//!
//! The crate provides six greedy matchers built from two optimal reductions
//! (degree 1 and degree 2) and three heuristic edge selectors, among them the
//! minimum-expected-potential selector. Exact oracles (Hopcroft-Karp, Edmonds
//! blossom and a brute-force reference) score the heuristics, and the
//! [`bench`] module runs reproducible sweeps over random graph families.
//!
//! ```
//! use greedymatch::{generate, AlgorithmSpec, GraphFamily, SeededRng};
//!
//! let family = GraphFamily::general(1000, 3.0).unwrap();
//! let mut rng = SeededRng::new(7);
//! let graph = generate(&family, &mut rng, Default::default()).unwrap();
//! let original = graph.clone();
//! let spec: AlgorithmSpec = "opt12-potdeg".parse().unwrap();
//! let (matching, counters) = greedymatch::run(graph, spec, 11).unwrap();
//! matching.validate(&original).unwrap();
//! assert_eq!(matching.len() as u64, counters.total());
//! ```

pub mod bench;
pub mod error;
pub mod exact;
pub mod generator;
pub mod graph;
pub mod matcher;
mod par;
pub mod potential;
pub mod rng;

pub use error::{Error, Result};
pub use exact::{max_matching_bipartite, max_matching_brute, max_matching_general, OracleKind};
pub use generator::{generate, generate_counted, generate_direct, FamilyKind, GraphFamily, Method};
pub use graph::{ContractionRecord, DynamicGraph, Matching, NodeId};
pub use matcher::{run, AlgorithmSpec, GreedyMatcher, Heuristic, OptLevel, StepCounters};
pub use potential::PotentialIndex;
pub use rng::SeededRng;
