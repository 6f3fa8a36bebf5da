//! Solvers, instance tooling, and a benchmark harness for the k-labelled
//! spanning forest problem: given an undirected graph whose edges carry
//! labels and a budget `k`, pick at most `k` labels so that the subgraph of
//! edges carrying them has as few connected components as possible.

pub mod bench;
pub mod constructive;
pub mod exact;
pub mod graph;
pub mod instances;
pub mod metaheuristics;

pub use graph::{
    hamming_distance, Edge, GraphError, LabelSubset, LabeledGraph, SpanningForest, UnionFind,
};
