//! Random instance generation, budget determination, and instance files.

mod format;
mod import;

pub use format::{
    read_instance, read_instance_file, write_instance, write_instance_file, ParseError,
};
pub use import::{import_official, import_official_file, ImportError};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::constructive::{mvca, GreedyTieRule};
use crate::graph::{Edge, GraphError, LabeledGraph};

/// Parameters of one random instance draw.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InstanceSpec {
    pub n: usize,
    pub label_count: usize,
    /// Fraction of all vertex pairs that become edges, in (0, 1].
    pub density: f64,
    pub seed: u64,
}

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("instance spec needs n >= 2, got n={0}")]
    TooFewVertices(usize),
    #[error("instance spec needs at least one label")]
    NoLabels,
    #[error("density must lie in (0, 1], got {0}")]
    BadDensity(f64),
    #[error("budget k={k} outside [1, {labels}]")]
    BadBudget { k: usize, labels: usize },
    #[error("no valid budget: the greedy constructor connects the graph even with one label")]
    NoValidK,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl InstanceSpec {
    pub fn new(n: usize, label_count: usize, density: f64, seed: u64) -> Self {
        InstanceSpec {
            n,
            label_count,
            density,
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), InstanceError> {
        if self.n < 2 {
            return Err(InstanceError::TooFewVertices(self.n));
        }
        if self.label_count < 1 {
            return Err(InstanceError::NoLabels);
        }
        if !(self.density > 0.0 && self.density <= 1.0) {
            return Err(InstanceError::BadDensity(self.density));
        }
        Ok(())
    }

    /// Number of edges the generator will draw: the density times the
    /// number of vertex pairs, rounded to the nearest integer.
    pub fn edge_count(&self) -> usize {
        let pairs = (self.n * (self.n - 1) / 2) as f64;
        (self.density * pairs).round() as usize
    }
}

/// Where an instance came from.
#[derive(Debug, Clone, PartialEq)]
pub enum Provenance {
    Generated { spec: InstanceSpec },
    Loaded { source: String },
}

/// A graph paired with its label budget.
#[derive(Debug, Clone)]
pub struct Instance {
    pub graph: LabeledGraph,
    pub k: usize,
    pub provenance: Provenance,
}

impl Instance {
    pub fn new(
        graph: LabeledGraph,
        k: usize,
        provenance: Provenance,
    ) -> Result<Self, InstanceError> {
        if k < 1 || k > graph.label_count() {
            return Err(InstanceError::BadBudget {
                k,
                labels: graph.label_count(),
            });
        }
        Ok(Instance {
            graph,
            k,
            provenance,
        })
    }
}

/// Draws `edge_count()` distinct unordered vertex pairs uniformly without
/// replacement (partial Fisher-Yates over the pair universe) and labels
/// each uniformly. Deterministic given the seed.
pub fn generate_graph(spec: &InstanceSpec) -> Result<LabeledGraph, InstanceError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = spec.n;
    let mut pairs: Vec<(usize, usize)> = Vec::with_capacity(n * (n - 1) / 2);
    for u in 1..=n {
        for v in (u + 1)..=n {
            pairs.push((u, v));
        }
    }
    let m = spec.edge_count();
    debug_assert!(m <= pairs.len());
    for i in 0..m {
        let j = rng.random_range(i..pairs.len());
        pairs.swap(i, j);
    }
    let edges = pairs[..m]
        .iter()
        .map(|&(u, v)| Edge::new(u, v, rng.random_range(1..=spec.label_count)))
        .collect();
    Ok(LabeledGraph::new(n, edges, spec.label_count)?)
}

/// Picks the budget as `floor(n / 2^j)` for the smallest `j >= 1` at which
/// the deterministic greedy construction still leaves more than one
/// component. Errors when no such budget exists down to one label.
pub fn determine_k(g: &LabeledGraph) -> Result<usize, InstanceError> {
    let mut norng = ChaCha8Rng::seed_from_u64(0);
    for j in 1..usize::BITS {
        let k = g.vertex_count() >> j;
        if k == 0 {
            return Err(InstanceError::NoValidK);
        }
        let mut sol = mvca(g, k, GreedyTieRule::FirstMin, &mut norng);
        if g.comp_count(&mut sol) > 1 {
            return Ok(k);
        }
    }
    Err(InstanceError::NoValidK)
}

/// Generates a full instance: random graph plus auto-determined budget.
pub fn generate_instance(spec: &InstanceSpec) -> Result<Instance, InstanceError> {
    let graph = generate_graph(spec)?;
    let k = determine_k(&graph)?;
    Instance::new(graph, k, Provenance::Generated { spec: *spec })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn edge_count_follows_density() {
        let spec = InstanceSpec::new(100, 25, 0.5, 0);
        assert_eq!(spec.edge_count(), 2475);
        let tiny = InstanceSpec::new(2, 1, 1.0, 0);
        assert_eq!(tiny.edge_count(), 1);
    }

    #[test]
    fn generated_graphs_have_distinct_pairs_and_valid_labels() {
        for seed in 0..30u64 {
            let spec = InstanceSpec::new(20, 6, 0.4, seed);
            let g = generate_graph(&spec).unwrap();
            assert_eq!(g.edge_count(), spec.edge_count());
            let mut seen = HashSet::new();
            for e in g.edges() {
                assert_ne!(e.u, e.v);
                assert!(e.label >= 1 && e.label <= 6);
                let key = (e.u.min(e.v), e.u.max(e.v));
                assert!(seen.insert(key), "duplicate pair {key:?}");
            }
        }
    }

    #[test]
    fn same_seed_reproduces_the_same_edge_list() {
        let spec = InstanceSpec::new(30, 8, 0.5, 42);
        let a = generate_graph(&spec).unwrap();
        let b = generate_graph(&spec).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn full_density_yields_the_complete_graph() {
        let spec = InstanceSpec::new(8, 3, 1.0, 7);
        let g = generate_graph(&spec).unwrap();
        assert_eq!(g.edge_count(), 28);
    }

    #[test]
    fn spec_validation_rejects_bad_parameters() {
        assert!(InstanceSpec::new(1, 3, 0.5, 0).validate().is_err());
        assert!(InstanceSpec::new(5, 0, 0.5, 0).validate().is_err());
        assert!(InstanceSpec::new(5, 3, 0.0, 0).validate().is_err());
        assert!(InstanceSpec::new(5, 3, 1.5, 0).validate().is_err());
        assert!(InstanceSpec::new(5, 3, 1.0, 0).validate().is_ok());
    }

    #[test]
    fn budget_determination_stops_at_the_first_disconnected_level() {
        let mut deep_levels = 0;
        for seed in 0..10u64 {
            let spec = InstanceSpec::new(16, 10, 0.5, seed);
            let g = generate_graph(&spec).unwrap();
            let k = determine_k(&g).expect("dense multi-label draws have a budget");
            let mut norng = ChaCha8Rng::seed_from_u64(0);
            let mut sol = mvca(&g, k, GreedyTieRule::FirstMin, &mut norng);
            assert!(g.comp_count(&mut sol) > 1, "seed {seed}");
            // the previous level (if any) connected
            let mut j = 1;
            while g.vertex_count() >> j != k {
                j += 1;
            }
            if j > 1 {
                deep_levels += 1;
                let prev_k = g.vertex_count() >> (j - 1);
                let mut prev = mvca(&g, prev_k, GreedyTieRule::FirstMin, &mut norng);
                assert_eq!(g.comp_count(&mut prev), 1, "seed {seed}");
            }
        }
        assert!(deep_levels > 0, "no draw exercised the descent past j=1");
    }

    #[test]
    fn single_spanning_label_has_no_valid_budget() {
        let mut edges: Vec<Edge> = (1..10).map(|u| Edge::new(u, u + 1, 1)).collect();
        edges.push(Edge::new(1, 5, 2));
        let g = LabeledGraph::new(10, edges, 2).unwrap();
        assert!(matches!(determine_k(&g), Err(InstanceError::NoValidK)));
    }
}
