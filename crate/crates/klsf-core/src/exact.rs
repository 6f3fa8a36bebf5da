//! Exhaustive label-combination search, plus a naive brute-force oracle
//! used by tests.

use std::collections::VecDeque;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::graph::{LabelSubset, LabeledGraph, UnionFind};

/// Controls for the exhaustive search.
#[derive(Debug, Clone)]
pub struct ExactConfig {
    /// Wall-clock budget for the whole search.
    pub time_limit: Duration,
    /// On timeout, report nothing rather than the unproven incumbent.
    pub report_not_found: bool,
}

impl ExactConfig {
    pub fn new(time_limit: Duration) -> Self {
        ExactConfig {
            time_limit,
            report_not_found: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExactOutcome {
    /// The search completed: the subset is a proven optimum.
    Optimal(LabelSubset),
    /// Timed out and configured to report nothing.
    NotFound,
    /// Timed out; best incumbent so far, optimality unproven.
    Unproven(LabelSubset),
}

#[derive(Debug, Clone)]
pub struct ExactResult {
    pub outcome: ExactOutcome,
    pub elapsed: Duration,
    /// Number of label combinations evaluated (the empty set included).
    pub combinations_visited: u64,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExactError {
    #[error("budget k={k} must lie in [1, {labels}]")]
    InvalidBudget { k: usize, labels: usize },
    #[error("brute-force oracle limited to {max} labels, got {labels}")]
    TooManyLabels { labels: usize, max: usize },
}

enum Flow {
    Exhausted,
    FoundSingleComponent,
    TimedOut,
}

struct Search<'g> {
    g: &'g LabeledGraph,
    k: usize,
    deadline: Instant,
    stack: Vec<usize>,
    best: Option<(usize, usize, LabelSubset)>, // (comp, size, subset)
    visited: u64,
}

impl Search<'_> {
    /// Depth-first enumeration in ascending label order, so each
    /// combination of at most `k` labels is visited exactly once and the
    /// first incumbent among ties is the lexicographically smallest.
    fn dfs(&mut self, uf: &UnionFind, next_label: usize) -> Flow {
        if Instant::now() >= self.deadline {
            return Flow::TimedOut;
        }
        self.visited += 1;
        let comp = uf.components();
        let better = match &self.best {
            None => true,
            Some((bc, bs, _)) => comp < *bc || (comp == *bc && self.stack.len() < *bs),
        };
        if better {
            let mut subset =
                LabelSubset::from_labels(self.g.label_count(), self.stack.iter().copied());
            subset.set_comp(comp);
            self.best = Some((comp, self.stack.len(), subset));
        }
        if comp == 1 {
            // goal reached: no superset can do better, and the search as a
            // whole stops at the first single-component solution
            return Flow::FoundSingleComponent;
        }
        if self.stack.len() == self.k {
            return Flow::Exhausted;
        }
        for label in next_label..=self.g.label_count() {
            let mut child = uf.clone();
            self.g.merge_label(&mut child, label);
            self.stack.push(label);
            let flow = self.dfs(&child, label + 1);
            self.stack.pop();
            match flow {
                Flow::Exhausted => {}
                other => return other,
            }
        }
        Flow::Exhausted
    }
}

/// Backtracking enumeration of every label combination of size at most `k`,
/// stopping early when a single-component solution appears. Ties on the
/// component count go to fewer labels, then to lexicographic order.
pub fn exact_solve(
    g: &LabeledGraph,
    k: usize,
    cfg: &ExactConfig,
) -> Result<ExactResult, ExactError> {
    let labels = g.label_count();
    if k < 1 || k > labels {
        return Err(ExactError::InvalidBudget { k, labels });
    }
    let start = Instant::now();
    let mut search = Search {
        g,
        k,
        deadline: start + cfg.time_limit,
        stack: Vec::with_capacity(k),
        best: None,
        visited: 0,
    };
    let flow = search.dfs(&UnionFind::new(g.vertex_count()), 1);
    let elapsed = start.elapsed();
    let outcome = match flow {
        Flow::Exhausted | Flow::FoundSingleComponent => {
            let (_, _, subset) = search
                .best
                .expect("the empty combination is always visited");
            ExactOutcome::Optimal(subset)
        }
        Flow::TimedOut => match search.best {
            Some((_, _, subset)) if !cfg.report_not_found => ExactOutcome::Unproven(subset),
            _ => ExactOutcome::NotFound,
        },
    };
    Ok(ExactResult {
        outcome,
        elapsed,
        combinations_visited: search.visited,
    })
}

/// Minimum component count over every subset of at most `k` labels, by
/// direct breadth-first search on each candidate subgraph. No union-find,
/// no pruning, no early exit; guarded to 20 labels.
pub fn brute_force_oracle(g: &LabeledGraph, k: usize) -> Result<usize, ExactError> {
    let labels = g.label_count();
    if labels > 20 {
        return Err(ExactError::TooManyLabels { labels, max: 20 });
    }
    let mut best = usize::MAX;
    for mask in 0u32..1u32 << labels {
        if mask.count_ones() as usize > k {
            continue;
        }
        best = best.min(bfs_components(g, mask));
    }
    Ok(best)
}

fn bfs_components(g: &LabeledGraph, mask: u32) -> usize {
    let n = g.vertex_count();
    let mut adj = vec![Vec::new(); n + 1];
    for e in g.edges() {
        if mask >> (e.label - 1) & 1 == 1 {
            adj[e.u].push(e.v);
            adj[e.v].push(e.u);
        }
    }
    let mut seen = vec![false; n + 1];
    let mut queue = VecDeque::new();
    let mut comps = 0;
    for s in 1..=n {
        if seen[s] {
            continue;
        }
        comps += 1;
        seen[s] = true;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
    }
    comps
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Edge;
    use crate::testutil::random_graph;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn four_vertex_graph() -> LabeledGraph {
        LabeledGraph::new(
            4,
            vec![
                Edge::new(1, 2, 1),
                Edge::new(3, 4, 1),
                Edge::new(2, 3, 2),
                Edge::new(1, 3, 3),
            ],
            3,
        )
        .unwrap()
    }

    fn generous() -> ExactConfig {
        ExactConfig::new(Duration::from_secs(30))
    }

    #[test]
    fn finds_the_connecting_pair() {
        // full enumeration of the 3 singletons and 3 pairs finds {1,2}
        let g = four_vertex_graph();
        let res = exact_solve(&g, 2, &generous()).unwrap();
        match res.outcome {
            ExactOutcome::Optimal(c) => {
                assert_eq!(c.to_vec(), vec![1, 2]);
                assert_eq!(c.comp(), Some(1));
            }
            other => panic!("expected an optimum, got {other:?}"),
        }
    }

    #[test]
    fn edgeless_graph_keeps_the_smallest_incumbent() {
        // every subset leaves n components, so the tie-break on fewer
        // labels keeps the empty set
        let g = LabeledGraph::new(5, vec![], 3).unwrap();
        let res = exact_solve(&g, 3, &generous()).unwrap();
        match res.outcome {
            ExactOutcome::Optimal(c) => {
                assert_eq!(c.comp(), Some(5));
                assert!(c.is_empty());
            }
            other => panic!("expected an optimum, got {other:?}"),
        }
    }

    #[test]
    fn zero_time_budget_reports_not_found() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = random_graph(&mut rng, 30, 12, 100);
        let res = exact_solve(&g, 6, &ExactConfig::new(Duration::ZERO)).unwrap();
        assert_eq!(res.outcome, ExactOutcome::NotFound);
    }

    #[test]
    fn timeout_can_return_the_unproven_incumbent() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = random_graph(&mut rng, 60, 18, 90);
        let mut cfg = ExactConfig::new(Duration::from_millis(2));
        cfg.report_not_found = false;
        let res = exact_solve(&g, 9, &cfg).unwrap();
        match res.outcome {
            ExactOutcome::Unproven(c) => assert!(c.len() <= 9),
            ExactOutcome::NotFound => {} // timed out before the first node
            ExactOutcome::Optimal(_) => panic!("2 ms cannot prove this space"),
        }
    }

    #[test]
    fn rejects_bad_budgets() {
        let g = four_vertex_graph();
        assert_eq!(
            exact_solve(&g, 0, &generous()).unwrap_err(),
            ExactError::InvalidBudget { k: 0, labels: 3 }
        );
        assert_eq!(
            exact_solve(&g, 4, &generous()).unwrap_err(),
            ExactError::InvalidBudget { k: 4, labels: 3 }
        );
    }

    #[test]
    fn oracle_on_reference_graph() {
        // three singleton evaluations: 2, 3 and 3 components
        let g = four_vertex_graph();
        assert_eq!(brute_force_oracle(&g, 1).unwrap(), 2);
        assert_eq!(brute_force_oracle(&g, 3).unwrap(), 1);
    }

    #[test]
    fn oracle_never_exceeds_vertex_count() {
        let g = LabeledGraph::new(6, vec![], 2).unwrap();
        assert_eq!(brute_force_oracle(&g, 2).unwrap(), 6);
    }

    #[test]
    fn oracle_rejects_wide_label_sets() {
        let g = LabeledGraph::new(2, vec![Edge::new(1, 2, 21)], 21).unwrap();
        assert_eq!(
            brute_force_oracle(&g, 1).unwrap_err(),
            ExactError::TooManyLabels {
                labels: 21,
                max: 20
            }
        );
    }

    #[test]
    fn agrees_with_oracle_on_random_instances() {
        for seed in 0..100u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = rng.random_range(2..14);
            let labels = rng.random_range(1..=12);
            let m = rng.random_range(0..30);
            let g = random_graph(&mut rng, n, labels, m);
            let k = rng.random_range(1..=labels);
            let res = exact_solve(&g, k, &generous()).unwrap();
            let comp = match res.outcome {
                ExactOutcome::Optimal(c) => c.comp().unwrap(),
                other => panic!("tiny instance must finish, got {other:?}"),
            };
            assert_eq!(comp, brute_force_oracle(&g, k).unwrap(), "seed {seed}");
        }
    }

    #[test]
    fn visits_each_combination_at_most_once() {
        // edgeless graph: nothing reaches one component, so the whole tree
        // is enumerated and the count equals sum over i<=k of C(l, i)
        let labels = 7;
        let g = LabeledGraph::new(3, vec![], labels).unwrap();
        for k in 1..=labels {
            let res = exact_solve(&g, k, &generous()).unwrap();
            let expected: u64 = (0..=k as u64).map(|i| binomial(labels as u64, i)).sum();
            assert_eq!(res.combinations_visited, expected, "k={k}");
        }
    }

    #[test]
    fn early_exit_incumbent_has_one_component() {
        for seed in 0..30u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xfeed);
            let n = rng.random_range(2..10);
            let labels = rng.random_range(1..8);
            let m = rng.random_range(n..4 * n);
            let g = random_graph(&mut rng, n, labels, m);
            let k = rng.random_range(1..=labels);
            let res = exact_solve(&g, k, &generous()).unwrap();
            let full: u64 = (0..=k as u64).map(|i| binomial(labels as u64, i)).sum();
            if res.combinations_visited < full {
                match res.outcome {
                    ExactOutcome::Optimal(c) => assert_eq!(c.comp(), Some(1)),
                    other => panic!("early stop must be a proven optimum, got {other:?}"),
                }
            }
        }
    }

    fn binomial(n: u64, k: u64) -> u64 {
        if k > n {
            return 0;
        }
        let mut r = 1u64;
        for i in 0..k {
            r = r * (n - i) / (i + 1);
        }
        r
    }
}
