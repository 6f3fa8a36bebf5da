//! Greedy label-addition construction.
//!
//! The constructor repeatedly adds the label whose edges reduce the
//! component count the most, stopping at the label budget or at a single
//! component. It is reused as the completion step of the lookahead, genetic
//! and local-search procedures, either from an empty set or extending a
//! partial solution over a restricted candidate pool.

use rand::Rng;
use thiserror::Error;

use crate::graph::{LabelSubset, LabeledGraph};

/// How to break ties between labels reaching the same component count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GreedyTieRule {
    /// Lowest label id among the minimizers. Bit-reproducible.
    FirstMin,
    /// Uniform draw among the minimizers.
    RandomAmongMin,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConstructiveError {
    #[error("budget k={k} is below the current solution size {size}")]
    BudgetExceeded { k: usize, size: usize },
}

/// Extends `base` with labels from `pool` (members already in `base` are
/// skipped), each step adding a label that minimizes the resulting
/// component count, until the solution has `k` labels, one component, or
/// the pool is exhausted. A step is taken even when no candidate improves
/// the count, so the budget is consumed rather than stalling.
///
/// The returned subset carries its component count cached. With
/// [`GreedyTieRule::FirstMin`] the RNG is never consulted.
pub fn mvca_extend<R: Rng + ?Sized>(
    g: &LabeledGraph,
    base: &LabelSubset,
    pool: &LabelSubset,
    k: usize,
    tie: GreedyTieRule,
    rng: &mut R,
) -> Result<LabelSubset, ConstructiveError> {
    let mut c = base.clone();
    if c.len() > k {
        return Err(ConstructiveError::BudgetExceeded { k, size: c.len() });
    }
    let mut uf = g.uf_with(&c);
    c.set_comp(uf.components());
    let mut candidates: Vec<usize> = pool.iter().filter(|&l| !c.contains(l)).collect();
    let mut minimizers: Vec<usize> = Vec::new();
    while c.len() < k && uf.components() > 1 && !candidates.is_empty() {
        let mut best_comp = usize::MAX;
        minimizers.clear();
        // candidates stay in ascending id order, so the first minimizer is
        // the lowest label id
        for &label in &candidates {
            let mut trial = uf.clone();
            g.merge_label(&mut trial, label);
            let comp = trial.components();
            if comp < best_comp {
                best_comp = comp;
                minimizers.clear();
                minimizers.push(label);
            } else if comp == best_comp {
                minimizers.push(label);
            }
        }
        let chosen = match tie {
            GreedyTieRule::FirstMin => minimizers[0],
            GreedyTieRule::RandomAmongMin => minimizers[rng.random_range(0..minimizers.len())],
        };
        g.merge_label(&mut uf, chosen);
        c.insert(chosen);
        c.set_comp(uf.components());
        candidates.retain(|&l| l != chosen);
    }
    Ok(c)
}

/// Full greedy construction from the empty set over all labels.
pub fn mvca<R: Rng + ?Sized>(
    g: &LabeledGraph,
    k: usize,
    tie: GreedyTieRule,
    rng: &mut R,
) -> LabelSubset {
    let universe = g.label_count();
    mvca_extend(
        g,
        &LabelSubset::empty(universe),
        &LabelSubset::full(universe),
        k,
        tie,
        rng,
    )
    .expect("an empty base never exceeds the budget")
}
