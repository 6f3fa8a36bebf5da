//! Greedy randomized construction with local-search improvement, iterated
//! until the stopping condition fires.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{LabelSubset, LabeledGraph};
use crate::metaheuristics::neighborhood::local_search;
use crate::metaheuristics::{AlgorithmId, RunRecord, StoppingCondition};

/// Each iteration builds a solution and improves it with the local search;
/// the best solution over all iterations is returned. Construction picks
/// its first label uniformly over the whole universe; every later step
/// draws uniformly from the restricted candidate list of labels reaching
/// the minimum component count. The loop also ends once the incumbent is a
/// single component, which no further iteration could improve.
pub fn grasp(g: &LabeledGraph, k: usize, stop: &StoppingCondition, seed: u64) -> RunRecord {
    assert!(k >= 1, "label budget must be positive");
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut best = LabelSubset::empty(g.label_count());
    let mut best_key = (g.comp_count(&mut best), best.len());
    let mut time_to_best = start.elapsed();
    let mut iterations: u64 = 0;
    let mut idle: u64 = 0;

    while best_key.0 > 1 && !stop.should_stop(start, iterations, idle) {
        let constructed = construct(g, k, &mut rng);
        let mut improved = local_search(g, &constructed, k, &mut rng);
        let key = (g.comp_count(&mut improved), improved.len());
        iterations += 1;
        if key < best_key {
            best = improved;
            best_key = key;
            time_to_best = start.elapsed();
            idle = 0;
        } else {
            idle += 1;
        }
    }

    RunRecord::new(
        AlgorithmId::Grasp,
        seed,
        best,
        best_key.0,
        time_to_best,
        start.elapsed(),
    )
}

/// Randomized greedy construction: fully random first label, then uniform
/// draws from the argmin candidate list until the budget, a single
/// component, or an empty pool stops it.
fn construct<R: Rng + ?Sized>(g: &LabeledGraph, k: usize, rng: &mut R) -> LabelSubset {
    let labels = g.label_count();
    let mut c = LabelSubset::empty(labels);
    if k == 0 || labels == 0 {
        g.comp_count(&mut c);
        return c;
    }
    c.insert(rng.random_range(1..=labels));
    let mut uf = g.uf_with(&c);
    c.set_comp(uf.components());
    let mut rcl: Vec<usize> = Vec::new();
    while c.len() < k && uf.components() > 1 && c.len() < labels {
        let mut best_comp = usize::MAX;
        rcl.clear();
        for candidate in c.unused() {
            let mut trial = uf.clone();
            g.merge_label(&mut trial, candidate);
            let comp = trial.components();
            if comp < best_comp {
                best_comp = comp;
                rcl.clear();
                rcl.push(candidate);
            } else if comp == best_comp {
                rcl.push(candidate);
            }
        }
        let chosen = rcl[rng.random_range(0..rcl.len())];
        g.merge_label(&mut uf, chosen);
        c.insert(chosen);
        c.set_comp(uf.components());
    }
    c
}
