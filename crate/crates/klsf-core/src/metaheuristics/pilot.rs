//! Lookahead construction: every candidate label is scored by fully
//! completing the master solution with the deterministic greedy before the
//! best one is committed.

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::constructive::{mvca_extend, GreedyTieRule};
use crate::graph::{LabelSubset, LabeledGraph};
use crate::metaheuristics::{AlgorithmId, RunRecord, StoppingCondition};

/// Builds the master solution one label per level. At each level every
/// label outside the master is tentatively completed to a full solution
/// and scored by its component count; the best-scoring label joins the
/// master. Levels run until the master has `k` labels or one component;
/// the stopping condition is only checked between levels, so no candidate
/// scan is ever truncated. The run is fully deterministic, hence the
/// recorded seed is always zero.
pub fn pilot_method(g: &LabeledGraph, k: usize, stop: &StoppingCondition) -> RunRecord {
    let (record, _) = run(g, k, stop);
    record
}

/// Candidate evaluations per level, for structural checks.
#[cfg(test)]
pub(crate) fn pilot_levels(g: &LabeledGraph, k: usize, stop: &StoppingCondition) -> Vec<usize> {
    run(g, k, stop).1
}

fn run(g: &LabeledGraph, k: usize, stop: &StoppingCondition) -> (RunRecord, Vec<usize>) {
    assert!(k >= 1, "label budget must be positive");
    let start = Instant::now();
    let mut norng = ChaCha8Rng::seed_from_u64(0); // FirstMin never draws
    let labels = g.label_count();
    let pool = LabelSubset::full(labels);

    let mut master = LabelSubset::empty(labels);
    let mut master_comp = g.comp_count(&mut master);
    let mut best_score: Option<(usize, Duration)> = None;
    let mut evals_per_level = Vec::new();
    let mut level: u64 = 0;

    while master.len() < k && master_comp > 1 && master.len() < labels {
        if stop.should_stop(start, level, 0) {
            break;
        }
        let mut evals = 0;
        let mut best: Option<(usize, usize)> = None; // (comp, label)
        for candidate in master.unused() {
            let mut seeded = master.clone();
            seeded.insert(candidate);
            let completed = mvca_extend(g, &seeded, &pool, k, GreedyTieRule::FirstMin, &mut norng)
                .expect("master stays below the budget");
            let comp = completed.comp().expect("greedy caches the count");
            evals += 1;
            // strict improvement keeps the lowest label id among ties
            if best.is_none_or(|(bc, _)| comp < bc) {
                best = Some((comp, candidate));
            }
        }
        evals_per_level.push(evals);
        let Some((comp, label)) = best else { break };
        master.insert(label);
        master_comp = g.comp_count(&mut master);
        if best_score.is_none_or(|(bc, _)| comp < bc) {
            best_score = Some((comp, start.elapsed()));
        }
        level += 1;
    }

    let mut solution = mvca_extend(g, &master, &pool, k, GreedyTieRule::FirstMin, &mut norng)
        .expect("master stays within the budget");
    let objective = g.comp_count(&mut solution);
    let time_to_best = match best_score {
        Some((comp, at)) if comp <= objective => at,
        _ => start.elapsed(),
    };
    let record = RunRecord::new(
        AlgorithmId::Pilot,
        0,
        solution,
        objective,
        time_to_best,
        start.elapsed(),
    );
    (record, evals_per_level)
}
