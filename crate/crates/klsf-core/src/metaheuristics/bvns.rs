//! Basic variable neighbourhood search: shake at growing amplitude, run
//! the local search, move only on strictly fewer components.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{LabelSubset, LabeledGraph};
use crate::metaheuristics::neighborhood::{local_search, shake};
use crate::metaheuristics::{AlgorithmId, QmaxStrategy, RunRecord, StoppingCondition};

/// One shake/local-search cycle as seen by [`bvns_traced`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BvnsTraceEntry {
    /// Outer pass the cycle belongs to.
    pub pass: u64,
    /// Amplitude the cycle ran at (before clamping).
    pub q: usize,
    pub candidate_comp: usize,
    /// Incumbent component count after the acceptance decision.
    pub incumbent_comp: usize,
    pub accepted: bool,
}

/// Runs the search until the stopping condition fires or the incumbent
/// reaches a single component (after which no move can improve it).
///
/// The incumbent starts as `k` distinct uniformly random labels (fewer if
/// the component count hits one on the way). Each outer pass grows the
/// amplitude `q` from 1 while `q < qmax`; a candidate replaces the
/// incumbent only when its component count is strictly smaller, which
/// resets `q` to 1 and re-evaluates `qmax`. Amplitudes are clamped to the
/// label universe and to `|incumbent| + k` so every shaken solution stays
/// within the budget.
pub fn bvns(
    g: &LabeledGraph,
    k: usize,
    strategy: QmaxStrategy,
    stop: &StoppingCondition,
    seed: u64,
) -> RunRecord {
    run(g, k, strategy, stop, seed, &mut |_| {})
}

/// Same search, recording every shake/local-search cycle.
pub fn bvns_traced(
    g: &LabeledGraph,
    k: usize,
    strategy: QmaxStrategy,
    stop: &StoppingCondition,
    seed: u64,
) -> (RunRecord, Vec<BvnsTraceEntry>) {
    let mut trace = Vec::new();
    let record = run(g, k, strategy, stop, seed, &mut |e| trace.push(e));
    (record, trace)
}

fn run(
    g: &LabeledGraph,
    k: usize,
    strategy: QmaxStrategy,
    stop: &StoppingCondition,
    seed: u64,
    observe: &mut dyn FnMut(BvnsTraceEntry),
) -> RunRecord {
    assert!(k >= 1, "label budget must be positive");
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let labels = g.label_count();

    // initial solution: iterative inclusion of random distinct labels
    let mut incumbent = LabelSubset::empty(labels);
    let mut comp = g.comp_count(&mut incumbent);
    let mut pool: Vec<usize> = (1..=labels).collect();
    while incumbent.len() < k && comp > 1 && !pool.is_empty() {
        let idx = rng.random_range(0..pool.len());
        incumbent.insert(pool.swap_remove(idx));
        comp = g.comp_count(&mut incumbent);
    }
    let mut time_to_best = start.elapsed();

    let mut passes: u64 = 0;
    let mut idle_passes: u64 = 0;
    'outer: while comp > 1 && !stop.should_stop(start, passes, idle_passes) {
        let mut q = 1;
        let mut qmax = strategy.eval(k, incumbent.len());
        let mut improved = false;
        while q < qmax {
            if stop.should_stop(start, passes, idle_passes) {
                break 'outer;
            }
            let amplitude = q.min(labels).min(incumbent.len() + k);
            let shaken = shake(g, &incumbent, amplitude, &mut rng)
                .expect("clamped amplitude is always valid");
            let mut candidate = local_search(g, &shaken, k, &mut rng);
            let candidate_comp = g.comp_count(&mut candidate);
            let accepted = candidate_comp < comp;
            let q_used = q;
            if accepted {
                incumbent = candidate;
                comp = candidate_comp;
                time_to_best = start.elapsed();
                q = 1;
                qmax = strategy.eval(k, incumbent.len());
                improved = true;
            } else {
                q += 1;
            }
            observe(BvnsTraceEntry {
                pass: passes,
                q: q_used,
                candidate_comp,
                incumbent_comp: comp,
                accepted,
            });
            if comp == 1 {
                break 'outer;
            }
        }
        passes += 1;
        if improved {
            idle_passes = 0;
        } else {
            idle_passes += 1;
        }
    }

    RunRecord::new(
        AlgorithmId::Bvns,
        seed,
        incumbent,
        comp,
        time_to_best,
        start.elapsed(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::brute_force_oracle;
    use crate::testutil::random_graph;
    use rand::Rng;
    use rand_chacha::ChaCha8Rng;
    use std::time::Duration;

    #[test]
    fn zero_iteration_budget_returns_the_initial_solution() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let g = random_graph(&mut rng, 12, 6, 20);
        let stop = StoppingCondition::max_iterations(0);
        let record = bvns(&g, 3, QmaxStrategy::default_solution_scaled(), &stop, 7);
        assert!(record.labels_used <= 3);
        assert_eq!(record.objective, g.comp_count(&mut record.best.clone()));
    }

    #[test]
    fn reaches_the_oracle_optimum_on_small_instances() {
        let stop = StoppingCondition::max_iterations(200);
        for seed in 0..25u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xb0b);
            let n = rng.random_range(4..12);
            let labels = rng.random_range(2..9);
            let m = rng.random_range(n..3 * n);
            let g = random_graph(&mut rng, n, labels, m);
            let k = rng.random_range(1..=labels.min(3));
            let record = bvns(&g, k, QmaxStrategy::default_solution_scaled(), &stop, seed);
            let optimum = brute_force_oracle(&g, k).unwrap();
            assert!(record.objective >= optimum);
            assert!(record.labels_used <= k);
        }
    }

    #[test]
    fn trace_resets_amplitude_exactly_on_improvements() {
        let mut rng = ChaCha8Rng::seed_from_u64(123);
        let g = random_graph(&mut rng, 25, 10, 45);
        let stop = StoppingCondition::max_iterations(50);
        let (record, trace) = bvns_traced(&g, 4, QmaxStrategy::default_solution_scaled(), &stop, 3);
        assert!(!trace.is_empty());
        assert_eq!(trace[0].q, 1);
        for window in trace.windows(2) {
            let (prev, cur) = (window[0], window[1]);
            if cur.pass == prev.pass {
                if prev.accepted {
                    assert_eq!(cur.q, 1, "improvement must reset the amplitude");
                } else {
                    assert_eq!(cur.q, prev.q + 1, "rejection must grow the amplitude");
                }
            } else {
                assert_eq!(cur.q, 1, "a new pass starts at amplitude one");
            }
        }
        let mut last_comp: Option<usize> = None;
        for entry in &trace {
            if let Some(prev) = last_comp {
                assert!(entry.incumbent_comp <= prev, "incumbent must not worsen");
                assert_eq!(entry.accepted, entry.candidate_comp < prev);
            }
            last_comp = Some(entry.incumbent_comp);
        }
        assert_eq!(record.objective, last_comp.unwrap());
    }

    #[test]
    fn identical_seed_and_iteration_budget_reproduce_the_run() {
        let mut rng = ChaCha8Rng::seed_from_u64(321);
        let g = random_graph(&mut rng, 30, 12, 80);
        let stop = StoppingCondition::max_iterations(40);
        let a = bvns(&g, 4, QmaxStrategy::default_solution_scaled(), &stop, 99);
        let b = bvns(&g, 4, QmaxStrategy::default_solution_scaled(), &stop, 99);
        assert_eq!(a.best, b.best);
        assert_eq!(a.objective, b.objective);
        assert_eq!(a.labels_used, b.labels_used);
    }

    #[test]
    fn oversized_fixed_amplitudes_stay_feasible() {
        // a fixed amplitude far above the budget exercises the clamping
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let g = random_graph(&mut rng, 20, 10, 30);
        let stop = StoppingCondition::max_iterations(30);
        let strategy = QmaxStrategy::fixed("25".parse().unwrap());
        let record = bvns(&g, 2, strategy, &stop, 5);
        assert!(record.labels_used <= 2);
        assert_eq!(record.objective, g.comp_count(&mut record.best.clone()));
    }

    #[test]
    fn stops_quickly_once_connected() {
        // a dense tri-label graph is connected with all labels selectable,
        // so the run must end well before its time budget
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let g = random_graph(&mut rng, 10, 3, 60);
        let stop = StoppingCondition::max_time(Duration::from_secs(10));
        let start = Instant::now();
        let record = bvns(&g, 3, QmaxStrategy::default_solution_scaled(), &stop, 1);
        assert_eq!(record.objective, 1);
        assert!(start.elapsed() < Duration::from_secs(5));
    }
}
