//! Population search with greedy-union crossover and add-then-prune
//! mutation, both applied to every individual of every generation.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::constructive::{mvca_extend, GreedyTieRule};
use crate::graph::{LabelSubset, LabeledGraph};
use crate::metaheuristics::{AlgorithmId, RunRecord, StoppingCondition};

#[derive(Debug, Clone)]
pub struct GaConfig {
    /// Number of individuals; an even count of at least two.
    pub population_size: usize,
    /// Defaults to half the population size when unset.
    pub generations: Option<usize>,
}

impl GaConfig {
    pub fn new(population_size: usize) -> Self {
        GaConfig {
            population_size,
            generations: None,
        }
    }

    pub fn with_generations(mut self, generations: usize) -> Self {
        self.generations = Some(generations);
        self
    }

    pub fn effective_generations(&self) -> usize {
        self.generations.unwrap_or(self.population_size / 2).max(1)
    }
}

fn fitness(c: &LabelSubset) -> (usize, usize) {
    (
        c.comp().expect("population members carry their count"),
        c.len(),
    )
}

/// Runs the generational loop until the configured generation count, the
/// stopping condition, or a single-component individual ends it early.
/// Fitness is the component count, ties broken by fewer labels.
pub fn ga(
    g: &LabeledGraph,
    k: usize,
    cfg: &GaConfig,
    stop: &StoppingCondition,
    seed: u64,
) -> RunRecord {
    assert!(
        cfg.population_size >= 2,
        "population needs at least two individuals"
    );
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut population: Vec<LabelSubset> = (0..cfg.population_size)
        .map(|_| random_individual(g, k, &mut rng))
        .collect();

    let mut best = population[0].clone();
    let mut best_fit = fitness(&best);
    for individual in &population[1..] {
        if fitness(individual) < best_fit {
            best = individual.clone();
            best_fit = fitness(&best);
        }
    }
    let mut time_to_best = start.elapsed();

    let generations = cfg.effective_generations();
    let mut idle: u64 = 0;
    'outer: for generation in 0..generations as u64 {
        if best_fit.0 == 1 || stop.should_stop(start, generation, idle) {
            break;
        }
        let mut improved = false;
        for i in 0..population.len() {
            if stop.should_stop(start, generation, idle) {
                break 'outer;
            }
            let mate = population[(i + 1) % population.len()].clone();
            let child = crossover(g, &population[i], &mate, k, &mut rng);
            let child = mutate(g, child, &mut rng);
            let child_fit = fitness(&child);
            if child_fit < best_fit {
                best = child.clone();
                best_fit = child_fit;
                time_to_best = start.elapsed();
                improved = true;
            }
            if child_fit < fitness(&population[i]) {
                population[i] = child;
            }
            if best_fit.0 == 1 {
                break 'outer;
            }
        }
        idle = if improved { 0 } else { idle + 1 };
    }

    RunRecord::new(
        AlgorithmId::Ga,
        seed,
        best,
        best_fit.0,
        time_to_best,
        start.elapsed(),
    )
}

/// Random labels are added to an empty set until the individual has `k`
/// of them (or the universe runs out).
fn random_individual<R: Rng + ?Sized>(g: &LabeledGraph, k: usize, rng: &mut R) -> LabelSubset {
    let labels = g.label_count();
    let mut c = LabelSubset::empty(labels);
    let mut pool: Vec<usize> = (1..=labels).collect();
    while c.len() < k && !pool.is_empty() {
        let idx = rng.random_range(0..pool.len());
        c.insert(pool.swap_remove(idx));
    }
    g.comp_count(&mut c);
    c
}

/// One child per pair: the greedy constructor re-selects from the union of
/// both parents' labels, so children only carry inherited labels.
fn crossover<R: Rng + ?Sized>(
    g: &LabeledGraph,
    first: &LabelSubset,
    second: &LabelSubset,
    k: usize,
    rng: &mut R,
) -> LabelSubset {
    let pool = first.union(second);
    mvca_extend(
        g,
        &LabelSubset::empty(g.label_count()),
        &pool,
        k,
        GreedyTieRule::FirstMin,
        rng,
    )
    .expect("an empty base never exceeds the budget")
}

/// Adds one uniformly random unused label, then removes the label whose
/// removal leaves the fittest survivor set (lowest label id on ties),
/// restoring the original size. Skipped when every label is already used.
fn mutate<R: Rng + ?Sized>(g: &LabeledGraph, mut child: LabelSubset, rng: &mut R) -> LabelSubset {
    let unused: Vec<usize> = child.unused().collect();
    if unused.is_empty() {
        g.comp_count(&mut child);
        return child;
    }
    child.insert(unused[rng.random_range(0..unused.len())]);
    let mut best_label = None;
    let mut best_fit = (usize::MAX, usize::MAX);
    for label in child.iter() {
        let mut survivor = child.clone();
        survivor.remove(label);
        let fit = (g.comp_count(&mut survivor), survivor.len());
        if fit < best_fit {
            best_fit = fit;
            best_label = Some(label);
        }
    }
    child.remove(best_label.expect("the mutated child is never empty"));
    g.comp_count(&mut child);
    child
}
