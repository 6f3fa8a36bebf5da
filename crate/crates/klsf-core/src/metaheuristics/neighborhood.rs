//! Shaking and local search over label subsets.
//!
//! Solutions at Hamming distance `q` from the incumbent form the `q`-th
//! neighbourhood. Shaking jumps to a uniformly random member of it; the
//! local search tries to drop each label in turn and rebuild greedily.

use rand::Rng;
use thiserror::Error;

use crate::constructive::{mvca_extend, GreedyTieRule};
use crate::graph::{LabelSubset, LabeledGraph};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ShakeError {
    #[error("shake amplitude {q} outside [1, {labels}]: no such neighbour exists")]
    AmplitudeOutOfRange { q: usize, labels: usize },
}

/// Random neighbour at Hamming distance exactly `q` from `c`.
///
/// The first `min(q, |c|)` steps each remove a uniformly random remaining
/// member of the original set; once the original labels are gone the
/// remaining steps each add a uniformly random label drawn from outside
/// both the original and the current set, so no step cancels another and
/// the output lands at distance exactly `q`. The component count of the
/// result is evaluated before returning.
pub fn shake<R: Rng + ?Sized>(
    g: &LabeledGraph,
    c: &LabelSubset,
    q: usize,
    rng: &mut R,
) -> Result<LabelSubset, ShakeError> {
    let labels = g.label_count();
    if q < 1 || q > labels {
        return Err(ShakeError::AmplitudeOutOfRange { q, labels });
    }
    let mut out = c.clone();
    let mut remaining: Vec<usize> = c.iter().collect();
    let mut fresh: Vec<usize> = c.unused().collect();
    let original_len = remaining.len();
    for step in 1..=q {
        if step <= original_len {
            let idx = rng.random_range(0..remaining.len());
            out.remove(remaining.swap_remove(idx));
        } else {
            let idx = rng.random_range(0..fresh.len());
            out.insert(fresh.swap_remove(idx));
        }
    }
    g.comp_count(&mut out);
    Ok(out)
}

/// Best-improvement local search: for each label of `c`, drop it and
/// rebuild greedily (random tie-breaking among minimizers) until the
/// budget or a single component is reached; returns the best of the input
/// and every rebuilt solution under the (components, size) order, keeping
/// the incumbent on ties. Requires `|c| <= k`.
pub fn local_search<R: Rng + ?Sized>(
    g: &LabeledGraph,
    c: &LabelSubset,
    k: usize,
    rng: &mut R,
) -> LabelSubset {
    let mut best = c.clone();
    let best_comp = g.comp_count(&mut best);
    let mut best_key = (best_comp, best.len());
    let pool = LabelSubset::full(g.label_count());
    for drop in c.iter() {
        let mut seed = c.clone();
        seed.remove(drop);
        let mut rebuilt = mvca_extend(g, &seed, &pool, k, GreedyTieRule::RandomAmongMin, rng)
            .expect("dropping a label keeps the solution within budget");
        let key = (g.comp_count(&mut rebuilt), rebuilt.len());
        if key < best_key {
            best = rebuilt;
            best_key = key;
        }
    }
    best
}
