//! The four metaheuristics: lookahead construction, genetic search, greedy
//! randomized construction with local search, and the shaking-based
//! variable neighbourhood search, sharing a common run-record shape.

mod bvns;
mod ga;
mod grasp;
mod neighborhood;
mod pilot;
mod qmax;

pub use bvns::{bvns, bvns_traced, BvnsTraceEntry};
pub use ga::{ga, GaConfig};
pub use grasp::grasp;
pub use neighborhood::{local_search, shake, ShakeError};
pub use pilot::pilot_method;
pub use qmax::{Alpha, AlphaParseError, QmaxKind, QmaxStrategy};

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::graph::LabelSubset;

/// When a solver run must halt. At least one criterion should be set; a
/// zero iteration budget is allowed and stops a run before its first
/// improvement attempt.
#[derive(Debug, Clone, Default)]
pub struct StoppingCondition {
    pub max_time: Option<Duration>,
    pub max_iterations: Option<u64>,
    pub max_idle_iterations: Option<u64>,
}

impl StoppingCondition {
    pub fn max_time(limit: Duration) -> Self {
        StoppingCondition {
            max_time: Some(limit),
            ..Default::default()
        }
    }

    pub fn max_iterations(count: u64) -> Self {
        StoppingCondition {
            max_iterations: Some(count),
            ..Default::default()
        }
    }

    pub fn with_max_time(mut self, limit: Duration) -> Self {
        self.max_time = Some(limit);
        self
    }

    pub fn with_max_iterations(mut self, count: u64) -> Self {
        self.max_iterations = Some(count);
        self
    }

    pub fn with_max_idle_iterations(mut self, count: u64) -> Self {
        self.max_idle_iterations = Some(count);
        self
    }

    pub fn is_configured(&self) -> bool {
        self.max_time.is_some()
            || self.max_iterations.is_some()
            || self.max_idle_iterations.is_some()
    }

    pub fn should_stop(&self, started: Instant, iterations: u64, idle_iterations: u64) -> bool {
        if let Some(limit) = self.max_time {
            if started.elapsed() >= limit {
                return true;
            }
        }
        if let Some(limit) = self.max_iterations {
            if iterations >= limit {
                return true;
            }
        }
        if let Some(limit) = self.max_idle_iterations {
            if idle_iterations >= limit {
                return true;
            }
        }
        false
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AlgorithmId {
    Mvca,
    Exact,
    Pilot,
    Ga,
    Grasp,
    Bvns,
}

impl AlgorithmId {
    pub const ALL: [AlgorithmId; 6] = [
        AlgorithmId::Mvca,
        AlgorithmId::Exact,
        AlgorithmId::Pilot,
        AlgorithmId::Ga,
        AlgorithmId::Grasp,
        AlgorithmId::Bvns,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            AlgorithmId::Mvca => "mvca",
            AlgorithmId::Exact => "exact",
            AlgorithmId::Pilot => "pilot",
            AlgorithmId::Ga => "ga",
            AlgorithmId::Grasp => "grasp",
            AlgorithmId::Bvns => "bvns",
        }
    }

    /// Column heading used by the benchmark tables.
    pub fn table_label(&self) -> &'static str {
        match self {
            AlgorithmId::Mvca => "MVCA",
            AlgorithmId::Exact => "EXACT",
            AlgorithmId::Pilot => "PM",
            AlgorithmId::Ga => "GA",
            AlgorithmId::Grasp => "GRASP",
            AlgorithmId::Bvns => "BVNS",
        }
    }
}

impl fmt::Display for AlgorithmId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AlgorithmId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "mvca" => Ok(AlgorithmId::Mvca),
            "exact" => Ok(AlgorithmId::Exact),
            "pilot" => Ok(AlgorithmId::Pilot),
            "ga" => Ok(AlgorithmId::Ga),
            "grasp" => Ok(AlgorithmId::Grasp),
            "bvns" => Ok(AlgorithmId::Bvns),
            other => Err(format!(
                "unknown algorithm {other:?}; expected one of mvca, exact, pilot, ga, grasp, bvns"
            )),
        }
    }
}

/// Outcome of one solver execution.
#[derive(Debug, Clone)]
pub struct RunRecord {
    pub algorithm: AlgorithmId,
    pub seed: u64,
    pub best: LabelSubset,
    /// Component count of `best`.
    pub objective: usize,
    pub labels_used: usize,
    /// Elapsed time at the last improvement of the incumbent.
    pub time_to_best: Duration,
    pub total_time: Duration,
}

impl RunRecord {
    pub(crate) fn new(
        algorithm: AlgorithmId,
        seed: u64,
        best: LabelSubset,
        objective: usize,
        time_to_best: Duration,
        total_time: Duration,
    ) -> Self {
        RunRecord {
            algorithm,
            seed,
            labels_used: best.len(),
            best,
            objective,
            time_to_best,
            total_time,
        }
    }
}
