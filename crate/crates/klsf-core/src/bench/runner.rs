//! Executes every (instance, algorithm, repeat) cell of a plan across a
//! worker pool and merges the rows in a deterministic order.

use std::fmt;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Duration;

use crate::bench::{cell_seed, execute, AlgorithmConfig, BenchInstance, BenchPlan, CellOutcome};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunStatus {
    Ok,
    /// Exhaustive search exceeded its budget with nothing proven.
    NotFound,
    Error(String),
}

impl fmt::Display for RunStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunStatus::Ok => f.write_str("ok"),
            RunStatus::NotFound => f.write_str("nf"),
            RunStatus::Error(msg) => write!(f, "error: {msg}"),
        }
    }
}

/// One raw result row; the CSV schema mirrors the fields in order.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRow {
    pub instance_path: String,
    pub n: usize,
    pub labels: usize,
    pub k: usize,
    pub algorithm: String,
    pub seed: u64,
    pub objective: Option<usize>,
    pub labels_used: Option<usize>,
    pub time_to_best_ms: Option<f64>,
    pub total_time_ms: f64,
    pub status: RunStatus,
}

struct Task<'a> {
    instance: &'a BenchInstance,
    algorithm: &'a AlgorithmConfig,
    seed: u64,
    time_limit: Duration,
}

fn run_task(task: &Task<'_>) -> RunRow {
    let inst = task.instance;
    let base = RunRow {
        instance_path: inst.path.clone(),
        n: inst.instance.graph.vertex_count(),
        labels: inst.instance.graph.label_count(),
        k: inst.instance.k,
        algorithm: task.algorithm.label(),
        seed: task.seed,
        objective: None,
        labels_used: None,
        time_to_best_ms: None,
        total_time_ms: 0.0,
        status: RunStatus::Ok,
    };
    let outcome = catch_unwind(AssertUnwindSafe(|| {
        execute(&inst.instance, task.algorithm, task.seed, task.time_limit)
    }));
    match outcome {
        Ok(CellOutcome::Completed(record)) => RunRow {
            seed: record.seed,
            objective: Some(record.objective),
            labels_used: Some(record.labels_used),
            time_to_best_ms: Some(duration_ms(record.time_to_best)),
            total_time_ms: duration_ms(record.total_time),
            ..base
        },
        Ok(CellOutcome::NotFound { elapsed }) => RunRow {
            total_time_ms: duration_ms(elapsed),
            status: RunStatus::NotFound,
            ..base
        },
        Err(panic) => {
            let message = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "run panicked".to_string());
            RunRow {
                status: RunStatus::Error(message),
                ..base
            }
        }
    }
}

pub(crate) fn duration_ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

/// Runs every cell of the plan over `plan.workers` threads (0 = machine
/// parallelism). Row order is instance-major, then algorithm, then repeat,
/// independent of scheduling. `progress` echoes one line per finished cell
/// to stderr.
pub fn run_plan(plan: &BenchPlan, instances: &[BenchInstance], progress: bool) -> Vec<RunRow> {
    let mut tasks = Vec::new();
    for (ii, instance) in instances.iter().enumerate() {
        for (ai, algorithm) in plan.algorithms.iter().enumerate() {
            for repeat in 0..plan.repeats {
                tasks.push(Task {
                    instance,
                    algorithm,
                    seed: cell_seed(plan.base_seed, ii, ai, repeat),
                    time_limit: plan.time_limit_for(instance.instance.graph.vertex_count()),
                });
            }
        }
    }
    let workers = if plan.workers == 0 {
        std::thread::available_parallelism().map_or(1, |p| p.get())
    } else {
        plan.workers
    };
    let total = tasks.len();
    let next = AtomicUsize::new(0);
    let done = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<RunRow>>> = (0..total).map(|_| Mutex::new(None)).collect();

    std::thread::scope(|scope| {
        for _ in 0..workers.max(1).min(total.max(1)) {
            scope.spawn(|| loop {
                let idx = next.fetch_add(1, Ordering::Relaxed);
                if idx >= total {
                    break;
                }
                let row = run_task(&tasks[idx]);
                if progress {
                    let finished = done.fetch_add(1, Ordering::Relaxed) + 1;
                    let objective = row
                        .objective
                        .map(|o| o.to_string())
                        .unwrap_or_else(|| row.status.to_string());
                    eprintln!(
                        "[{finished}/{total}] {} seed={} on {}: {objective}",
                        row.algorithm, row.seed, row.instance_path
                    );
                }
                *slots[idx].lock().expect("result slot poisoned") = Some(row);
            });
        }
    });

    slots
        .into_iter()
        .map(|slot| {
            slot.into_inner()
                .expect("result slot poisoned")
                .expect("every task writes its slot")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::{materialize_instances, GroupSpec};
    use crate::metaheuristics::GaConfig;
    use tempfile::tempdir;

    fn tiny_plan() -> BenchPlan {
        BenchPlan {
            groups: vec![
                GroupSpec {
                    n: 10,
                    labels: 5,
                    k: Some(2),
                },
                GroupSpec {
                    n: 8,
                    labels: 4,
                    k: None,
                },
            ],
            density: 0.5,
            instances_per_group: 2,
            base_seed: 5,
            algorithms: vec![
                AlgorithmConfig::Mvca,
                AlgorithmConfig::Exact,
                AlgorithmConfig::Ga(GaConfig::new(6)),
            ],
            time_limit: Some(Duration::from_secs(5)),
            repeats: 1,
            workers: 2,
        }
    }

    #[test]
    fn every_cell_produces_exactly_one_row() {
        let plan = tiny_plan();
        let dir = tempdir().unwrap();
        let instances = materialize_instances(&plan, dir.path()).unwrap();
        assert_eq!(instances.len(), 4);
        let rows = run_plan(&plan, &instances, false);
        assert_eq!(rows.len(), instances.len() * plan.algorithms.len());
        for row in &rows {
            match &row.status {
                RunStatus::Ok => {
                    assert!(row.objective.is_some());
                    assert!(row.labels_used.unwrap() <= row.k);
                }
                RunStatus::NotFound => assert!(row.objective.is_none()),
                RunStatus::Error(msg) => panic!("unexpected error row: {msg}"),
            }
        }
    }

    #[test]
    fn a_crashing_run_becomes_an_error_row_and_the_bench_continues() {
        // a zero-size population violates the genetic solver's contract
        // and panics; the runner must record it and keep going
        let plan = BenchPlan {
            groups: vec![GroupSpec {
                n: 8,
                labels: 4,
                k: Some(2),
            }],
            density: 0.5,
            instances_per_group: 2,
            base_seed: 1,
            algorithms: vec![AlgorithmConfig::Ga(GaConfig::new(0)), AlgorithmConfig::Mvca],
            time_limit: Some(Duration::from_secs(2)),
            repeats: 1,
            workers: 1,
        };
        let dir = tempdir().unwrap();
        let instances = materialize_instances(&plan, dir.path()).unwrap();
        let rows = run_plan(&plan, &instances, false);
        assert_eq!(rows.len(), 4);
        let errors: Vec<_> = rows
            .iter()
            .filter(|r| matches!(r.status, RunStatus::Error(_)))
            .collect();
        assert_eq!(errors.len(), 2, "both ga cells must fail");
        assert!(errors.iter().all(|r| r.algorithm == "ga"));
        assert!(rows
            .iter()
            .filter(|r| r.algorithm == "mvca")
            .all(|r| r.status == RunStatus::Ok));
    }

    #[test]
    fn row_order_is_deterministic_across_worker_counts() {
        let mut plan = tiny_plan();
        let dir = tempdir().unwrap();
        let instances = materialize_instances(&plan, dir.path()).unwrap();
        let sequential = run_plan(&plan, &instances, false);
        plan.workers = 4;
        let parallel = run_plan(&plan, &instances, false);
        let key = |rows: &[RunRow]| -> Vec<(String, String, u64, Option<usize>)> {
            rows.iter()
                .map(|r| {
                    (
                        r.instance_path.clone(),
                        r.algorithm.clone(),
                        r.seed,
                        r.objective,
                    )
                })
                .collect()
        };
        assert_eq!(key(&sequential), key(&parallel));
    }
}
