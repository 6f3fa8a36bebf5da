//! Benchmark harness: instance corpora, per-cell execution, and result
//! aggregation into per-group means.

mod report;
mod runner;

pub use report::{read_rows_csv, write_rows_csv, write_summary_markdown, ReportError};
pub use runner::{run_plan, RunRow, RunStatus};

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::constructive::{mvca, GreedyTieRule};
use crate::exact::{exact_solve, ExactConfig, ExactOutcome};
use crate::instances::{
    determine_k, generate_graph, write_instance_file, Instance, InstanceError, InstanceSpec,
    Provenance,
};
use crate::metaheuristics::{
    bvns, ga, grasp, pilot_method, AlgorithmId, GaConfig, QmaxStrategy, RunRecord,
    StoppingCondition,
};

/// One instance family of the plan: `count` random draws at `(n, labels)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroupSpec {
    pub n: usize,
    pub labels: usize,
    /// Fixed budget; `None` determines it per instance.
    pub k: Option<usize>,
}

/// A solver plus its configuration, as one benchmark column.
#[derive(Debug, Clone)]
pub enum AlgorithmConfig {
    Mvca,
    Exact,
    Pilot,
    Ga(GaConfig),
    Grasp,
    Bvns(QmaxStrategy),
}

impl AlgorithmConfig {
    pub fn id(&self) -> AlgorithmId {
        match self {
            AlgorithmConfig::Mvca => AlgorithmId::Mvca,
            AlgorithmConfig::Exact => AlgorithmId::Exact,
            AlgorithmConfig::Pilot => AlgorithmId::Pilot,
            AlgorithmConfig::Ga(_) => AlgorithmId::Ga,
            AlgorithmConfig::Grasp => AlgorithmId::Grasp,
            AlgorithmConfig::Bvns(_) => AlgorithmId::Bvns,
        }
    }

    /// Column identifier; distinct configurations of the same solver get
    /// distinct labels.
    pub fn label(&self) -> String {
        match self {
            AlgorithmConfig::Bvns(strategy)
                if *strategy != QmaxStrategy::default_solution_scaled() =>
            {
                format!("bvns[{strategy}]")
            }
            other => other.id().name().to_string(),
        }
    }

    /// Table heading in the style of the comparison tables.
    pub fn table_label(&self) -> String {
        match self {
            AlgorithmConfig::Bvns(strategy)
                if *strategy != QmaxStrategy::default_solution_scaled() =>
            {
                format!("BVNS[{strategy}]")
            }
            other => other.id().table_label().to_string(),
        }
    }
}

/// Full description of a benchmark: groups, solvers, limits.
#[derive(Debug, Clone)]
pub struct BenchPlan {
    pub groups: Vec<GroupSpec>,
    pub density: f64,
    pub instances_per_group: usize,
    pub base_seed: u64,
    pub algorithms: Vec<AlgorithmConfig>,
    /// Overrides the per-size default when set.
    pub time_limit: Option<Duration>,
    /// Runs per (instance, algorithm) cell; the summary takes the best.
    pub repeats: usize,
    /// Worker threads; 0 means the machine's available parallelism.
    pub workers: usize,
}

#[derive(Debug, Error)]
pub enum PlanError {
    #[error("the plan has no instance groups")]
    NoGroups,
    #[error("the plan has no algorithms")]
    NoAlgorithms,
    #[error("instances per group must be positive")]
    NoInstances,
    #[error("repeats must be positive")]
    NoRepeats,
    #[error("group ({n}, {labels}): {source}")]
    Instance {
        n: usize,
        labels: usize,
        source: InstanceError,
    },
    #[error("failed to write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl BenchPlan {
    /// Per-size stopping budget used when the plan does not fix one:
    /// a minute up to 200 vertices, ten minutes beyond.
    pub fn default_time_limit(n: usize) -> Duration {
        if n <= 200 {
            Duration::from_secs(60)
        } else {
            Duration::from_secs(600)
        }
    }

    pub fn time_limit_for(&self, n: usize) -> Duration {
        self.time_limit
            .unwrap_or_else(|| Self::default_time_limit(n))
    }

    pub fn validate(&self) -> Result<(), PlanError> {
        if self.groups.is_empty() {
            return Err(PlanError::NoGroups);
        }
        if self.algorithms.is_empty() {
            return Err(PlanError::NoAlgorithms);
        }
        if self.instances_per_group == 0 {
            return Err(PlanError::NoInstances);
        }
        if self.repeats == 0 {
            return Err(PlanError::NoRepeats);
        }
        Ok(())
    }
}

/// An instance materialized for a bench run.
#[derive(Debug, Clone)]
pub struct BenchInstance {
    pub path: String,
    pub instance: Instance,
    pub group: GroupSpec,
}

/// Generates every group's instances and writes them under `dir`. A draw
/// whose budget cannot be determined is redrawn at a shifted seed, bounded
/// to keep generation total.
pub fn materialize_instances(
    plan: &BenchPlan,
    dir: &Path,
) -> Result<Vec<BenchInstance>, PlanError> {
    plan.validate()?;
    std::fs::create_dir_all(dir).map_err(|source| PlanError::Write {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut out = Vec::new();
    for (gi, group) in plan.groups.iter().enumerate() {
        for ii in 0..plan.instances_per_group {
            let mut attempt = 0u64;
            let instance = loop {
                let seed = plan
                    .base_seed
                    .wrapping_add(gi as u64 * 10_000)
                    .wrapping_add(ii as u64)
                    .wrapping_add(attempt * 1_000_000);
                let spec = InstanceSpec::new(group.n, group.labels, plan.density, seed);
                let result = generate_graph(&spec).and_then(|graph| {
                    let k = match group.k {
                        Some(k) => k,
                        None => determine_k(&graph)?,
                    };
                    Instance::new(graph, k, Provenance::Generated { spec })
                });
                match result {
                    Ok(inst) => break inst,
                    Err(e) if attempt < 50 && matches!(e, InstanceError::NoValidK) => {
                        attempt += 1;
                        continue;
                    }
                    Err(source) => {
                        return Err(PlanError::Instance {
                            n: group.n,
                            labels: group.labels,
                            source,
                        })
                    }
                }
            };
            let name = format!("g{gi:02}_i{ii:02}_n{}_l{}.klsf", group.n, group.labels);
            let path = dir.join(&name);
            write_instance_file(&instance, &path).map_err(|source| PlanError::Write {
                path: path.clone(),
                source,
            })?;
            out.push(BenchInstance {
                path: path.display().to_string(),
                instance,
                group: *group,
            });
        }
    }
    Ok(out)
}

/// Wraps instance files already on disk (canonical format) into bench
/// instances, grouped by their headers.
pub fn load_instances(
    paths: &[PathBuf],
) -> Result<Vec<BenchInstance>, crate::instances::ParseError> {
    let mut out = Vec::new();
    for path in paths {
        let instance = crate::instances::read_instance_file(path)?;
        let group = GroupSpec {
            n: instance.graph.vertex_count(),
            labels: instance.graph.label_count(),
            k: Some(instance.k),
        };
        out.push(BenchInstance {
            path: path.display().to_string(),
            instance,
            group,
        });
    }
    Ok(out)
}

/// Result of one solver execution on one instance.
#[derive(Debug, Clone)]
pub enum CellOutcome {
    Completed(RunRecord),
    /// The exhaustive search ran out of time with nothing to report.
    NotFound {
        elapsed: Duration,
    },
}

/// Runs one algorithm on one instance under a wall-clock limit.
pub fn execute(
    instance: &Instance,
    algorithm: &AlgorithmConfig,
    seed: u64,
    time_limit: Duration,
) -> CellOutcome {
    let g = &instance.graph;
    let k = instance.k;
    let stop = StoppingCondition::max_time(time_limit);
    match algorithm {
        AlgorithmConfig::Mvca => {
            let start = Instant::now();
            let mut norng = ChaCha8Rng::seed_from_u64(0);
            let mut sol = mvca(g, k, GreedyTieRule::FirstMin, &mut norng);
            let comp = g.comp_count(&mut sol);
            let elapsed = start.elapsed();
            CellOutcome::Completed(RunRecord::new(
                AlgorithmId::Mvca,
                0,
                sol,
                comp,
                elapsed,
                elapsed,
            ))
        }
        AlgorithmConfig::Exact => {
            let result = exact_solve(g, k, &ExactConfig::new(time_limit))
                .expect("instance budgets are validated at construction");
            match result.outcome {
                ExactOutcome::Optimal(c) | ExactOutcome::Unproven(c) => {
                    let comp = c.comp().expect("search caches the count");
                    CellOutcome::Completed(RunRecord::new(
                        AlgorithmId::Exact,
                        0,
                        c,
                        comp,
                        result.elapsed,
                        result.elapsed,
                    ))
                }
                ExactOutcome::NotFound => CellOutcome::NotFound {
                    elapsed: result.elapsed,
                },
            }
        }
        AlgorithmConfig::Pilot => CellOutcome::Completed(pilot_method(g, k, &stop)),
        AlgorithmConfig::Ga(cfg) => CellOutcome::Completed(ga(g, k, cfg, &stop, seed)),
        AlgorithmConfig::Grasp => CellOutcome::Completed(grasp(g, k, &stop, seed)),
        AlgorithmConfig::Bvns(strategy) => {
            CellOutcome::Completed(bvns(g, k, *strategy, &stop, seed))
        }
    }
}

/// Seed for one (instance, algorithm, repeat) cell, derived so cells are
/// distinct but reproducible from the base seed.
pub fn cell_seed(base: u64, instance_idx: usize, algorithm_idx: usize, repeat: usize) -> u64 {
    base.wrapping_add((instance_idx as u64) << 32)
        .wrapping_add((algorithm_idx as u64) << 16)
        .wrapping_add(repeat as u64)
}

/// Per-algorithm aggregate over one group.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgorithmSummary {
    pub label: String,
    /// Raw rows behind this cell column (repeats included).
    pub runs: usize,
    pub mean_objective: Option<f64>,
    pub mean_time_to_best_ms: Option<f64>,
    pub nf_runs: usize,
    pub error_runs: usize,
}

/// Aggregates for one (n, labels) group, algorithms in plan order.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupSummary {
    pub n: usize,
    pub labels: usize,
    pub k_min: usize,
    pub k_max: usize,
    pub algorithms: Vec<AlgorithmSummary>,
}

impl GroupSummary {
    pub fn algorithm(&self, label: &str) -> Option<&AlgorithmSummary> {
        self.algorithms.iter().find(|a| a.label == label)
    }
}

/// Folds raw rows into per-group means, groups ascending by (n, labels).
/// With repeats, each (instance, algorithm) cell contributes its best
/// objective (ties to the faster run). A column with any not-found or
/// errored run reports no mean.
pub fn summarize(rows: &[RunRow], algorithm_labels: &[String]) -> Vec<GroupSummary> {
    let mut keys: Vec<(usize, usize)> = rows.iter().map(|r| (r.n, r.labels)).collect();
    keys.sort_unstable();
    keys.dedup();

    let mut out = Vec::with_capacity(keys.len());
    for (n, labels) in keys {
        let group_rows: Vec<&RunRow> = rows
            .iter()
            .filter(|r| r.n == n && r.labels == labels)
            .collect();
        let k_min = group_rows.iter().map(|r| r.k).min().unwrap_or(0);
        let k_max = group_rows.iter().map(|r| r.k).max().unwrap_or(0);
        let mut algorithms = Vec::with_capacity(algorithm_labels.len());
        for label in algorithm_labels {
            let column: Vec<&&RunRow> = group_rows
                .iter()
                .filter(|r| &r.algorithm == label)
                .collect();
            let runs = column.len();
            let nf_runs = column
                .iter()
                .filter(|r| matches!(r.status, RunStatus::NotFound))
                .count();
            let error_runs = column
                .iter()
                .filter(|r| matches!(r.status, RunStatus::Error(_)))
                .count();
            let mut per_instance: Vec<(&str, f64, f64)> = Vec::new(); // (path, obj, ttb)
            for row in &column {
                let (Some(obj), Some(ttb)) = (row.objective, row.time_to_best_ms) else {
                    continue;
                };
                match per_instance
                    .iter_mut()
                    .find(|(path, _, _)| *path == row.instance_path)
                {
                    Some(cell) => {
                        if (obj as f64, ttb) < (cell.1, cell.2) {
                            cell.1 = obj as f64;
                            cell.2 = ttb;
                        }
                    }
                    None => per_instance.push((&row.instance_path, obj as f64, ttb)),
                }
            }
            let (mean_objective, mean_time_to_best_ms) =
                if nf_runs > 0 || error_runs > 0 || per_instance.is_empty() {
                    (None, None)
                } else {
                    let count = per_instance.len() as f64;
                    (
                        Some(per_instance.iter().map(|c| c.1).sum::<f64>() / count),
                        Some(per_instance.iter().map(|c| c.2).sum::<f64>() / count),
                    )
                };
            algorithms.push(AlgorithmSummary {
                label: label.clone(),
                runs,
                mean_objective,
                mean_time_to_best_ms,
                nf_runs,
                error_runs,
            });
        }
        out.push(GroupSummary {
            n,
            labels,
            k_min,
            k_max,
            algorithms,
        });
    }
    out
}
