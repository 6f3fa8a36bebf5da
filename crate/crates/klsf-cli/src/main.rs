//! Command-line front end: generate instance corpora, run single solves,
//! and run full benchmark comparisons.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use klsf_core::bench::{
    load_instances, materialize_instances, run_plan, summarize, write_rows_csv,
    write_summary_markdown, AlgorithmConfig, BenchInstance, BenchPlan, CellOutcome, GroupSpec,
};
use klsf_core::instances::{
    determine_k, generate_graph, import_official_file, read_instance_file, write_instance_file,
    Instance, InstanceSpec, ParseError, Provenance,
};
use klsf_core::metaheuristics::{AlgorithmId, Alpha, GaConfig, QmaxKind, QmaxStrategy};

const EXIT_USAGE: u8 = 2;
const EXIT_PARSE: u8 = 3;
const EXIT_NOT_FOUND: u8 = 4;

#[derive(Parser)]
#[command(
    name = "klsf",
    about = "Solvers and benchmarks for the k-labelled spanning forest problem",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate random instances with auto-determined budgets.
    Generate(GenerateArgs),
    /// Run one solver on one instance file; prints a CSV row.
    Solve(SolveArgs),
    /// Run a full comparison over instance groups and solvers.
    Bench(BenchArgs),
    /// Convert externally published instance files to the canonical format.
    ImportOfficial(ImportArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// Vertex count.
    #[arg(long)]
    n: usize,
    /// Label count.
    #[arg(long)]
    labels: usize,
    /// Edge density in (0, 1].
    #[arg(long, default_value_t = 0.5)]
    density: f64,
    /// Instances to generate.
    #[arg(long, default_value_t = 10)]
    count: usize,
    /// Base seed; instance i uses seed + i.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Fixed label budget; determined per instance when omitted.
    #[arg(long)]
    k: Option<usize>,
    /// Output directory for the .klsf files and the manifest.
    #[arg(long, value_name = "DIR")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct SolveArgs {
    /// One of: mvca, exact, pilot, ga, grasp, bvns.
    #[arg(long)]
    algorithm: AlgorithmId,
    /// RNG seed for the stochastic solvers.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Wall-clock limit, e.g. 60s, 500ms, 10m. Defaults by instance size.
    #[arg(long, value_parser = parse_duration)]
    time_limit: Option<Duration>,
    /// Shaking-amplitude rule for bvns: fixed, k or sol.
    #[arg(long, default_value = "sol")]
    qmax_strategy: QmaxKind,
    /// Coefficient for the amplitude rule, e.g. 10, 0.5 or 4/3.
    #[arg(long, default_value = "4/3")]
    alpha: Alpha,
    /// Population size for ga.
    #[arg(long, default_value_t = 100)]
    population: usize,
    /// Generation count for ga; half the population when omitted.
    #[arg(long)]
    generations: Option<usize>,
    /// Print the CSV header line before the row.
    #[arg(long)]
    header: bool,
    /// Instance file in the canonical format.
    instance: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    /// Instance group as n:l or n:l:k; repeatable.
    #[arg(long = "group", value_name = "N:L[:K]")]
    groups: Vec<String>,
    /// Edge density for generated groups.
    #[arg(long, default_value_t = 0.5)]
    density: f64,
    /// Instances per group.
    #[arg(long, default_value_t = 10)]
    count: usize,
    /// Base seed for instance generation and solver streams.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Comma-separated solvers, e.g. pilot,ga,grasp,bvns.
    #[arg(long, default_value = "pilot,ga,grasp,bvns")]
    algorithms: String,
    /// Wall-clock limit per run; defaults to 60s (n <= 200) or 600s.
    #[arg(long, value_parser = parse_duration)]
    time_limit: Option<Duration>,
    /// Runs per (instance, algorithm) cell; the summary keeps the best.
    #[arg(long, default_value_t = 1)]
    repeats: usize,
    /// Worker threads; 0 = all cores. Env KLSF_WORKERS overrides.
    #[arg(long)]
    workers: Option<usize>,
    /// Shaking-amplitude rule for bvns columns.
    #[arg(long, default_value = "sol")]
    qmax_strategy: QmaxKind,
    /// Coefficient for the amplitude rule.
    #[arg(long, default_value = "4/3")]
    alpha: Alpha,
    /// Population size for ga columns.
    #[arg(long, default_value_t = 100)]
    population: usize,
    /// Run on existing .klsf files from this directory instead of
    /// generating groups.
    #[arg(long, value_name = "DIR")]
    instances: Option<PathBuf>,
    /// Output directory for instances, results.csv and results.md.
    #[arg(long, value_name = "DIR")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct ImportArgs {
    /// Files to import.
    #[arg(required = true)]
    files: Vec<PathBuf>,
    /// Label budget for the imported instances; determined when omitted.
    #[arg(long)]
    k: Option<usize>,
    /// Output directory for the canonical .klsf files.
    #[arg(long, value_name = "DIR")]
    out_dir: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(args) => generate(args),
        Command::Solve(args) => solve(args),
        Command::Bench(args) => bench(args),
        Command::ImportOfficial(args) => import_official_cmd(args),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            if err.downcast_ref::<ParseError>().is_some() {
                ExitCode::from(EXIT_PARSE)
            } else if err.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}

#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(UsageError(msg.into()))
}

fn parse_duration(text: &str) -> Result<Duration, String> {
    let text = text.trim();
    let (value, scale) = if let Some(v) = text.strip_suffix("ms") {
        (v, 1e-3)
    } else if let Some(v) = text.strip_suffix('s') {
        (v, 1.0)
    } else if let Some(v) = text.strip_suffix('m') {
        (v, 60.0)
    } else {
        (text, 1.0)
    };
    let value: f64 = value
        .trim()
        .parse()
        .map_err(|_| format!("invalid duration {text:?}; use forms like 60s, 500ms, 10m"))?;
    if value.is_nan() || value < 0.0 {
        return Err(format!("duration {text:?} must be non-negative"));
    }
    Ok(Duration::from_secs_f64(value * scale))
}

fn generate(args: GenerateArgs) -> Result<ExitCode> {
    if !(args.density > 0.0 && args.density <= 1.0) {
        return Err(usage(format!(
            "--density must lie in (0, 1], got {}",
            args.density
        )));
    }
    if args.n < 2 || args.labels < 1 || args.count < 1 {
        return Err(usage("--n >= 2, --labels >= 1 and --count >= 1 required"));
    }
    std::fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("cannot create {}", args.out_dir.display()))?;
    let manifest_path = args.out_dir.join("manifest.csv");
    let mut manifest = String::from("n,l,density,seed,k,path\n");
    for i in 0..args.count {
        let spec = InstanceSpec::new(args.n, args.labels, args.density, args.seed + i as u64);
        let graph = generate_graph(&spec)?;
        let k = match args.k {
            Some(k) => k,
            None => determine_k(&graph)?,
        };
        let inst = Instance::new(graph, k, Provenance::Generated { spec })?;
        let name = format!("instance_{i:03}_n{}_l{}.klsf", args.n, args.labels);
        let path = args.out_dir.join(&name);
        write_instance_file(&inst, &path)
            .with_context(|| format!("cannot write {}", path.display()))?;
        manifest.push_str(&format!(
            "{},{},{},{},{},{}\n",
            spec.n,
            spec.label_count,
            spec.density,
            spec.seed,
            k,
            path.display()
        ));
        println!("{} k={}", path.display(), k);
    }
    std::fs::write(&manifest_path, manifest)
        .with_context(|| format!("cannot write {}", manifest_path.display()))?;
    println!("{}", manifest_path.display());
    Ok(ExitCode::SUCCESS)
}

fn algorithm_config(
    id: AlgorithmId,
    qmax_strategy: QmaxKind,
    alpha: Alpha,
    population: usize,
    generations: Option<usize>,
) -> Result<AlgorithmConfig> {
    Ok(match id {
        AlgorithmId::Mvca => AlgorithmConfig::Mvca,
        AlgorithmId::Exact => AlgorithmConfig::Exact,
        AlgorithmId::Pilot => AlgorithmConfig::Pilot,
        AlgorithmId::Ga => {
            if population < 2 || !population.is_multiple_of(2) {
                return Err(usage(format!(
                    "--population must be an even count of at least 2, got {population}"
                )));
            }
            let mut cfg = GaConfig::new(population);
            if let Some(g) = generations {
                if g < 1 {
                    return Err(usage("--generations must be positive"));
                }
                cfg = cfg.with_generations(g);
            }
            AlgorithmConfig::Ga(cfg)
        }
        AlgorithmId::Grasp => AlgorithmConfig::Grasp,
        AlgorithmId::Bvns => AlgorithmConfig::Bvns(QmaxStrategy::new(qmax_strategy, alpha)),
    })
}

fn solve(args: SolveArgs) -> Result<ExitCode> {
    let instance = read_instance_file(&args.instance)?;
    let config = algorithm_config(
        args.algorithm,
        args.qmax_strategy,
        args.alpha,
        args.population,
        args.generations,
    )?;
    let time_limit = args
        .time_limit
        .unwrap_or_else(|| BenchPlan::default_time_limit(instance.graph.vertex_count()));
    if args.header {
        println!("objective,labels_used,time_to_best_ms,total_time_ms");
    }
    match klsf_core::bench::execute(&instance, &config, args.seed, time_limit) {
        CellOutcome::Completed(record) => {
            println!(
                "{},{},{:.3},{:.3}",
                record.objective,
                record.labels_used,
                record.time_to_best.as_secs_f64() * 1e3,
                record.total_time.as_secs_f64() * 1e3
            );
            Ok(ExitCode::SUCCESS)
        }
        CellOutcome::NotFound { elapsed } => {
            println!("NF,,,{:.3}", elapsed.as_secs_f64() * 1e3);
            Ok(ExitCode::from(EXIT_NOT_FOUND))
        }
    }
}

fn parse_group(text: &str) -> Result<GroupSpec> {
    let parts: Vec<&str> = text.split(':').collect();
    let parse = |s: &str, what: &str| -> Result<usize> {
        s.parse()
            .map_err(|_| usage(format!("group {text:?}: {what} is not an integer")))
    };
    match parts.as_slice() {
        [n, l] => Ok(GroupSpec {
            n: parse(n, "n")?,
            labels: parse(l, "l")?,
            k: None,
        }),
        [n, l, k] => Ok(GroupSpec {
            n: parse(n, "n")?,
            labels: parse(l, "l")?,
            k: Some(parse(k, "k")?),
        }),
        _ => Err(usage(format!("group {text:?} must be n:l or n:l:k"))),
    }
}

fn bench(args: BenchArgs) -> Result<ExitCode> {
    if !(args.density > 0.0 && args.density <= 1.0) {
        return Err(usage(format!(
            "--density must lie in (0, 1], got {}",
            args.density
        )));
    }
    let mut algorithms = Vec::new();
    for name in args.algorithms.split(',').filter(|s| !s.is_empty()) {
        let id: AlgorithmId = name.trim().parse().map_err(|e: String| usage(e))?;
        algorithms.push(algorithm_config(
            id,
            args.qmax_strategy,
            args.alpha,
            args.population,
            None,
        )?);
    }
    if algorithms.is_empty() {
        return Err(usage("--algorithms lists no solver"));
    }
    let workers = match args.workers {
        Some(w) => w,
        None => std::env::var("KLSF_WORKERS")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(0),
    };
    let mut groups = Vec::new();
    for text in &args.groups {
        groups.push(parse_group(text)?);
    }
    std::fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("cannot create {}", args.out_dir.display()))?;

    let mut plan = BenchPlan {
        groups,
        density: args.density,
        instances_per_group: args.count,
        base_seed: args.seed,
        algorithms,
        time_limit: args.time_limit,
        repeats: args.repeats,
        workers,
    };

    if args.count == 0 || args.repeats == 0 {
        return Err(usage("--count and --repeats must be positive"));
    }
    let instances: Vec<BenchInstance> = if let Some(dir) = &args.instances {
        let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
            .with_context(|| format!("cannot read {}", dir.display()))?
            .filter_map(|entry| entry.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|e| e == "klsf"))
            .collect();
        paths.sort();
        if paths.is_empty() {
            return Err(usage(format!("{} holds no .klsf files", dir.display())));
        }
        // groups come from the files themselves in this mode
        plan.groups = vec![GroupSpec {
            n: 0,
            labels: 0,
            k: None,
        }];
        load_instances(&paths)?
    } else {
        if plan.groups.is_empty() {
            return Err(usage(
                "an empty plan runs nothing: pass --group or --instances",
            ));
        }
        plan.validate().map_err(|e| usage(e.to_string()))?;
        materialize_instances(&plan, &args.out_dir.join("instances"))?
    };

    let rows = run_plan(&plan, &instances, true);
    let labels: Vec<String> = plan.algorithms.iter().map(|a| a.label()).collect();
    let table_labels: Vec<String> = plan.algorithms.iter().map(|a| a.table_label()).collect();
    let summaries = summarize(&rows, &labels);

    let csv_path = args.out_dir.join("results.csv");
    let csv_file = std::fs::File::create(&csv_path)
        .with_context(|| format!("cannot write {}", csv_path.display()))?;
    write_rows_csv(&rows, csv_file)?;

    let md_path = args.out_dir.join("results.md");
    let md_file = std::fs::File::create(&md_path)
        .with_context(|| format!("cannot write {}", md_path.display()))?;
    write_summary_markdown(&summaries, &table_labels, md_file)?;

    let mut stdout = std::io::stdout().lock();
    write_summary_markdown(&summaries, &table_labels, &mut stdout)?;
    eprintln!("raw rows: {}", csv_path.display());
    eprintln!("summary:  {}", md_path.display());
    Ok(ExitCode::SUCCESS)
}

fn import_official_cmd(args: ImportArgs) -> Result<ExitCode> {
    std::fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("cannot create {}", args.out_dir.display()))?;
    for file in &args.files {
        let graph = import_official_file(file)
            .with_context(|| format!("cannot import {}", file.display()))?;
        let k = match args.k {
            Some(k) => k,
            None => determine_k(&graph)
                .with_context(|| format!("cannot determine a budget for {}", file.display()))?,
        };
        let instance = Instance::new(
            graph,
            k,
            Provenance::Loaded {
                source: file.display().to_string(),
            },
        )?;
        let stem = file
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "imported".to_string());
        let out = args.out_dir.join(format!("{stem}.klsf"));
        write_instance_file(&instance, &out)
            .with_context(|| format!("cannot write {}", out.display()))?;
        println!(
            "{} -> {} (n={}, m={}, l={}, k={})",
            file.display(),
            out.display(),
            instance.graph.vertex_count(),
            instance.graph.edge_count(),
            instance.graph.label_count(),
            k
        );
    }
    Ok(ExitCode::SUCCESS)
}
