//! Config-driven studies: a task, several algorithms, several seeds each,
//! pooled into one archive with shared metrics.
//!
//! Execution order: population-based-training runs go first so that, when a
//! successive-halving run has no explicit time budget, it can be granted
//! the duration of the slowest of them. Each run writes its own directory
//! `<label>_s<seed>/` with `run.jsonl`, `metrics.csv`, and (for engine
//! runs) final checkpoints under `ckpt/`; pooled exports (`fronts.csv`,
//! `report.csv`, SVG charts, `experiment.json`) land in the output root.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use mopbt_core::{
    compute_reference_point, hypervolume, log_hv_gap_curve, FrontArchive, REFERENCE_MARGIN,
};
use serde::{Deserialize, Serialize};

use crate::archive::{extend_archive, run_front, timed_objectives, write_front_csv, write_gap_csv};
use crate::baselines::{
    mo_asha, nsga2, random_search, AshaConfig, Nsga2Config, RandomSearchConfig,
};
use crate::engine::{self, EngineConfig};
use crate::plot::{line_chart, scatter_chart, write_svg, Series};
use crate::report::{summarize, write_report_csv};
use crate::runlog::{read_events, Event, JsonlSink};
use crate::task::TrainableTask;
use crate::tasks::TaskSpec;
use crate::{Error, Result};

fn default_epochs() -> u64 {
    100
}

fn default_n_seeds() -> u64 {
    1
}

fn default_parallel() -> usize {
    1
}

/// One optimizer and its configuration, as written in config files:
/// `{"label": ..., "kind": ..., "config": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "config", rename_all = "kebab-case")]
pub enum AlgorithmKind {
    /// Population based training (multi- or single-objective, depending on
    /// the ranking inside).
    Pbt(EngineConfig),
    RandomSearch(RandomSearchConfig),
    MoAsha(AshaConfig),
    Nsga2(Nsga2Config),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmSpec {
    /// Directory-name prefix of this algorithm's runs.
    pub label: String,
    /// Independent repetitions; run seeds are experiment-derived.
    #[serde(default = "default_n_seeds")]
    pub n_seeds: u64,
    #[serde(flatten)]
    pub algorithm: AlgorithmKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub task: TaskSpec,
    pub algorithms: Vec<AlgorithmSpec>,
    /// Per-lineage training budget in task epochs; fills every algorithm
    /// config whose step budget is unset.
    #[serde(default = "default_epochs")]
    pub epochs: u64,
    /// Base seed: the r-th run of the experiment uses `seed + r`, counting
    /// runs in config order across all algorithms.
    #[serde(default)]
    pub seed: u64,
    /// Fills any algorithm config whose worker count is unset.
    #[serde(default)]
    pub workers: Option<usize>,
    /// Runs executed concurrently; each run has private workers and files.
    #[serde(default = "default_parallel")]
    pub parallel_runs: usize,
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
}

/// One fully resolved run of the experiment.
#[derive(Debug, Clone, Serialize)]
pub struct RunPlan {
    pub run_id: String,
    pub label: String,
    pub seed: u64,
    #[serde(skip)]
    pub algorithm: AlgorithmKind,
}

fn valid_label(label: &str) -> bool {
    !label.is_empty()
        && label.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'-' || b == b'_' || b == b'.')
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::config(format!("bad experiment config: {e}")))
    }

    fn has_pbt(&self) -> bool {
        self.algorithms.iter().any(|a| matches!(a.algorithm, AlgorithmKind::Pbt(_)))
    }

    pub fn total_steps(&self, task: &dyn TrainableTask) -> u64 {
        self.epochs * task.steps_per_epoch()
    }

    pub fn validate(&self, task: &dyn TrainableTask) -> Result<()> {
        if self.algorithms.is_empty() {
            return Err(Error::config("experiment needs at least one algorithm"));
        }
        if self.epochs == 0 {
            return Err(Error::config("epochs must be positive"));
        }
        if self.parallel_runs == 0 {
            return Err(Error::config("parallel_runs must be positive"));
        }
        let mut labels: Vec<&str> = Vec::new();
        for spec in &self.algorithms {
            if !valid_label(&spec.label) {
                return Err(Error::config(format!(
                    "label {:?} is not a safe directory name",
                    spec.label
                )));
            }
            if labels.contains(&spec.label.as_str()) {
                return Err(Error::config(format!("duplicate algorithm label {:?}", spec.label)));
            }
            labels.push(&spec.label);
            if spec.n_seeds == 0 {
                return Err(Error::config(format!("{}: n_seeds must be positive", spec.label)));
            }
            // Validate each config as it will actually run (seed 0 stands in
            // for the per-run seed, which changes no validity).
            match resolve_algorithm(&spec.algorithm, self, task, 0, Some(f64::MAX)) {
                Ok(AlgorithmKind::Pbt(cfg)) => cfg.validate(task)?,
                Ok(AlgorithmKind::RandomSearch(cfg)) => cfg.validate(task)?,
                Ok(AlgorithmKind::Nsga2(cfg)) => cfg.validate()?,
                Ok(AlgorithmKind::MoAsha(cfg)) => {
                    cfg.validate_shape(task)?;
                    if cfg.time_budget_s == Some(f64::MAX) && !self.has_pbt() {
                        return Err(Error::config(format!(
                            "{}: time_budget_s is unset and no population-based-training \
                             run exists to borrow a duration from",
                            spec.label
                        )));
                    }
                }
                Err(e) => return Err(e),
            }
        }
        Ok(())
    }

    /// The full run list in config order; seeds are `seed + run_index`.
    pub fn plan_runs(&self) -> Vec<RunPlan> {
        let mut plans = Vec::new();
        for spec in &self.algorithms {
            for _ in 0..spec.n_seeds {
                let seed = self.seed + plans.len() as u64;
                plans.push(RunPlan {
                    run_id: format!("{}_s{seed}", spec.label),
                    label: spec.label.clone(),
                    seed,
                    algorithm: spec.algorithm.clone(),
                });
            }
        }
        plans
    }
}

/// Copies the spec config and fills the experiment-owned fields: the run
/// seed always, step budgets and worker counts only where unset.
fn resolve_algorithm(
    algorithm: &AlgorithmKind,
    config: &ExperimentConfig,
    task: &dyn TrainableTask,
    seed: u64,
    asha_budget: Option<f64>,
) -> Result<AlgorithmKind> {
    let total_steps = config.total_steps(task);
    Ok(match algorithm {
        AlgorithmKind::Pbt(cfg) => {
            let mut cfg = cfg.clone();
            cfg.seed = seed;
            if cfg.total_steps == 0 {
                cfg.total_steps = total_steps;
            }
            if cfg.workers == 0 {
                if let Some(w) = config.workers {
                    cfg.workers = w;
                }
            }
            AlgorithmKind::Pbt(cfg)
        }
        AlgorithmKind::RandomSearch(cfg) => {
            let mut cfg = cfg.clone();
            cfg.seed = seed;
            if cfg.total_steps == 0 {
                cfg.total_steps = total_steps;
            }
            if cfg.workers == 0 {
                if let Some(w) = config.workers {
                    cfg.workers = w;
                }
            }
            AlgorithmKind::RandomSearch(cfg)
        }
        AlgorithmKind::MoAsha(cfg) => {
            let mut cfg = cfg.clone();
            cfg.seed = seed;
            if cfg.max_resource.is_none() {
                cfg.max_resource = Some(total_steps);
            }
            if cfg.max_concurrent.is_none() {
                cfg.max_concurrent = config.workers;
            }
            if cfg.time_budget_s.is_none() {
                cfg.time_budget_s = asha_budget;
            }
            if cfg.time_budget_s.is_none() {
                return Err(Error::config(
                    "time_budget_s is unset and no population-based-training run \
                     exists to borrow a duration from",
                ));
            }
            AlgorithmKind::MoAsha(cfg)
        }
        AlgorithmKind::Nsga2(cfg) => {
            let mut cfg = cfg.clone();
            cfg.seed = seed;
            if cfg.total_steps == 0 {
                cfg.total_steps = total_steps;
            }
            if cfg.workers == 0 {
                if let Some(w) = config.workers {
                    cfg.workers = w;
                }
            }
            if cfg.generations.is_none() && cfg.budget_networks.is_none() {
                // Default budget: as many fully trained networks as one
                // default engine population.
                cfg.budget_networks = Some(EngineConfig::default().population_size as u64);
            }
            AlgorithmKind::Nsga2(cfg)
        }
    })
}

/// Executes one resolved run into `run_dir`, flushing the log even when the
/// optimizer fails.
fn run_one(task: &dyn TrainableTask, algorithm: &AlgorithmKind, run_dir: &Path) -> Result<()> {
    std::fs::create_dir_all(run_dir)?;
    let mut sink = JsonlSink::create(&run_dir.join("run.jsonl"))?;
    let result = match algorithm {
        AlgorithmKind::Pbt(cfg) => {
            let ckpt_dir = run_dir.join("ckpt");
            std::fs::create_dir_all(&ckpt_dir)?;
            engine::run(task, cfg, &mut sink, Some(&ckpt_dir))
        }
        AlgorithmKind::RandomSearch(cfg) => random_search(task, cfg, &mut sink),
        AlgorithmKind::MoAsha(cfg) => mo_asha(task, cfg, &mut sink),
        AlgorithmKind::Nsga2(cfg) => nsga2(task, cfg, &mut sink),
    };
    let flushed = sink.finish();
    result.and(flushed)
}

/// Runs a batch of plans, at most `parallel` at a time. Returns the first
/// error in plan order after every started run has finished (and flushed
/// its log).
fn run_batch(
    task: &dyn TrainableTask,
    plans: &[(PathBuf, AlgorithmKind)],
    parallel: usize,
) -> Result<()> {
    if parallel <= 1 {
        for (dir, algorithm) in plans {
            run_one(task, algorithm, dir)?;
        }
        return Ok(());
    }
    for chunk in plans.chunks(parallel) {
        let results: Vec<Result<()>> = std::thread::scope(|scope| {
            let handles: Vec<_> = chunk
                .iter()
                .map(|(dir, algorithm)| scope.spawn(move || run_one(task, algorithm, dir)))
                .collect();
            handles.into_iter().map(|h| h.join().expect("run thread panicked")).collect()
        });
        for result in results {
            result?;
        }
    }
    Ok(())
}

/// Longest event timestamp of a run — the run's duration on its own clock.
fn run_duration(events: &[Event]) -> f64 {
    events.iter().map(|e| e.t).fold(0.0, f64::max)
}

/// Everything `run_experiment` leaves behind, for callers that keep going
/// (reports, acceptance checks).
pub struct ExperimentOutput {
    pub out_dir: PathBuf,
    pub archive: FrontArchive,
    /// Events of every run, keyed by run id.
    pub events: BTreeMap<String, Vec<Event>>,
    /// Duration of the slowest population-based-training run, if any ran.
    pub slowest_pbt_s: Option<f64>,
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    let task = config.task.build();
    let task = task.as_ref();
    config.validate(task)?;
    let out_dir = config
        .out_dir
        .clone()
        .ok_or_else(|| Error::config("out_dir is unset (set it in the config or via --out-dir)"))?;
    std::fs::create_dir_all(&out_dir)?;

    let plans = config.plan_runs();
    let manifest = serde_json::json!({
        "task": config.task,
        "epochs": config.epochs,
        "total_steps": config.total_steps(task),
        "runs": plans,
    });
    std::fs::write(out_dir.join("experiment.json"), format!("{manifest:#}\n"))?;

    // Engine runs first: their durations cap the halving scheduler's budget.
    let is_pbt = |p: &RunPlan| matches!(p.algorithm, AlgorithmKind::Pbt(_));
    let mut batch: Vec<(PathBuf, AlgorithmKind)> = Vec::new();
    for plan in plans.iter().filter(|p| is_pbt(p)) {
        let resolved = resolve_algorithm(&plan.algorithm, config, task, plan.seed, None)?;
        batch.push((out_dir.join(&plan.run_id), resolved));
    }
    run_batch(task, &batch, config.parallel_runs)?;

    let mut all_events: BTreeMap<String, Vec<Event>> = BTreeMap::new();
    let mut slowest_pbt_s: Option<f64> = None;
    for plan in plans.iter().filter(|p| is_pbt(p)) {
        let events = read_events(&out_dir.join(&plan.run_id).join("run.jsonl"))?;
        let duration = run_duration(&events);
        slowest_pbt_s = Some(slowest_pbt_s.map_or(duration, |d| d.max(duration)));
        all_events.insert(plan.run_id.clone(), events);
    }

    let mut batch: Vec<(PathBuf, AlgorithmKind)> = Vec::new();
    for plan in plans.iter().filter(|p| !is_pbt(p)) {
        let resolved = resolve_algorithm(&plan.algorithm, config, task, plan.seed, slowest_pbt_s)?;
        batch.push((out_dir.join(&plan.run_id), resolved));
    }
    run_batch(task, &batch, config.parallel_runs)?;
    for plan in plans.iter().filter(|p| !is_pbt(p)) {
        let events = read_events(&out_dir.join(&plan.run_id).join("run.jsonl"))?;
        all_events.insert(plan.run_id.clone(), events);
    }

    // Pool every run and compute the shared metric frame.
    let mut archive = FrontArchive::default();
    for plan in &plans {
        extend_archive(&mut archive, &plan.run_id, &all_events[&plan.run_id])?;
    }
    if archive.is_empty() {
        return Err(Error::Runtime(
            "no run produced a successful evaluation; nothing to pool".into(),
        ));
    }
    let r = compute_reference_point(&archive, REFERENCE_MARGIN)?;
    let hv_star = hypervolume(&archive.global_front()?, &r)?;

    let mut gap_series = Vec::new();
    let mut front_series = Vec::new();
    for plan in &plans {
        let events = &all_events[&plan.run_id];
        let timed = timed_objectives(events)?;
        if timed.is_empty() {
            continue;
        }
        let curve = log_hv_gap_curve(&timed, hv_star, &r)?;
        write_gap_csv(&out_dir.join(&plan.run_id).join("metrics.csv"), &curve)?;
        gap_series.push(Series::new(
            plan.run_id.clone(),
            curve.iter().map(|p| (p.time_s, p.log_gap)).collect(),
        ));
        if task.objective_count() == 2 {
            front_series.push(Series::new(
                plan.run_id.clone(),
                run_front(events)?.iter().map(|p| (p.values()[0], p.values()[1])).collect(),
            ));
        }
    }

    write_front_csv(&out_dir.join("fronts.csv"), &archive)?;
    write_report_csv(&out_dir.join("report.csv"), &summarize(&archive)?)?;
    write_svg(
        &out_dir.join("gap_curves.svg"),
        &line_chart("hypervolume gap over time", "time (s)", "log10(hv* - hv)", &gap_series),
    )?;
    if task.objective_count() == 2 {
        let names = task.objective_names();
        write_svg(
            &out_dir.join("fronts.svg"),
            &scatter_chart("per-run non-dominated fronts", &names[0], &names[1], &front_series),
        )?;
    }

    Ok(ExperimentOutput { out_dir, archive, events: all_events, slowest_pbt_s })
}
