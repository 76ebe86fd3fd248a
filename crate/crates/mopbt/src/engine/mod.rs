//! Population based training with multi-objective ranking.
//!
//! A population of solutions trains in intervals; at each ready point the
//! population is sorted (best → worst) by a configurable ranking, the bottom
//! truncation slice copies checkpoint bytes and hyperparameters from random
//! top-slice donors, and the copied hyperparameters are locally perturbed.
//! Synchronous mode is single-schedule and bit-reproducible with virtual
//! timestamps; asynchronous mode runs a real worker pool against snapshot
//! ranking.

mod exploit;
mod explore;
mod ranking;
mod store;
mod sync;
mod threaded;

pub use exploit::{exploit_pairs, Replacement};
pub use explore::{explore, explore_random, mutate};
pub use ranking::sort_population;
pub use store::CheckpointStore;

use std::path::Path;

use mopbt_core::ScalarizerKind;
use serde::{Deserialize, Serialize};

use crate::runlog::EventSink;
use crate::space::HyperparamVector;
use crate::task::TrainableTask;
use crate::{Error, Result};

fn default_population() -> usize {
    32
}

fn default_truncation() -> u32 {
    25
}

fn default_resample() -> f64 {
    0.2
}

fn default_weight_count() -> usize {
    100
}

fn default_parego_rho() -> f64 {
    mopbt_core::DEFAULT_PAREGO_RHO
}

/// Scalarizer choice as written in config files.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ScalarizerSpec {
    WeightedSum,
    Chebyshev,
    ParEgo {
        #[serde(default = "default_parego_rho")]
        rho: f64,
    },
    Golovin,
}

impl ScalarizerSpec {
    pub fn to_kind(self) -> ScalarizerKind {
        match self {
            ScalarizerSpec::WeightedSum => ScalarizerKind::WeightedSum,
            ScalarizerSpec::Chebyshev => ScalarizerKind::Chebyshev,
            ScalarizerSpec::ParEgo { rho } => ScalarizerKind::ParEgo { rho },
            ScalarizerSpec::Golovin => ScalarizerKind::Golovin,
        }
    }
}

/// How the population is ordered at ready points.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RankingMode {
    /// Non-dominated sort, then greedy scattered subset selection within
    /// and across fronts.
    #[default]
    GreedySubset,
    /// Non-dominated sort, then crowding distance within fronts.
    CrowdingDistance,
    /// Descending scalarized value under a weight vector resampled at every
    /// sort — the single-objective reduction of the same loop.
    Scalarized { scalarizer: ScalarizerSpec },
    /// Descending best scalarized value over a weight table fixed for the
    /// whole run.
    MaxScalarized {
        scalarizer: ScalarizerSpec,
        #[serde(default = "default_weight_count")]
        weights: usize,
    },
    /// Descending single objective `index`; other objectives are ignored.
    SingleObjective { index: usize },
}

/// Hyperparameter perturbation applied to exploited solutions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MutationKind {
    /// Per coordinate: resample with probability `resample_probability`,
    /// otherwise an ordinal shift of up to 3 in either direction.
    #[default]
    Local,
    /// Per coordinate: resample with probability 1/P, otherwise unchanged.
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum ExecutionMode {
    /// Deterministic: barrier at every ready point, virtual timestamps.
    #[default]
    #[serde(rename = "sync")]
    Synchronous,
    /// Worker threads rank against the latest snapshot; a solution exploits
    /// only itself, at its own ready point.
    #[serde(rename = "async")]
    Asynchronous,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EngineConfig {
    #[serde(default = "default_population")]
    pub population_size: usize,
    /// Truncation fraction τ in percent: ⌊τN/100⌋ solutions are replaced
    /// per exploit round.
    #[serde(default = "default_truncation")]
    pub truncation_percent: u32,
    /// Steps between ready points; defaults to 2 × the task's steps per
    /// epoch.
    #[serde(default)]
    pub ready_interval: Option<u64>,
    /// Steps each lineage slot trains in total. The experiment layer fills
    /// this in from its epoch budget.
    #[serde(default)]
    pub total_steps: u64,
    #[serde(default = "default_resample")]
    pub resample_probability: f64,
    #[serde(default)]
    pub ranking: RankingMode,
    #[serde(default)]
    pub mutation: MutationKind,
    /// Use constraint domination (feasible first, then smaller violation)
    /// during non-dominated sorting.
    #[serde(default)]
    pub constraints: bool,
    #[serde(default)]
    pub mode: ExecutionMode,
    /// Worker pool size; 0 means one worker per population member.
    #[serde(default)]
    pub workers: usize,
    #[serde(default)]
    pub seed: u64,
}

impl Default for EngineConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("empty config must deserialize to the defaults")
    }
}

impl EngineConfig {
    /// Ready interval with the task default applied.
    pub fn resolved_ready_interval(&self, task: &dyn TrainableTask) -> u64 {
        self.ready_interval.unwrap_or(2 * task.steps_per_epoch())
    }

    /// Worker count with the population default applied.
    pub fn resolved_workers(&self) -> usize {
        if self.workers == 0 {
            self.population_size
        } else {
            self.workers
        }
    }

    /// Number of solutions replaced per exploit round.
    pub fn truncation_cut(&self) -> usize {
        self.population_size * self.truncation_percent as usize / 100
    }

    pub fn validate(&self, task: &dyn TrainableTask) -> Result<()> {
        if self.population_size < 4 {
            return Err(Error::config(format!(
                "population_size must be at least 4, got {}",
                self.population_size
            )));
        }
        if self.truncation_percent == 0 || self.truncation_percent > 50 {
            return Err(Error::config(format!(
                "truncation_percent must lie in 1..=50, got {}",
                self.truncation_percent
            )));
        }
        if !(0.0..=1.0).contains(&self.resample_probability) {
            return Err(Error::config(format!(
                "resample_probability must lie in [0, 1], got {}",
                self.resample_probability
            )));
        }
        let ready = self.resolved_ready_interval(task);
        if ready == 0 {
            return Err(Error::config("ready_interval must be positive"));
        }
        if self.total_steps == 0 {
            return Err(Error::config("total_steps must be positive"));
        }
        if self.mode == ExecutionMode::Synchronous && self.total_steps % ready != 0 {
            return Err(Error::config(format!(
                "synchronous mode needs total_steps ({}) to be a multiple of ready_interval ({ready})",
                self.total_steps
            )));
        }
        if let RankingMode::SingleObjective { index } = self.ranking {
            if index >= task.objective_count() {
                return Err(Error::config(format!(
                    "single-objective ranking index {index} out of range for a \
                     {}-objective task",
                    task.objective_count()
                )));
            }
        }
        if let RankingMode::MaxScalarized { weights, .. } = self.ranking {
            if weights == 0 {
                return Err(Error::config("max-scalarized ranking needs at least one weight"));
            }
        }
        Ok(())
    }
}

/// One population member's bookkeeping; checkpoint bytes live in the
/// [`CheckpointStore`] under the same id.
#[derive(Debug, Clone)]
pub struct Solution {
    pub id: usize,
    pub hyperparams: HyperparamVector,
    pub objectives: Option<Vec<f64>>,
    pub violation: Option<f64>,
    pub step: u64,
    pub generation: u32,
}

impl Solution {
    fn new(id: usize, hyperparams: HyperparamVector) -> Self {
        Solution { id, hyperparams, objectives: None, violation: None, step: 0, generation: 0 }
    }
}

/// Runs population based training to completion, streaming events into
/// `sink`. Final checkpoints are persisted under `ckpt_dir` when given.
pub fn run(
    task: &dyn TrainableTask,
    config: &EngineConfig,
    sink: &mut dyn EventSink,
    ckpt_dir: Option<&Path>,
) -> Result<()> {
    config.validate(task)?;
    match config.mode {
        ExecutionMode::Synchronous => sync::run_sync(task, config, sink, ckpt_dir),
        ExecutionMode::Asynchronous => threaded::run_async(task, config, sink, ckpt_dir),
    }
}

/// Samples starting hyperparameters and fresh checkpoints, logging one init
/// event per solution in id order at t = 0.
pub(crate) fn init_population(
    task: &dyn TrainableTask,
    config: &EngineConfig,
    sink: &mut dyn EventSink,
) -> Result<(Vec<Solution>, CheckpointStore)> {
    use crate::runlog::{Event, EventKind};
    use crate::rngutil::{derive_rng, stream};

    let space = task.search_space();
    let mut pop = Vec::with_capacity(config.population_size);
    let mut checkpoints = Vec::with_capacity(config.population_size);
    for id in 0..config.population_size {
        let hp = space.sample_uniform(&mut derive_rng(config.seed, &[stream::HP_INIT, id as u64]));
        let ckpt = task.init(&mut derive_rng(config.seed, &[stream::CKPT_INIT, id as u64]));
        let mut event = Event::new(EventKind::Init, 0.0, 0, id);
        event.hp = Some(hp.indices.clone());
        sink.record(&event)?;
        pop.push(Solution::new(id, hp));
        checkpoints.push(ckpt);
    }
    Ok((pop, CheckpointStore::new(checkpoints)))
}

/// Weight table for max-scalarized ranking, sampled once per run; empty for
/// every other ranking mode.
pub(crate) fn sample_weight_table(
    config: &EngineConfig,
    objective_count: usize,
) -> Result<Vec<Vec<f64>>> {
    use crate::rngutil::{derive_rng, stream};

    let RankingMode::MaxScalarized { weights, .. } = config.ranking else {
        return Ok(Vec::new());
    };
    let mut rng = derive_rng(config.seed, &[stream::WEIGHT_SET]);
    (0..weights)
        .map(|_| mopbt_core::sample_unit_weight(&mut rng, objective_count).map_err(Error::from))
        .collect()
}

/// What a training interval's evaluation produced, with non-finite values
/// already classified as failures.
pub(crate) struct EvalOutcome {
    pub objectives: Vec<f64>,
    pub violation: Option<f64>,
    /// Present when the evaluation failed; the objectives/violation above
    /// are then worst-possible sentinels that keep the solution rankable.
    pub failure: Option<String>,
}

pub(crate) fn evaluate_solution(
    task: &dyn TrainableTask,
    ckpt: &crate::task::Checkpoint,
) -> EvalOutcome {
    let k = task.objective_count();
    let failed = |msg: String| EvalOutcome {
        objectives: vec![-f64::MAX; k],
        violation: Some(f64::MAX),
        failure: Some(msg),
    };
    match task.evaluate(ckpt) {
        Ok(eval) => {
            if eval.objectives.len() != k {
                return failed(format!(
                    "task returned {} objectives, expected {k}",
                    eval.objectives.len()
                ));
            }
            if eval.objectives.iter().any(|v| !v.is_finite())
                || eval.violation.is_some_and(|v| v.is_nan())
            {
                return failed(format!("non-finite evaluation {:?}", eval.objectives));
            }
            EvalOutcome { objectives: eval.objectives, violation: eval.violation, failure: None }
        }
        Err(err) => failed(err.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tasks::ToyQuadratic;

    fn base_config() -> EngineConfig {
        EngineConfig {
            population_size: 8,
            truncation_percent: 25,
            ready_interval: None,
            total_steps: 40,
            resample_probability: 0.2,
            ranking: RankingMode::GreedySubset,
            mutation: MutationKind::Local,
            constraints: false,
            mode: ExecutionMode::Synchronous,
            workers: 0,
            seed: 0,
        }
    }

    #[test]
    fn config_defaults_deserialize() {
        let cfg: EngineConfig = serde_json::from_str(r#"{"total_steps": 100}"#).unwrap();
        assert_eq!(cfg.population_size, 32);
        assert_eq!(cfg.truncation_percent, 25);
        assert_eq!(cfg.resample_probability, 0.2);
        assert_eq!(cfg.ranking, RankingMode::GreedySubset);
        assert_eq!(cfg.mutation, MutationKind::Local);
        assert_eq!(cfg.mode, ExecutionMode::Synchronous);
    }

    #[test]
    fn ranking_modes_parse_from_kebab_case() {
        let m: RankingMode =
            serde_json::from_str(r#"{"kind": "crowding-distance"}"#).unwrap();
        assert_eq!(m, RankingMode::CrowdingDistance);
        let m: RankingMode = serde_json::from_str(
            r#"{"kind": "scalarized", "scalarizer": {"kind": "par-ego"}}"#,
        )
        .unwrap();
        assert_eq!(
            m,
            RankingMode::Scalarized {
                scalarizer: ScalarizerSpec::ParEgo { rho: mopbt_core::DEFAULT_PAREGO_RHO }
            }
        );
        let m: RankingMode =
            serde_json::from_str(r#"{"kind": "max-scalarized", "scalarizer": {"kind": "chebyshev"}}"#)
                .unwrap();
        assert_eq!(
            m,
            RankingMode::MaxScalarized { scalarizer: ScalarizerSpec::Chebyshev, weights: 100 }
        );
    }

    #[test]
    fn truncation_cut_uses_floor_arithmetic() {
        let mut cfg = base_config();
        cfg.population_size = 32;
        assert_eq!(cfg.truncation_cut(), 8);
        cfg.population_size = 8;
        assert_eq!(cfg.truncation_cut(), 2);
        cfg.population_size = 4;
        assert_eq!(cfg.truncation_cut(), 1);
        cfg.truncation_percent = 10;
        cfg.population_size = 8;
        assert_eq!(cfg.truncation_cut(), 0);
    }

    #[test]
    fn validation_rejects_bad_configs() {
        let task = ToyQuadratic::two_objective(0.0, 10);
        let ok = base_config();
        ok.validate(&task).unwrap();

        let mut cfg = base_config();
        cfg.population_size = 3;
        assert!(cfg.validate(&task).is_err());

        let mut cfg = base_config();
        cfg.truncation_percent = 51;
        assert!(cfg.validate(&task).is_err());
        cfg.truncation_percent = 50;
        cfg.validate(&task).unwrap();

        let mut cfg = base_config();
        cfg.total_steps = 41;
        assert!(cfg.validate(&task).is_err(), "sync mode requires whole rounds");
        cfg.mode = ExecutionMode::Asynchronous;
        cfg.validate(&task).unwrap();

        let mut cfg = base_config();
        cfg.ranking = RankingMode::SingleObjective { index: 2 };
        assert!(cfg.validate(&task).is_err());
    }
}
