//! Random search: every trial samples one hyperparameter vector up front
//! and trains it unchanged to the full step budget. The no-adaptation
//! baseline every scheduler has to beat.

use serde::{Deserialize, Serialize};

use crate::engine::evaluate_solution;
use crate::runlog::{Event, EventKind, EventSink};
use crate::rngutil::{derive_rng, stream};
use crate::task::TrainableTask;
use crate::{Error, Result};

fn default_trials() -> usize {
    32
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomSearchConfig {
    #[serde(default = "default_trials")]
    pub n_trials: usize,
    /// Steps between evaluation points; defaults to 2 × the task's steps
    /// per epoch, matching the engine's ready interval.
    #[serde(default)]
    pub ready_interval: Option<u64>,
    /// Steps each trial trains in total. The experiment layer fills this in
    /// from its epoch budget.
    #[serde(default)]
    pub total_steps: u64,
    /// Concurrent trainings; 0 means one worker per trial.
    #[serde(default)]
    pub workers: usize,
    #[serde(default)]
    pub seed: u64,
}

impl Default for RandomSearchConfig {
    fn default() -> Self {
        RandomSearchConfig {
            n_trials: default_trials(),
            ready_interval: None,
            total_steps: 0,
            workers: 0,
            seed: 0,
        }
    }
}

impl RandomSearchConfig {
    pub fn resolved_ready_interval(&self, task: &dyn TrainableTask) -> u64 {
        self.ready_interval.unwrap_or(2 * task.steps_per_epoch())
    }

    pub fn resolved_workers(&self) -> usize {
        if self.workers == 0 {
            self.n_trials
        } else {
            self.workers
        }
    }

    pub fn validate(&self, task: &dyn TrainableTask) -> Result<()> {
        if self.n_trials == 0 {
            return Err(Error::config("n_trials must be positive"));
        }
        if self.resolved_ready_interval(task) == 0 {
            return Err(Error::config("ready_interval must be positive"));
        }
        if self.total_steps == 0 {
            return Err(Error::config("total_steps must be positive"));
        }
        Ok(())
    }
}

/// Trains `n_trials` independently sampled hyperparameter vectors to the
/// full budget, evaluating every ready interval. Timestamps are virtual
/// (one training step = one second per worker): trial `j` runs on worker
/// `j mod W` and starts once that worker's earlier trials finish.
pub fn random_search(
    task: &dyn TrainableTask,
    config: &RandomSearchConfig,
    sink: &mut dyn EventSink,
) -> Result<()> {
    config.validate(task)?;
    let ready = config.resolved_ready_interval(task);
    let workers = config.resolved_workers();
    let space = task.search_space();

    for trial in 0..config.n_trials {
        let start_t = ((trial / workers) as u64 * config.total_steps) as f64;
        let hp =
            space.sample_uniform(&mut derive_rng(config.seed, &[stream::HP_INIT, trial as u64]));
        let mut ckpt = task.init(&mut derive_rng(config.seed, &[stream::CKPT_INIT, trial as u64]));

        let mut init = Event::new(EventKind::Init, start_t, 0, trial);
        init.hp = Some(hp.indices.clone());
        sink.record(&init)?;

        let mut step = 0;
        while step < config.total_steps {
            let round = step / ready;
            let interval = ready.min(config.total_steps - step);
            let mut rng = derive_rng(config.seed, &[stream::TRAIN, trial as u64, round]);
            task.train(&mut ckpt, &hp, interval, &mut rng)?;
            step += interval;

            let outcome = evaluate_solution(task, &ckpt);
            let t = start_t + step as f64;
            if let Some(msg) = outcome.failure {
                let mut event = Event::new(EventKind::Error, t, step, trial);
                event.msg = Some(msg);
                sink.record(&event)?;
            } else {
                let mut event = Event::new(EventKind::Eval, t, step, trial);
                event.f = Some(outcome.objectives);
                event.viol = outcome.violation;
                sink.record(&event)?;
            }
        }
    }
    Ok(())
}
