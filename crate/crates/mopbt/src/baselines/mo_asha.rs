//! Multi-objective asynchronous successive halving: trials are sampled
//! uniformly, trained rung by rung on a geometric resource ladder, and a
//! trial finishing a rung continues only while it ranks in the top 1/η of
//! everything that has completed that rung so far (non-dominated sort plus
//! greedy scattered subset selection). Everything runs on a virtual clock
//! (one training step = one second per worker), so runs are reproducible
//! and a time budget can be enforced exactly.

use serde::{Deserialize, Serialize};

use super::greedy_order;
use crate::engine::evaluate_solution;
use crate::runlog::{Event, EventKind, EventSink};
use crate::rngutil::{derive_rng, stream};
use crate::space::HyperparamVector;
use crate::task::{Checkpoint, TrainableTask};
use crate::{Error, Result};

fn default_eta() -> u32 {
    2
}

/// Fallback worker-pool size when neither the config nor the surrounding
/// experiment names one.
const DEFAULT_CONCURRENT: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AshaConfig {
    /// Reduction factor η: top 1/η of each rung's completions continue.
    #[serde(default = "default_eta")]
    pub eta: u32,
    /// Steps of the first rung; defaults to 2 × the task's steps per epoch
    /// (one ready interval).
    #[serde(default)]
    pub min_resource: Option<u64>,
    /// Steps of the final rung. The experiment layer fills this in from its
    /// epoch budget.
    #[serde(default)]
    pub max_resource: Option<u64>,
    /// Concurrently running trials (the worker pool size); the experiment
    /// layer fills this from its worker count, else 4.
    #[serde(default)]
    pub max_concurrent: Option<usize>,
    /// Virtual seconds of total worker time per worker. The experiment
    /// layer sets this to the slowest population-based-training run's
    /// duration when both appear in one experiment.
    #[serde(default)]
    pub time_budget_s: Option<f64>,
    #[serde(default)]
    pub seed: u64,
}

impl Default for AshaConfig {
    fn default() -> Self {
        AshaConfig {
            eta: default_eta(),
            min_resource: None,
            max_resource: None,
            max_concurrent: None,
            time_budget_s: None,
            seed: 0,
        }
    }
}

impl AshaConfig {
    pub fn resolved_min_resource(&self, task: &dyn TrainableTask) -> u64 {
        self.min_resource.unwrap_or(2 * task.steps_per_epoch())
    }

    pub fn resolved_concurrent(&self) -> usize {
        self.max_concurrent.unwrap_or(DEFAULT_CONCURRENT)
    }

    /// Checks everything that can be checked before the experiment layer
    /// fills in `max_resource` and `time_budget_s`.
    pub fn validate_shape(&self, task: &dyn TrainableTask) -> Result<()> {
        if self.eta < 2 {
            return Err(Error::config(format!("eta must be at least 2, got {}", self.eta)));
        }
        if self.resolved_concurrent() == 0 {
            return Err(Error::config("max_concurrent must be positive"));
        }
        let min = self.resolved_min_resource(task);
        if min == 0 {
            return Err(Error::config("min_resource must be positive"));
        }
        if let Some(max) = self.max_resource {
            if max < min {
                return Err(Error::config(format!(
                    "max_resource ({max}) must be at least min_resource ({min})"
                )));
            }
        }
        Ok(())
    }

    /// Validates and unpacks the fields the experiment layer must resolve.
    fn resolved(&self, task: &dyn TrainableTask) -> Result<(u64, u64, f64)> {
        self.validate_shape(task)?;
        let min = self.resolved_min_resource(task);
        let max = self
            .max_resource
            .ok_or_else(|| Error::config("max_resource is unset (no surrounding experiment)"))?;
        let budget = self
            .time_budget_s
            .ok_or_else(|| Error::config("time_budget_s is unset (no surrounding experiment)"))?;
        if !budget.is_finite() || budget <= 0.0 {
            return Err(Error::config(format!("time_budget_s must be positive, got {budget}")));
        }
        Ok((min, max, budget))
    }
}

/// Geometric resource ladder min·η^k, capped by and always ending at max.
pub fn rung_ladder(min: u64, max: u64, eta: u32) -> Vec<u64> {
    let mut rungs = Vec::new();
    let mut r = min;
    while r < max {
        rungs.push(r);
        r = r.saturating_mul(eta as u64);
    }
    rungs.push(max);
    rungs
}

/// The asynchronous promotion rule: entry `idx` of `completions` (the
/// objective vectors recorded at one rung, oldest first) continues iff its
/// greedy-ranking position p satisfies p·η < n.
fn promoted_at(completions: &[Vec<f64>], idx: usize, eta: u32) -> Result<bool> {
    let order = greedy_order(completions)?;
    let position = order.iter().position(|&i| i == idx).expect("index ranked");
    Ok((position as u64) * (eta as u64) < completions.len() as u64)
}

struct Trial {
    hp: HyperparamVector,
    ckpt: Checkpoint,
    resource: u64,
}

/// A training segment in flight: `trial` finishes `rung` at `done_t`.
struct InFlight {
    done_t: u64,
    seq: u64,
    trial: usize,
    rung: usize,
}

/// The simulation state of one run, driven on a virtual clock.
struct Sim<'a> {
    task: &'a dyn TrainableTask,
    seed: u64,
    eta: u32,
    rungs: Vec<u64>,
    budget: f64,
    trials: Vec<Trial>,
    /// Completions per rung, oldest first: objectives keyed by trial id.
    rung_results: Vec<Vec<Vec<f64>>>,
    /// Promoted trials waiting for a worker, oldest first: (trial, rung).
    pending: Vec<(usize, usize)>,
    in_flight: Vec<InFlight>,
    seq: u64,
}

impl Sim<'_> {
    fn spawn(&mut self, t: u64, sink: &mut dyn EventSink) -> Result<usize> {
        let id = self.trials.len();
        let space = self.task.search_space();
        let hp = space.sample_uniform(&mut derive_rng(self.seed, &[stream::HP_INIT, id as u64]));
        let ckpt = self.task.init(&mut derive_rng(self.seed, &[stream::CKPT_INIT, id as u64]));
        let mut event = Event::new(EventKind::Init, t as f64, 0, id);
        event.hp = Some(hp.indices.clone());
        sink.record(&event)?;
        self.trials.push(Trial { hp, ckpt, resource: 0 });
        Ok(id)
    }

    /// Fills one freed worker at time `t`: oldest pending promotion whose
    /// segment fits the budget, else a fresh trial if one fits, else the
    /// worker retires.
    fn schedule(&mut self, t: u64, sink: &mut dyn EventSink) -> Result<()> {
        let mut chosen = None;
        for (pos, &(trial, rung)) in self.pending.iter().enumerate() {
            let done_t = t + (self.rungs[rung] - self.trials[trial].resource);
            if done_t as f64 <= self.budget {
                chosen = Some((pos, done_t));
                break;
            }
        }
        if let Some((pos, done_t)) = chosen {
            let (trial, rung) = self.pending.remove(pos);
            self.in_flight.push(InFlight { done_t, seq: self.seq, trial, rung });
            self.seq += 1;
        } else if (t + self.rungs[0]) as f64 <= self.budget {
            let trial = self.spawn(t, sink)?;
            let done_t = t + self.rungs[0];
            self.in_flight.push(InFlight { done_t, seq: self.seq, trial, rung: 0 });
            self.seq += 1;
        }
        Ok(())
    }

    /// Trains, evaluates, and logs the segment that completes at `done_t`.
    /// The result depends only on (trial, rung), not on when the segment
    /// ran, so reruns are identical.
    fn complete(&mut self, flight: InFlight, sink: &mut dyn EventSink) -> Result<()> {
        let InFlight { done_t, trial, rung, .. } = flight;
        let segment = self.rungs[rung] - self.trials[trial].resource;
        let mut rng = derive_rng(self.seed, &[stream::TRAIN, trial as u64, rung as u64]);
        let hp = self.trials[trial].hp.clone();
        self.task.train(&mut self.trials[trial].ckpt, &hp, segment, &mut rng)?;
        self.trials[trial].resource = self.rungs[rung];

        let outcome = evaluate_solution(self.task, &self.trials[trial].ckpt);
        let t = done_t as f64;
        if let Some(msg) = outcome.failure {
            // Failed trials stop here and never enter the rung table.
            let mut event = Event::new(EventKind::Error, t, self.rungs[rung], trial);
            event.msg = Some(msg);
            event.rung = Some(rung);
            sink.record(&event)?;
            return Ok(());
        }
        self.rung_results[rung].push(outcome.objectives.clone());
        let completions = &self.rung_results[rung];
        let promoted = promoted_at(completions, completions.len() - 1, self.eta)?;
        let mut event = Event::new(EventKind::Eval, t, self.rungs[rung], trial);
        event.f = Some(outcome.objectives);
        event.viol = outcome.violation;
        event.rung = Some(rung);
        event.promoted = Some(promoted);
        sink.record(&event)?;
        if promoted && rung + 1 < self.rungs.len() {
            self.pending.push((trial, rung + 1));
        }
        Ok(())
    }
}

pub fn mo_asha(
    task: &dyn TrainableTask,
    config: &AshaConfig,
    sink: &mut dyn EventSink,
) -> Result<()> {
    let (min, max, budget) = config.resolved(task)?;

    if (min as f64) > budget {
        let mut event = Event::new(EventKind::Error, 0.0, 0, 0);
        event.msg = Some(format!(
            "time budget {budget} s cannot fit one minimum-resource training \
             of {min} steps; the front is empty"
        ));
        sink.record(&event)?;
        return Ok(());
    }

    let rungs = rung_ladder(min, max, config.eta);
    let mut sim = Sim {
        task,
        seed: config.seed,
        eta: config.eta,
        rung_results: vec![Vec::new(); rungs.len()],
        rungs,
        budget,
        trials: Vec::new(),
        pending: Vec::new(),
        in_flight: Vec::new(),
        seq: 0,
    };

    for _ in 0..config.resolved_concurrent() {
        sim.schedule(0, sink)?;
    }
    while !sim.in_flight.is_empty() {
        let next = sim
            .in_flight
            .iter()
            .enumerate()
            .min_by_key(|(_, f)| (f.done_t, f.seq))
            .map(|(i, _)| i)
            .expect("non-empty");
        let flight = sim.in_flight.remove(next);
        let done_t = flight.done_t;
        sim.complete(flight, sink)?;
        sim.schedule(done_t, sink)?;
    }
    Ok(())
}
