//! Generational NSGA-II over the same discrete search spaces: binary
//! tournament on the greedy-ranking position, uniform crossover, the
//! engine's explore operator as mutation, and (μ+μ) survival. Every
//! individual is a fresh network trained to the full step budget, so the
//! budget is counted in fully-trained networks.

use serde::{Deserialize, Serialize};

use super::greedy_order;
use crate::engine::{evaluate_solution, explore};
use crate::runlog::{Event, EventKind, EventSink};
use crate::rngutil::{derive_rng, stream};
use crate::space::HyperparamVector;
use crate::task::TrainableTask;
use crate::{Error, Result};

fn default_population() -> usize {
    8
}

fn default_crossover() -> f64 {
    0.9
}

fn default_resample() -> f64 {
    0.2
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Nsga2Config {
    /// μ: parents kept per generation; also the offspring count.
    #[serde(default = "default_population")]
    pub population_size: usize,
    /// Offspring generations after the initial population. Exactly one of
    /// this and `budget_networks` must be set.
    #[serde(default)]
    pub generations: Option<u32>,
    /// Total fully-trained networks; generations = (budget − μ) / μ.
    #[serde(default)]
    pub budget_networks: Option<u64>,
    #[serde(default = "default_crossover")]
    pub crossover_probability: f64,
    /// Resample probability of the explore-style mutation.
    #[serde(default = "default_resample")]
    pub mutation_resample_probability: f64,
    /// Steps each individual trains. The experiment layer fills this in
    /// from its epoch budget.
    #[serde(default)]
    pub total_steps: u64,
    /// Concurrent trainings; 0 means one worker per population member.
    #[serde(default)]
    pub workers: usize,
    #[serde(default)]
    pub seed: u64,
}

impl Default for Nsga2Config {
    fn default() -> Self {
        Nsga2Config {
            population_size: default_population(),
            generations: None,
            budget_networks: None,
            crossover_probability: default_crossover(),
            mutation_resample_probability: default_resample(),
            total_steps: 0,
            workers: 0,
            seed: 0,
        }
    }
}

impl Nsga2Config {
    pub fn resolved_workers(&self) -> usize {
        if self.workers == 0 {
            self.population_size
        } else {
            self.workers
        }
    }

    /// Offspring generations, derived from the network budget when given.
    pub fn resolved_generations(&self) -> Result<u32> {
        match (self.generations, self.budget_networks) {
            (Some(_), Some(_)) => Err(Error::config(
                "set either generations or budget_networks, not both",
            )),
            (Some(g), None) => Ok(g),
            (None, Some(budget)) => {
                let mu = self.population_size as u64;
                if budget < mu {
                    return Err(Error::config(format!(
                        "budget_networks ({budget}) is below one population ({mu})"
                    )));
                }
                Ok(((budget - mu) / mu) as u32)
            }
            (None, None) => {
                Err(Error::config("one of generations or budget_networks must be set"))
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.population_size < 2 {
            return Err(Error::config(format!(
                "population_size must be at least 2, got {}",
                self.population_size
            )));
        }
        if !(0.0..=1.0).contains(&self.crossover_probability) {
            return Err(Error::config(format!(
                "crossover_probability must lie in [0, 1], got {}",
                self.crossover_probability
            )));
        }
        if !(0.0..=1.0).contains(&self.mutation_resample_probability) {
            return Err(Error::config(format!(
                "mutation_resample_probability must lie in [0, 1], got {}",
                self.mutation_resample_probability
            )));
        }
        if self.total_steps == 0 {
            return Err(Error::config("total_steps must be positive"));
        }
        self.resolved_generations()?;
        Ok(())
    }
}

/// An evaluated individual; checkpoints are not retained (parents never
/// retrain, offspring start fresh).
#[derive(Debug, Clone)]
struct Individual {
    hp: HyperparamVector,
    objectives: Vec<f64>,
}

/// (μ+μ) survival: indices of the `mu` best of `objectives` under the
/// greedy ranking. Keeps whole earlier fronts first, so any solution
/// dominating a survivor is itself a survivor.
fn survivor_indices(objectives: &[Vec<f64>], mu: usize) -> Result<Vec<usize>> {
    Ok(greedy_order(objectives)?.into_iter().take(mu).collect())
}

/// Trains a fresh network for `hp`, logging init at its virtual start time
/// and eval (or error) at `t_done`.
fn train_individual(
    task: &dyn TrainableTask,
    config: &Nsga2Config,
    id: usize,
    hp: HyperparamVector,
    t_done: f64,
    sink: &mut dyn EventSink,
) -> Result<Individual> {
    let mut init = Event::new(EventKind::Init, t_done - config.total_steps as f64, 0, id);
    init.hp = Some(hp.indices.clone());
    sink.record(&init)?;

    let mut ckpt = task.init(&mut derive_rng(config.seed, &[stream::CKPT_INIT, id as u64]));
    let mut rng = derive_rng(config.seed, &[stream::TRAIN, id as u64, 0]);
    task.train(&mut ckpt, &hp, config.total_steps, &mut rng)?;
    let outcome = evaluate_solution(task, &ckpt);
    if let Some(msg) = outcome.failure {
        let mut event = Event::new(EventKind::Error, t_done, config.total_steps, id);
        event.msg = Some(msg);
        sink.record(&event)?;
    } else {
        let mut event = Event::new(EventKind::Eval, t_done, config.total_steps, id);
        event.f = Some(outcome.objectives.clone());
        event.viol = outcome.violation;
        sink.record(&event)?;
    }
    // Failures keep their worst-possible sentinel objectives: still
    // rankable, culled at the next survival selection.
    Ok(Individual { hp, objectives: outcome.objectives })
}

pub fn nsga2(task: &dyn TrainableTask, config: &Nsga2Config, sink: &mut dyn EventSink) -> Result<()> {
    config.validate()?;
    let generations = config.resolved_generations()?;
    let mu = config.population_size;
    let workers = config.resolved_workers();
    let space = task.search_space();
    // Virtual seconds per generation: each individual trains total_steps on
    // one of `workers` workers.
    let gen_seconds = (mu as u64).div_ceil(workers as u64) * config.total_steps;

    let mut next_id = 0;
    let mut parents: Vec<Individual> = Vec::with_capacity(mu);
    for i in 0..mu {
        let hp = space.sample_uniform(&mut derive_rng(config.seed, &[stream::HP_INIT, i as u64]));
        let t_done = ((i / workers) as u64 + 1) as f64 * config.total_steps as f64;
        parents.push(train_individual(task, config, next_id, hp, t_done, sink)?);
        next_id += 1;
    }

    for gen in 1..=generations {
        let parent_objs: Vec<Vec<f64>> = parents.iter().map(|p| p.objectives.clone()).collect();
        let order = greedy_order(&parent_objs)?;
        // rank_of[i] = position of parent i in the best→worst order.
        let mut rank_of = vec![0usize; mu];
        for (pos, &i) in order.iter().enumerate() {
            rank_of[i] = pos;
        }

        let mut offspring = Vec::with_capacity(mu);
        for j in 0..mu {
            let id = next_id;
            next_id += 1;

            let mut tournament = derive_rng(config.seed, &[stream::TOURNAMENT, id as u64]);
            let pick = |rng: &mut rand_chacha::ChaCha8Rng| {
                use rand::Rng;
                let a = rng.random_range(0..mu);
                let b = rng.random_range(0..mu);
                if rank_of[a] <= rank_of[b] {
                    a
                } else {
                    b
                }
            };
            let first = pick(&mut tournament);
            let second = pick(&mut tournament);

            let mut crossover = derive_rng(config.seed, &[stream::CROSSOVER, id as u64]);
            let child = {
                use rand::Rng;
                if crossover.random::<f64>() < config.crossover_probability {
                    let genes = parents[first]
                        .hp
                        .indices
                        .iter()
                        .zip(&parents[second].hp.indices)
                        .map(|(&x, &y)| if crossover.random::<bool>() { x } else { y })
                        .collect();
                    HyperparamVector::new(genes)
                } else {
                    parents[first].hp.clone()
                }
            };
            let mutated = explore(
                &child,
                space,
                config.mutation_resample_probability,
                &mut derive_rng(config.seed, &[stream::EXPLORE, id as u64]),
            );

            let t_done = (gen as u64 * gen_seconds + ((j / workers) as u64 + 1) * config.total_steps)
                as f64;
            offspring.push(train_individual(task, config, id, mutated, t_done, sink)?);
        }

        let mut combined = parents;
        combined.append(&mut offspring);
        let combined_objs: Vec<Vec<f64>> = combined.iter().map(|p| p.objectives.clone()).collect();
        let keep = survivor_indices(&combined_objs, mu)?;
        parents = keep.into_iter().map(|i| combined[i].clone()).collect();
    }
    Ok(())
}
