//! Deterministic runner: one barrier per ready point, events in a fixed
//! order, timestamps in virtual seconds (one training step = one second on
//! each of the configured workers).

use std::path::Path;

use crate::runlog::{Event, EventKind, EventSink};
use crate::rngutil::{derive_rng, stream};
use crate::task::TrainableTask;
use crate::Result;

use super::ranking::sort_population;
use super::{evaluate_solution, exploit_pairs, init_population, mutate, sample_weight_table};
use super::EngineConfig;

pub(super) fn run_sync(
    task: &dyn TrainableTask,
    config: &EngineConfig,
    sink: &mut dyn EventSink,
    ckpt_dir: Option<&Path>,
) -> Result<()> {
    let n = config.population_size;
    let ready = config.resolved_ready_interval(task);
    let rounds = config.total_steps / ready;
    let workers = config.resolved_workers();
    // Virtual schedule: workers train one solution at a time, a training
    // interval takes `ready` seconds, and solution i runs in wave ⌊i/W⌋.
    let round_seconds = n.div_ceil(workers) as f64 * ready as f64;
    let seed = config.seed;
    let space = task.search_space();

    let (mut pop, store) = init_population(task, config, sink)?;
    let weight_table = sample_weight_table(config, task.objective_count())?;

    for round in 0..rounds {
        let step = (round + 1) * ready;
        let barrier_t = (round + 1) as f64 * round_seconds;
        for sol in &mut pop {
            let id = sol.id as u64;
            let mut ckpt = store.read(sol.id);
            let mut rng = derive_rng(seed, &[stream::TRAIN, id, round]);
            task.train(&mut ckpt, &sol.hyperparams, ready, &mut rng)?;
            store.write(sol.id, ckpt);
            sol.step = step;

            let outcome = evaluate_solution(task, &store.read(sol.id));
            let t = round as f64 * round_seconds
                + (sol.id / workers + 1) as f64 * ready as f64;
            let mut event = Event::new(EventKind::Eval, t, step, sol.id);
            if let Some(msg) = outcome.failure {
                event.event = EventKind::Error;
                event.msg = Some(msg);
            } else {
                event.f = Some(outcome.objectives.clone());
                event.hp = Some(sol.hyperparams.indices.clone());
                event.viol = outcome.violation;
            }
            sink.record(&event)?;
            sol.objectives = Some(outcome.objectives);
            sol.violation = outcome.violation;
        }

        // The final population is the result; replacing members after the
        // last evaluation would only discard measured diversity.
        if round + 1 == rounds {
            break;
        }

        let order = sort_population(
            &pop,
            &config.ranking,
            config.constraints,
            &weight_table,
            &mut derive_rng(seed, &[stream::RANK, round]),
        )?;
        let cut = config.truncation_cut();
        if cut == 0 {
            let mut warn = Event::new(EventKind::Warn, barrier_t, step, 0);
            warn.msg = Some(format!(
                "truncation of {}% selects zero of {n} solutions; exploit skipped",
                config.truncation_percent
            ));
            sink.record(&warn)?;
            continue;
        }
        let pairs =
            exploit_pairs(&order, cut, &mut derive_rng(seed, &[stream::DONOR, round]));
        for pair in pairs {
            store.copy(pair.donor, pair.loser);
            let donor_hp = pop[pair.donor].hyperparams.clone();
            let new_hp = mutate(
                &donor_hp,
                space,
                config.mutation,
                config.resample_probability,
                &mut derive_rng(seed, &[stream::EXPLORE, pair.loser as u64, round]),
            );
            let donor_objectives = pop[pair.donor].objectives.clone();
            let donor_violation = pop[pair.donor].violation;
            let loser = &mut pop[pair.loser];
            loser.hyperparams = new_hp.clone();
            loser.generation += 1;
            loser.objectives = donor_objectives;
            loser.violation = donor_violation;

            let mut event = Event::new(EventKind::Exploit, barrier_t, step, pair.loser);
            event.donor = Some(pair.donor);
            event.hp = Some(new_hp.indices);
            sink.record(&event)?;
        }
    }

    if let Some(dir) = ckpt_dir {
        store.persist(dir)?;
    }
    Ok(())
}
