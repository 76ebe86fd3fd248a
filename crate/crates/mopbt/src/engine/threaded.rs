//! Asynchronous runner: a pool of worker threads pulls solutions from a
//! queue; at its own ready point each solution ranks a snapshot of the
//! population and, if it falls in the bottom truncation slice, replaces
//! itself from a top-slice donor. Timestamps are wall-clock seconds; only
//! synchronous mode promises reproducible logs.

use std::collections::VecDeque;
use std::path::Path;
use std::sync::{Mutex, RwLock};
use std::time::Instant;

use rand::Rng;

use crate::runlog::{Event, EventKind, EventSink};
use crate::rngutil::{derive_rng, stream};
use crate::space::SearchSpace;
use crate::task::TrainableTask;
use crate::{Error, Result};

use super::ranking::sort_population;
use super::{evaluate_solution, init_population, mutate, sample_weight_table};
use super::{CheckpointStore, EngineConfig, Solution};

struct Ctx<'a> {
    task: &'a dyn TrainableTask,
    config: &'a EngineConfig,
    space: &'a SearchSpace,
    state: &'a RwLock<Vec<Solution>>,
    store: &'a CheckpointStore,
    sink: &'a Mutex<&'a mut dyn EventSink>,
    weight_table: &'a [Vec<f64>],
    start: Instant,
    ready: u64,
}

pub(super) fn run_async(
    task: &dyn TrainableTask,
    config: &EngineConfig,
    sink: &mut dyn EventSink,
    ckpt_dir: Option<&Path>,
) -> Result<()> {
    let n = config.population_size;
    let workers = config.resolved_workers();
    let (pop, store) = init_population(task, config, sink)?;
    let weight_table = sample_weight_table(config, task.objective_count())?;

    let ctx = Ctx {
        task,
        config,
        space: task.search_space(),
        state: &RwLock::new(pop),
        store: &store,
        sink: &Mutex::new(sink),
        weight_table: &weight_table,
        start: Instant::now(),
        ready: config.resolved_ready_interval(task),
    };
    let queue = Mutex::new((0..n).collect::<VecDeque<usize>>());
    let first_error: Mutex<Option<Error>> = Mutex::new(None);

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                if first_error.lock().expect("error lock").is_some() {
                    break;
                }
                let next = queue.lock().expect("queue lock").pop_front();
                let Some(id) = next else { break };
                match process_interval(&ctx, id) {
                    Ok(()) => {
                        let done = ctx.state.read().expect("state lock")[id].step
                            >= ctx.config.total_steps;
                        if !done {
                            queue.lock().expect("queue lock").push_back(id);
                        }
                    }
                    Err(err) => {
                        first_error.lock().expect("error lock").get_or_insert(err);
                        break;
                    }
                }
            });
        }
    });

    if let Some(err) = first_error.into_inner().expect("error lock") {
        return Err(err);
    }
    if let Some(dir) = ckpt_dir {
        store.persist(dir)?;
    }
    Ok(())
}

/// Trains `id` for one interval, evaluates it, and applies its own ready
/// point against a population snapshot.
fn process_interval(ctx: &Ctx<'_>, id: usize) -> Result<()> {
    let config = ctx.config;
    let seed = config.seed;
    let (hp, step) = {
        let state = ctx.state.read().expect("state lock");
        (state[id].hyperparams.clone(), state[id].step)
    };
    let round = step / ctx.ready;
    let interval = ctx.ready.min(config.total_steps - step);

    let mut ckpt = ctx.store.read(id);
    let mut train_rng = derive_rng(seed, &[stream::TRAIN, id as u64, round]);
    ctx.task.train(&mut ckpt, &hp, interval, &mut train_rng)?;
    ctx.store.write(id, ckpt);

    let outcome = evaluate_solution(ctx.task, &ctx.store.read(id));
    let new_step = step + interval;
    {
        let mut state = ctx.state.write().expect("state lock");
        let sol = &mut state[id];
        sol.step = new_step;
        sol.objectives = Some(outcome.objectives.clone());
        sol.violation = outcome.violation;
    }
    let mut event = Event::new(EventKind::Eval, ctx.start.elapsed().as_secs_f64(), new_step, id);
    if let Some(msg) = outcome.failure {
        event.event = EventKind::Error;
        event.msg = Some(msg);
    } else {
        event.f = Some(outcome.objectives);
        event.hp = Some(hp.indices.clone());
        event.viol = outcome.violation;
    }
    ctx.sink.lock().expect("sink lock").record(&event)?;

    if new_step >= config.total_steps {
        return Ok(());
    }

    // Ready point: rank a snapshot; during warm-up (some solutions not yet
    // evaluated) no ranking is possible and exploit is skipped.
    let snapshot = ctx.state.read().expect("state lock").clone();
    if snapshot.iter().any(|s| s.objectives.is_none()) {
        return Ok(());
    }
    let cut = config.truncation_cut();
    if cut == 0 {
        let mut warn =
            Event::new(EventKind::Warn, ctx.start.elapsed().as_secs_f64(), new_step, id);
        warn.msg = Some(format!(
            "truncation of {}% selects zero of {} solutions; exploit skipped",
            config.truncation_percent, config.population_size
        ));
        ctx.sink.lock().expect("sink lock").record(&warn)?;
        return Ok(());
    }
    let order = sort_population(
        &snapshot,
        &config.ranking,
        config.constraints,
        ctx.weight_table,
        &mut derive_rng(seed, &[stream::RANK, id as u64, round]),
    )?;
    let position = order.iter().position(|&s| s == id).expect("id in order");
    if position < snapshot.len() - cut {
        return Ok(());
    }

    let mut donor_rng = derive_rng(seed, &[stream::DONOR, id as u64, round]);
    let donor = order[donor_rng.random_range(0..cut)];
    ctx.store.copy(donor, id);
    let new_hp = mutate(
        &snapshot[donor].hyperparams,
        ctx.space,
        config.mutation,
        config.resample_probability,
        &mut derive_rng(seed, &[stream::EXPLORE, id as u64, round]),
    );
    {
        let mut state = ctx.state.write().expect("state lock");
        let sol = &mut state[id];
        sol.hyperparams = new_hp.clone();
        sol.generation += 1;
        sol.objectives = snapshot[donor].objectives.clone();
        sol.violation = snapshot[donor].violation;
    }
    let mut event =
        Event::new(EventKind::Exploit, ctx.start.elapsed().as_secs_f64(), new_step, id);
    event.donor = Some(donor);
    event.hp = Some(new_hp.indices);
    ctx.sink.lock().expect("sink lock").record(&event)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{run, ExecutionMode, MutationKind, RankingMode};
    use crate::runlog::VecSink;
    use crate::space::HyperparamVector;
    use crate::tasks::{ToyQuadratic, ZdtNoisy};

    fn config(n: usize, total: u64, workers: usize) -> EngineConfig {
        EngineConfig {
            population_size: n,
            truncation_percent: 25,
            ready_interval: Some(20),
            total_steps: total,
            resample_probability: 0.2,
            ranking: RankingMode::GreedySubset,
            mutation: MutationKind::Local,
            constraints: false,
            mode: ExecutionMode::Asynchronous,
            workers,
            seed: 21,
        }
    }

    #[test]
    fn async_run_completes_every_lineage() {
        let task = ToyQuadratic::two_objective(0.01, 10);
        let mut sink = VecSink::default();
        run(&task, &config(6, 80, 3), &mut sink, None).unwrap();
        for id in 0..6 {
            let evals: Vec<_> = sink
                .events
                .iter()
                .filter(|e| e.event == EventKind::Eval && e.sol == id)
                .collect();
            assert_eq!(evals.len(), 4, "solution {id} must evaluate once per interval");
            assert_eq!(evals.last().unwrap().step, 80);
        }
        let space = task.search_space();
        for e in &sink.events {
            if let Some(hp) = &e.hp {
                assert!(space.contains(&HyperparamVector::new(hp.clone())));
            }
        }
    }

    #[test]
    fn uneven_final_interval_is_allowed() {
        let task = ZdtNoisy::new(0.25, 10);
        let mut sink = VecSink::default();
        run(&task, &config(4, 50, 2), &mut sink, None).unwrap();
        for id in 0..4 {
            let steps: Vec<u64> = sink
                .events
                .iter()
                .filter(|e| e.event == EventKind::Eval && e.sol == id)
                .map(|e| e.step)
                .collect();
            assert_eq!(steps, vec![20, 40, 50], "solution {id}");
        }
        // No exploit can trigger at a solution's final step.
        assert!(sink
            .events
            .iter()
            .all(|e| e.event != EventKind::Exploit || e.step < 50));
    }

    #[test]
    fn exploits_only_replace_the_acting_solution_itself() {
        let task = ToyQuadratic::two_objective(0.05, 10);
        let mut sink = VecSink::default();
        run(&task, &config(8, 200, 4), &mut sink, None).unwrap();
        for e in sink.events.iter().filter(|e| e.event == EventKind::Exploit) {
            let donor = e.donor.expect("exploit carries a donor");
            assert_ne!(donor, e.sol, "a solution cannot donate to itself");
        }
        // With 10 ready points and 4 workers the population warms up early,
        // so at least one self-replacement should have happened.
        assert!(sink.events.iter().any(|e| e.event == EventKind::Exploit));
    }
}
