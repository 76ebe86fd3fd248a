//! Bridges JSONL run logs to the metric types in `mopbt_core`, plus the CSV
//! exports. Only successful evaluation events carry objective vectors; error
//! and bookkeeping events never enter an archive.

use std::io::Write;
use std::path::Path;

use mopbt_core::{
    pareto_filter, ArchiveEntry, FrontArchive, GapPoint, ObjectiveVector, TimedObjective,
};

use crate::runlog::{Event, EventKind};
use crate::Result;

fn objective_events(events: &[Event]) -> impl Iterator<Item = (&Event, &Vec<f64>)> {
    events.iter().filter_map(|e| match (&e.event, &e.f) {
        (EventKind::Eval, Some(f)) => Some((e, f)),
        _ => None,
    })
}

/// Appends every evaluation of one run to the pooled archive; returns how
/// many entries were added.
pub fn extend_archive(
    archive: &mut FrontArchive,
    run_id: &str,
    events: &[Event],
) -> Result<usize> {
    let mut added = 0;
    for (event, f) in objective_events(events) {
        archive.push(ArchiveEntry {
            run: run_id.to_owned(),
            time_s: event.t,
            step: event.step,
            sol: event.sol as u64,
            objectives: ObjectiveVector::new(f.clone())?,
        });
        added += 1;
    }
    Ok(added)
}

/// A run's evaluations on its own timeline, ready for gap curves.
pub fn timed_objectives(events: &[Event]) -> Result<Vec<TimedObjective>> {
    objective_events(events)
        .map(|(event, f)| {
            Ok(TimedObjective {
                time_s: event.t,
                step: event.step,
                objectives: ObjectiveVector::new(f.clone())?,
            })
        })
        .collect()
}

/// Non-dominated subset of everything the run evaluated.
pub fn run_front(events: &[Event]) -> Result<Vec<ObjectiveVector>> {
    let points: Vec<ObjectiveVector> = objective_events(events)
        .map(|(_, f)| ObjectiveVector::new(f.clone()).map_err(crate::Error::from))
        .collect::<Result<_>>()?;
    Ok(pareto_filter(&points)?)
}

/// Fraction of the final population that ended infeasible, judged by each
/// solution's last recorded evaluation (an evaluation error counts as
/// infeasible). `None` when the log has no evaluations at all.
pub fn final_infeasible_fraction(events: &[Event]) -> Option<f64> {
    use std::collections::BTreeMap;
    // sol → (step, infeasible) of the latest eval or error event.
    let mut last: BTreeMap<usize, (u64, bool)> = BTreeMap::new();
    for e in events {
        let infeasible = match e.event {
            EventKind::Eval => e.viol.unwrap_or(0.0) > 0.0,
            EventKind::Error => true,
            _ => continue,
        };
        let entry = last.entry(e.sol).or_insert((e.step, infeasible));
        if e.step >= entry.0 {
            *entry = (e.step, infeasible);
        }
    }
    if last.is_empty() {
        return None;
    }
    let infeasible = last.values().filter(|(_, bad)| *bad).count();
    Some(infeasible as f64 / last.len() as f64)
}

/// Writes the union of per-run fronts with provenance:
/// `run_id,time_s,step,f1,...,fK`, runs in lexicographic order, entries in
/// log order within a run.
pub fn write_front_csv(path: &Path, archive: &FrontArchive) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    let k = archive.entries().first().map_or(0, |e| e.objectives.len());
    write!(out, "run_id,time_s,step")?;
    for i in 1..=k {
        write!(out, ",f{i}")?;
    }
    writeln!(out)?;
    let mut runs = archive.run_ids();
    runs.sort();
    for run in runs {
        let points = archive.run_points(&run);
        let front = pareto_filter(&points)?;
        let mut emitted: Vec<&ObjectiveVector> = Vec::new();
        for entry in archive.entries().iter().filter(|e| e.run == run) {
            let keep = front.contains(&entry.objectives)
                && !emitted.contains(&&entry.objectives);
            if !keep {
                continue;
            }
            emitted.push(&entry.objectives);
            write!(out, "{},{},{}", entry.run, entry.time_s, entry.step)?;
            for v in entry.objectives.values() {
                write!(out, ",{v}")?;
            }
            writeln!(out)?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Writes one run's gap curve as `time_s,hv,log_gap`.
pub fn write_gap_csv(path: &Path, curve: &[GapPoint]) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "time_s,hv,log_gap")?;
    for p in curve {
        writeln!(out, "{},{},{}", p.time_s, p.hypervolume, p.log_gap)?;
    }
    out.flush()?;
    Ok(())
}
