//! Append-only event stream shared by every optimizer in this crate. Runs
//! persist it as JSONL (one event per line) so metrics, reports, and plots
//! can be recomputed from disk without rerunning anything.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::Result;

/// What a log line describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EventKind {
    /// Solution created with its starting hyperparameters.
    Init,
    /// Objectives measured after a training interval.
    Eval,
    /// Solution replaced by a copy of `donor` (hyperparameters already
    /// perturbed; `hp` is the value the lineage continues with).
    Exploit,
    /// Evaluation produced unusable values; the run continues.
    Error,
    /// A step degenerated into a no-op (for example a truncation cut of
    /// zero solutions).
    Warn,
}

/// One run-log line. `t` is seconds since the run started: virtual seconds
/// under synchronous execution, wall-clock seconds under asynchronous.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub t: f64,
    pub step: u64,
    pub event: EventKind,
    pub sol: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hp: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub donor: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub viol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub msg: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rung: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub promoted: Option<bool>,
}

impl Event {
    /// Event with every optional field empty.
    pub fn new(kind: EventKind, t: f64, step: u64, sol: usize) -> Self {
        Event {
            t,
            step,
            event: kind,
            sol,
            f: None,
            hp: None,
            donor: None,
            viol: None,
            msg: None,
            rung: None,
            promoted: None,
        }
    }
}

/// Destination for events as a run produces them.
pub trait EventSink: Send {
    fn record(&mut self, event: &Event) -> Result<()>;
}

/// Collects events in memory; the sink of choice for tests and for runs
/// that post-process their own log.
#[derive(Debug, Default)]
pub struct VecSink {
    pub events: Vec<Event>,
}

impl EventSink for VecSink {
    fn record(&mut self, event: &Event) -> Result<()> {
        self.events.push(event.clone());
        Ok(())
    }
}

/// Streams events to a JSONL file.
pub struct JsonlSink {
    writer: BufWriter<File>,
}

impl JsonlSink {
    pub fn create(path: &Path) -> Result<Self> {
        Ok(JsonlSink { writer: BufWriter::new(File::create(path)?) })
    }

    /// Flushes buffered lines; call once the run is over.
    pub fn finish(mut self) -> Result<()> {
        self.writer.flush()?;
        Ok(())
    }
}

impl EventSink for JsonlSink {
    fn record(&mut self, event: &Event) -> Result<()> {
        serde_json::to_writer(&mut self.writer, event)?;
        self.writer.write_all(b"\n")?;
        Ok(())
    }
}

/// Records into both sinks, in order.
pub struct TeeSink<'a> {
    pub first: &'a mut dyn EventSink,
    pub second: &'a mut dyn EventSink,
}

impl EventSink for TeeSink<'_> {
    fn record(&mut self, event: &Event) -> Result<()> {
        self.first.record(event)?;
        self.second.record(event)
    }
}

/// Reads a JSONL run log back into memory.
pub fn read_events(path: &Path) -> Result<Vec<Event>> {
    let reader = BufReader::new(File::open(path)?);
    let mut events = Vec::new();
    for line in reader.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        events.push(serde_json::from_str(&line)?);
    }
    Ok(events)
}

/// Writes events to `path` as JSONL, replacing any existing file.
pub fn write_events(path: &Path, events: &[Event]) -> Result<()> {
    let mut sink = JsonlSink::create(path)?;
    for event in events {
        sink.record(event)?;
    }
    sink.finish()
}
