//! Multi-objective population based training over synthetic trainable
//! tasks, plus the baselines and tooling around it.
//!
//! The crate layers on top of [`mopbt_core`] (pure ranking/metric math):
//!
//! * [`space`] / [`task`] / [`tasks`] — discrete search spaces and the
//!   checkpoint-based trainable-task abstraction with built-in synthetic
//!   tasks.
//! * [`engine`] — the population based training loop with pluggable
//!   ranking, synchronous (deterministic, virtual-time) and asynchronous
//!   (threaded) execution.
//! * [`baselines`] — random search, multi-objective asynchronous
//!   successive halving, and a generational NSGA-II.
//! * [`runlog`] / [`archive`] / [`plot`] / [`report`] — JSONL event logs,
//!   cross-run metric pooling, CSV and SVG export.
//! * [`experiment`] / [`cli`] — config-driven orchestration of multi-seed,
//!   multi-algorithm studies.

pub mod archive;
pub mod baselines;
mod bytes;
pub mod cli;
pub mod engine;
mod error;
pub mod experiment;
pub mod plot;
pub mod report;
pub mod rngutil;
pub mod runlog;
pub mod space;
pub mod stats;
pub mod task;
pub mod tasks;

pub use error::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
