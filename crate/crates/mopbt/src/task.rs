//! The trainable-task abstraction: anything with checkpointable state that
//! can be trained in step increments and evaluated to objective values.

use rand_chacha::ChaCha8Rng;

use crate::space::{HyperparamVector, SearchSpace};
use crate::Result;

/// Opaque serialized task state. The owning task defines the layout; the
/// engine only copies, stores, and hands the bytes back.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Checkpoint(Vec<u8>);

impl Checkpoint {
    pub fn from_bytes(bytes: Vec<u8>) -> Self {
        Self(bytes)
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.0
    }
}

/// Result of evaluating a checkpoint: raw objective values (maximization)
/// plus, for constrained tasks, a violation magnitude (zero = feasible).
///
/// Values are deliberately unvalidated here — the engine decides how to
/// react to non-finite objectives.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub objectives: Vec<f64>,
    pub violation: Option<f64>,
}

impl Evaluation {
    pub fn unconstrained(objectives: Vec<f64>) -> Self {
        Self { objectives, violation: None }
    }
}

/// A task the engine can optimize: immutable definition, mutable state only
/// inside checkpoints owned by the caller.
pub trait TrainableTask: Send + Sync {
    /// Stable task name (matches the config-file name).
    fn name(&self) -> &str;

    /// Number of objectives `K`.
    fn objective_count(&self) -> usize;

    /// Human-readable objective names, length `K`; used for axis labels.
    fn objective_names(&self) -> Vec<String>;

    /// The hyperparameter domains this task is searched over.
    fn search_space(&self) -> &SearchSpace;

    /// Steps making up one "epoch"; ready intervals default to twice this.
    fn steps_per_epoch(&self) -> u64;

    /// Whether [`Evaluation::violation`] will be populated.
    fn has_constraint(&self) -> bool {
        false
    }

    /// Fresh trainable state, deterministic in the rng stream.
    fn init(&self, rng: &mut ChaCha8Rng) -> Checkpoint;

    /// Advances the state `steps` training steps under hyperparameters `h`.
    /// Training noise comes from `rng`; running one call of `a + b` steps
    /// equals running `a` then `b` steps with the same rng carried over.
    fn train(
        &self,
        ckpt: &mut Checkpoint,
        h: &HyperparamVector,
        steps: u64,
        rng: &mut ChaCha8Rng,
    ) -> Result<()>;

    /// Objective values of the current state. Pure: same checkpoint, same
    /// result, no matter how often it is called.
    fn evaluate(&self, ckpt: &Checkpoint) -> Result<Evaluation>;
}
