//! Built-in synthetic tasks: small enough to train in microseconds, shaped
//! so that objectives conflict, checkpoints carry real state, and adaptive
//! hyperparameter schedules have something to gain.

mod toy_quadratic;
mod zdt_noisy;

pub use toy_quadratic::ToyQuadratic;
pub use zdt_noisy::ZdtNoisy;

use serde::{Deserialize, Serialize};

use crate::task::TrainableTask;

fn default_noise_sigma() -> f64 {
    0.01
}

fn default_steps_per_epoch() -> u64 {
    10
}

fn default_threshold() -> f64 {
    0.2
}

fn default_sigma0() -> f64 {
    0.5
}

/// Task selection and parameters as they appear under `"task"` in an
/// experiment config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name")]
pub enum TaskSpec {
    /// Two conflicting quadratic objectives over a trained state θ ∈ R².
    #[serde(rename = "toy-quadratic-mo")]
    ToyQuadraticMo {
        #[serde(default = "default_noise_sigma")]
        noise_sigma: f64,
        #[serde(default = "default_steps_per_epoch")]
        steps_per_epoch: u64,
    },
    /// Three-anchor variant of the quadratic task (K = 3).
    #[serde(rename = "toy-quadratic-3")]
    ToyQuadratic3 {
        #[serde(default = "default_noise_sigma")]
        noise_sigma: f64,
        #[serde(default = "default_steps_per_epoch")]
        steps_per_epoch: u64,
    },
    /// Quadratic task with the feasibility constraint f1 ≥ threshold.
    #[serde(rename = "toy-quadratic-constrained")]
    ToyQuadraticConstrained {
        #[serde(default = "default_threshold")]
        threshold: f64,
        #[serde(default = "default_noise_sigma")]
        noise_sigma: f64,
        #[serde(default = "default_steps_per_epoch")]
        steps_per_epoch: u64,
    },
    /// ZDT1 negated to maximization with training-annealed evaluation noise.
    #[serde(rename = "zdt1-noisy")]
    Zdt1Noisy {
        #[serde(default = "default_sigma0")]
        sigma0: f64,
        #[serde(default = "default_steps_per_epoch")]
        steps_per_epoch: u64,
    },
}

impl TaskSpec {
    /// The two-objective quadratic task with default parameters.
    pub fn default_toy() -> Self {
        TaskSpec::ToyQuadraticMo {
            noise_sigma: default_noise_sigma(),
            steps_per_epoch: default_steps_per_epoch(),
        }
    }

    /// Instantiates the task this spec describes.
    pub fn build(&self) -> Box<dyn TrainableTask> {
        match *self {
            TaskSpec::ToyQuadraticMo { noise_sigma, steps_per_epoch } => {
                Box::new(ToyQuadratic::two_objective(noise_sigma, steps_per_epoch))
            }
            TaskSpec::ToyQuadratic3 { noise_sigma, steps_per_epoch } => {
                Box::new(ToyQuadratic::three_objective(noise_sigma, steps_per_epoch))
            }
            TaskSpec::ToyQuadraticConstrained { threshold, noise_sigma, steps_per_epoch } => {
                Box::new(ToyQuadratic::constrained(threshold, noise_sigma, steps_per_epoch))
            }
            TaskSpec::Zdt1Noisy { sigma0, steps_per_epoch } => {
                Box::new(ZdtNoisy::new(sigma0, steps_per_epoch))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn specs_parse_with_defaults() {
        let spec: TaskSpec = serde_json::from_str(r#"{"name": "toy-quadratic-mo"}"#).unwrap();
        assert_eq!(
            spec,
            TaskSpec::ToyQuadraticMo { noise_sigma: 0.01, steps_per_epoch: 10 }
        );
        let spec: TaskSpec =
            serde_json::from_str(r#"{"name": "zdt1-noisy", "sigma0": 0.25}"#).unwrap();
        assert_eq!(spec, TaskSpec::Zdt1Noisy { sigma0: 0.25, steps_per_epoch: 10 });
    }

    #[test]
    fn built_tasks_report_consistent_shapes() {
        for (spec, k, params) in [
            (r#"{"name": "toy-quadratic-mo"}"#, 2, 3),
            (r#"{"name": "toy-quadratic-3"}"#, 3, 4),
            (r#"{"name": "toy-quadratic-constrained"}"#, 2, 3),
            (r#"{"name": "zdt1-noisy"}"#, 2, 5),
        ] {
            let task = serde_json::from_str::<TaskSpec>(spec).unwrap().build();
            assert_eq!(task.objective_count(), k, "{spec}");
            assert_eq!(task.objective_names().len(), k);
            assert_eq!(task.search_space().num_params(), params, "{spec}");
        }
    }
}
