//! A two-parameter "network" trained by noisy gradient descent on a weighted
//! sum of quadratic losses. Each objective rewards proximity to a different
//! anchor, so the anchors' weights and the learning rate genuinely trade the
//! objectives against each other, and the best weighting changes as θ moves.

use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::bytes::{Reader, Writer};
use crate::space::{Domain, HyperparamVector, SearchSpace};
use crate::task::{Checkpoint, Evaluation, TrainableTask};
use crate::Result;

const CKPT_VERSION: u8 = 1;
const THETA_BOUND: f64 = 10.0;
const INIT_SCALE: f64 = 0.1;

/// Quadratic multi-objective training task.
///
/// The trained state is θ ∈ R². Objective i is `offset − |θ − a_i|²` for
/// anchor `a_i`, so each objective peaks at its own anchor and the Pareto
/// set is the convex hull of the anchors. Training takes noisy gradient
/// steps on `L(θ) = Σ_j w_j · |θ − a_j|²` with the weights `w_j` and the
/// learning rate supplied as hyperparameters.
pub struct ToyQuadratic {
    name: &'static str,
    anchors: Vec<[f64; 2]>,
    objective_names: Vec<String>,
    noise_sigma: f64,
    offset: f64,
    constraint_threshold: Option<f64>,
    steps_per_epoch: u64,
    space: SearchSpace,
}

impl ToyQuadratic {
    /// Two objectives anchored at (0, 0) and (1, 1).
    pub fn two_objective(noise_sigma: f64, steps_per_epoch: u64) -> Self {
        Self::build(
            "toy-quadratic-mo",
            vec![[0.0, 0.0], [1.0, 1.0]],
            noise_sigma,
            None,
            steps_per_epoch,
        )
    }

    /// Three objectives; the third anchor (1, −1) pulls off the f1–f2 diagonal.
    pub fn three_objective(noise_sigma: f64, steps_per_epoch: u64) -> Self {
        Self::build(
            "toy-quadratic-3",
            vec![[0.0, 0.0], [1.0, 1.0], [1.0, -1.0]],
            noise_sigma,
            None,
            steps_per_epoch,
        )
    }

    /// Two objectives plus the feasibility requirement f1 ≥ `threshold`.
    pub fn constrained(threshold: f64, noise_sigma: f64, steps_per_epoch: u64) -> Self {
        Self::build(
            "toy-quadratic-constrained",
            vec![[0.0, 0.0], [1.0, 1.0]],
            noise_sigma,
            Some(threshold),
            steps_per_epoch,
        )
    }

    fn build(
        name: &'static str,
        anchors: Vec<[f64; 2]>,
        noise_sigma: f64,
        constraint_threshold: Option<f64>,
        steps_per_epoch: u64,
    ) -> Self {
        let mut domains: Vec<Domain> = (1..=anchors.len())
            .map(|i| Domain::linear(&format!("w{i}"), 0.0, 1.0, 10))
            .collect();
        domains.push(Domain::logarithmic("lr", 1e-3, 1.0, 10));
        let space = SearchSpace::new(domains).expect("static domains are valid");
        let objective_names = (1..=anchors.len()).map(|i| format!("f{i}")).collect();
        ToyQuadratic {
            name,
            anchors,
            objective_names,
            noise_sigma,
            offset: 1.2,
            constraint_threshold,
            steps_per_epoch,
            space,
        }
    }

    /// Checkpoint whose trained state is exactly `theta`; useful for
    /// evaluating the objective surface at chosen points.
    pub fn checkpoint_at(&self, theta: [f64; 2]) -> Checkpoint {
        let mut w = Writer::with_version(CKPT_VERSION);
        w.f64(theta[0]);
        w.f64(theta[1]);
        Checkpoint::from_bytes(w.finish())
    }

    /// Trained state stored in `ckpt`.
    pub fn theta(&self, ckpt: &Checkpoint) -> Result<[f64; 2]> {
        let mut r = Reader::expect_version(ckpt.as_bytes(), CKPT_VERSION)?;
        let theta = [r.f64()?, r.f64()?];
        r.finish()?;
        Ok(theta)
    }
}

impl TrainableTask for ToyQuadratic {
    fn name(&self) -> &str {
        self.name
    }

    fn objective_count(&self) -> usize {
        self.anchors.len()
    }

    fn objective_names(&self) -> Vec<String> {
        self.objective_names.clone()
    }

    fn search_space(&self) -> &SearchSpace {
        &self.space
    }

    fn steps_per_epoch(&self) -> u64 {
        self.steps_per_epoch
    }

    fn has_constraint(&self) -> bool {
        self.constraint_threshold.is_some()
    }

    fn init(&self, rng: &mut ChaCha8Rng) -> Checkpoint {
        let normal = StandardNormal;
        let theta = [
            INIT_SCALE * <StandardNormal as Distribution<f64>>::sample(&normal, rng),
            INIT_SCALE * <StandardNormal as Distribution<f64>>::sample(&normal, rng),
        ];
        self.checkpoint_at(theta)
    }

    fn train(
        &self,
        ckpt: &mut Checkpoint,
        h: &HyperparamVector,
        steps: u64,
        rng: &mut ChaCha8Rng,
    ) -> Result<()> {
        let values = self.space.decode(h);
        let (weights, lr) = values.split_at(self.anchors.len());
        let lr = lr[0];
        let mut theta = self.theta(ckpt)?;
        let normal = StandardNormal;
        for _ in 0..steps {
            for d in 0..2 {
                let grad: f64 = self
                    .anchors
                    .iter()
                    .zip(weights)
                    .map(|(a, w)| 2.0 * w * (theta[d] - a[d]))
                    .sum();
                let eps: f64 = normal.sample(rng);
                theta[d] -= lr * (grad + self.noise_sigma * eps);
                theta[d] = theta[d].clamp(-THETA_BOUND, THETA_BOUND);
            }
        }
        *ckpt = self.checkpoint_at(theta);
        Ok(())
    }

    fn evaluate(&self, ckpt: &Checkpoint) -> Result<Evaluation> {
        let theta = self.theta(ckpt)?;
        let objectives: Vec<f64> = self
            .anchors
            .iter()
            .map(|a| {
                let dx = theta[0] - a[0];
                let dy = theta[1] - a[1];
                self.offset - (dx * dx + dy * dy)
            })
            .collect();
        let violation = self.constraint_threshold.map(|threshold| {
            if objectives[0] >= threshold {
                0.0
            } else {
                threshold - objectives[0]
            }
        });
        Ok(Evaluation { objectives, violation })
    }
}
