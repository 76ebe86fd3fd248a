//! ZDT1 recast as a maximization task with evaluation noise that anneals as
//! training progresses. "Training" moves the decision vector to the decoded
//! hyperparameters and accrues steps; more steps mean a cleaner measurement,
//! mimicking validation metrics that stabilize late in training.

use rand::{Rng, RngCore};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::bytes::{Reader, Writer};
use crate::rngutil;
use crate::space::{Domain, HyperparamVector, SearchSpace};
use crate::task::{Checkpoint, Evaluation, TrainableTask};
use crate::Result;

const CKPT_VERSION: u8 = 1;
const DIMENSIONS: usize = 5;

/// Noisy, negated ZDT1 over a discretized [0, 1]^5 grid.
pub struct ZdtNoisy {
    sigma0: f64,
    steps_per_epoch: u64,
    space: SearchSpace,
    objective_names: Vec<String>,
}

struct State {
    x: [f64; DIMENSIONS],
    steps: u64,
    noise_key: u64,
}

impl ZdtNoisy {
    pub fn new(sigma0: f64, steps_per_epoch: u64) -> Self {
        let domains = (1..=DIMENSIONS)
            .map(|i| Domain::linear(&format!("x{i}"), 0.0, 1.0, 10))
            .collect();
        ZdtNoisy {
            sigma0,
            steps_per_epoch,
            space: SearchSpace::new(domains).expect("static domains are valid"),
            objective_names: vec!["f1".to_owned(), "f2".to_owned()],
        }
    }

    fn read_state(&self, ckpt: &Checkpoint) -> Result<State> {
        let mut r = Reader::expect_version(ckpt.as_bytes(), CKPT_VERSION)?;
        let mut x = [0.0; DIMENSIONS];
        for v in &mut x {
            *v = r.f64()?;
        }
        let steps = r.u64()?;
        let noise_key = r.u64()?;
        r.finish()?;
        Ok(State { x, steps, noise_key })
    }

    fn write_state(&self, state: &State) -> Checkpoint {
        let mut w = Writer::with_version(CKPT_VERSION);
        for v in state.x {
            w.f64(v);
        }
        w.u64(state.steps);
        w.u64(state.noise_key);
        Checkpoint::from_bytes(w.finish())
    }
}

/// Negated ZDT1: both objectives are maximized and peak at 0.
fn negated_zdt1(x: &[f64; DIMENSIONS]) -> [f64; 2] {
    let f1 = x[0];
    let g = 1.0 + 9.0 * x[1..].iter().sum::<f64>() / (DIMENSIONS - 1) as f64;
    let f2 = g * (1.0 - (f1 / g).sqrt());
    // Negate for maximization, mapping -0.0 to 0.0 so byte-level outputs do
    // not depend on which side of zero the sign flip lands.
    let neg = |v: f64| if v == 0.0 { 0.0 } else { -v };
    [neg(f1), neg(f2)]
}

impl TrainableTask for ZdtNoisy {
    fn name(&self) -> &str {
        "zdt1-noisy"
    }

    fn objective_count(&self) -> usize {
        2
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

    fn init(&self, rng: &mut ChaCha8Rng) -> Checkpoint {
        let mut x = [0.0; DIMENSIONS];
        for v in &mut x {
            *v = rng.random::<f64>();
        }
        let noise_key = rng.next_u64();
        self.write_state(&State { x, steps: 0, noise_key })
    }

    fn train(
        &self,
        ckpt: &mut Checkpoint,
        h: &HyperparamVector,
        steps: u64,
        _rng: &mut ChaCha8Rng,
    ) -> Result<()> {
        let decoded = self.space.decode(h);
        let mut state = self.read_state(ckpt)?;
        state.x.copy_from_slice(&decoded);
        state.steps += steps;
        *ckpt = self.write_state(&state);
        Ok(())
    }

    fn evaluate(&self, ckpt: &Checkpoint) -> Result<Evaluation> {
        let state = self.read_state(ckpt)?;
        let mut f = negated_zdt1(&state.x);
        if self.sigma0 > 0.0 {
            // Noise depends only on checkpoint contents, keeping evaluation
            // a pure function of the bytes it is given.
            let sigma = self.sigma0 / (1.0 + state.steps as f64).sqrt();
            let mut noise_rng = rngutil::derive_rng(state.noise_key, &[state.steps]);
            for v in &mut f {
                let eps: f64 = StandardNormal.sample(&mut noise_rng);
                *v += sigma * eps;
            }
        }
        Ok(Evaluation::unconstrained(f.to_vec()))
    }
}
