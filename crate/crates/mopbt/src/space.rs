//! Discrete hyperparameter search spaces with ordinal encoding.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// How a domain's values were spaced; recorded for plotting and docs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Linear,
    Log,
}

/// One hyperparameter: a name and an ordered list of admissible values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub name: String,
    pub scale: Scale,
    pub values: Vec<f64>,
}

impl Domain {
    /// `count` linearly spaced values over `[lo, hi]`.
    pub fn linear(name: &str, lo: f64, hi: f64, count: usize) -> Self {
        let step = (hi - lo) / (count - 1) as f64;
        Self {
            name: name.to_string(),
            scale: Scale::Linear,
            values: (0..count).map(|i| lo + step * i as f64).collect(),
        }
    }

    /// `count` log-spaced values over `[lo, hi]`; `lo` must be positive.
    pub fn logarithmic(name: &str, lo: f64, hi: f64, count: usize) -> Self {
        let ratio = (hi / lo).powf(1.0 / (count - 1) as f64);
        Self {
            name: name.to_string(),
            scale: Scale::Log,
            values: (0..count).map(|i| lo * ratio.powi(i as i32)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Ordinal indices into a search space, one per domain.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HyperparamVector {
    pub indices: Vec<usize>,
}

impl HyperparamVector {
    pub fn new(indices: Vec<usize>) -> Self {
        Self { indices }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// The product of all hyperparameter domains.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchSpace {
    domains: Vec<Domain>,
}

impl SearchSpace {
    /// Validates that every domain offers at least two finite values.
    pub fn new(domains: Vec<Domain>) -> Result<Self> {
        if domains.is_empty() {
            return Err(Error::config("search space has no domains"));
        }
        for d in &domains {
            if d.values.len() < 2 {
                return Err(Error::config(format!(
                    "domain '{}' needs at least 2 values, has {}",
                    d.name,
                    d.values.len()
                )));
            }
            if d.values.iter().any(|v| !v.is_finite()) {
                return Err(Error::config(format!("domain '{}' has non-finite values", d.name)));
            }
        }
        Ok(Self { domains })
    }

    pub fn domains(&self) -> &[Domain] {
        &self.domains
    }

    /// Number of hyperparameters.
    pub fn num_params(&self) -> usize {
        self.domains.len()
    }

    /// True when every index lies inside its domain.
    pub fn contains(&self, h: &HyperparamVector) -> bool {
        h.indices.len() == self.domains.len()
            && h.indices.iter().zip(&self.domains).all(|(&i, d)| i < d.len())
    }

    /// Uniform independent draw of one index per domain.
    pub fn sample_uniform(&self, rng: &mut ChaCha8Rng) -> HyperparamVector {
        HyperparamVector::new(
            self.domains
                .iter()
                .map(|d| rng.random_range(0..d.len()))
                .collect(),
        )
    }

    /// Maps ordinal indices to their real values.
    pub fn decode(&self, h: &HyperparamVector) -> Vec<f64> {
        debug_assert!(self.contains(h));
        h.indices
            .iter()
            .zip(&self.domains)
            .map(|(&i, d)| d.values[i])
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn linear_spacing_hits_both_endpoints() {
        let d = Domain::linear("w", 0.0, 1.0, 10);
        assert_eq!(d.len(), 10);
        assert_eq!(d.values[0], 0.0);
        assert_eq!(d.values[9], 1.0);
        assert!((d.values[1] - 1.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn log_spacing_hits_both_endpoints() {
        let d = Domain::logarithmic("lr", 1e-3, 1.0, 10);
        assert_eq!(d.len(), 10);
        assert!((d.values[0] - 1e-3).abs() < 1e-15);
        assert!((d.values[9] - 1.0).abs() < 1e-12);
        // Constant ratio between neighbors.
        let r0 = d.values[1] / d.values[0];
        let r7 = d.values[8] / d.values[7];
        assert!((r0 - r7).abs() < 1e-12);
    }

    #[test]
    fn singleton_domains_are_rejected() {
        let err = SearchSpace::new(vec![Domain {
            name: "x".into(),
            scale: Scale::Linear,
            values: vec![1.0],
        }]);
        assert!(err.is_err());
    }

    #[test]
    fn sampling_stays_in_bounds_and_decodes() {
        let space = SearchSpace::new(vec![
            Domain::linear("a", 0.0, 1.0, 3),
            Domain::logarithmic("b", 0.1, 10.0, 5),
        ])
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let h = space.sample_uniform(&mut rng);
            assert!(space.contains(&h));
            let v = space.decode(&h);
            assert_eq!(v.len(), 2);
            assert!(v.iter().all(|x| x.is_finite()));
        }
    }
}
