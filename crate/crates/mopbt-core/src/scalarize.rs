use alloc::vec::Vec;

use rand::Rng;

use crate::{CoreError, ObjectiveVector, Result};

/// Default ParEGO mixing coefficient.
pub const DEFAULT_PAREGO_RHO: f64 = 0.05;

/// The scalarizer family used to collapse objective vectors to one value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScalarizerKind {
    WeightedSum,
    Chebyshev,
    ParEgo { rho: f64 },
    Golovin,
}

impl ScalarizerKind {
    /// Applies this scalarizer to `f` under weights `w`.
    pub fn apply(&self, f: &ObjectiveVector, w: &[f64]) -> Result<f64> {
        match *self {
            ScalarizerKind::WeightedSum => weighted_sum(f, w),
            ScalarizerKind::Chebyshev => chebyshev(f, w),
            ScalarizerKind::ParEgo { rho } => parego(f, w, rho),
            ScalarizerKind::Golovin => golovin(f, w, f.len() as u32),
        }
    }
}

fn check_weights(f: &ObjectiveVector, w: &[f64]) -> Result<()> {
    if w.len() != f.len() {
        return Err(CoreError::LengthMismatch { expected: f.len(), actual: w.len() });
    }
    if w.iter().any(|v| !v.is_finite()) {
        return Err(CoreError::NonFiniteValue);
    }
    Ok(())
}

/// Weighted sum: `Σ_i w_i f_i`.
pub fn weighted_sum(f: &ObjectiveVector, w: &[f64]) -> Result<f64> {
    check_weights(f, w)?;
    Ok(f.values().iter().zip(w).map(|(fi, wi)| fi * wi).sum())
}

/// Chebyshev value for maximization: `min_i w_i f_i`.
///
/// Deliberately the `min` form — the whole crate maximizes, and this is the
/// aggregation the rest of the system is calibrated against.
pub fn chebyshev(f: &ObjectiveVector, w: &[f64]) -> Result<f64> {
    check_weights(f, w)?;
    Ok(f.values()
        .iter()
        .zip(w)
        .map(|(fi, wi)| fi * wi)
        .fold(f64::INFINITY, f64::min))
}

/// ParEGO value: `ρ·weighted_sum + chebyshev`.
pub fn parego(f: &ObjectiveVector, w: &[f64], rho: f64) -> Result<f64> {
    Ok(rho * weighted_sum(f, w)? + chebyshev(f, w)?)
}

/// Golovin value: `(min_i max(0, f_i / w_i))^k`.
///
/// Every weight must be strictly nonzero; the caller is expected to sample
/// strictly positive weights (see [`sample_unit_weight`]).
pub fn golovin(f: &ObjectiveVector, w: &[f64], k: u32) -> Result<f64> {
    check_weights(f, w)?;
    if w.iter().any(|&wi| wi == 0.0) {
        return Err(CoreError::ZeroWeight);
    }
    let base = f
        .values()
        .iter()
        .zip(w)
        .map(|(fi, wi)| (fi / wi).max(0.0))
        .fold(f64::INFINITY, f64::min);
    Ok(libm::pow(base, f64::from(k)))
}

/// Samples a nonnegative weight vector uniformly from the positive orthant
/// of the unit sphere: each coordinate is `|N(0,1)|`, then the vector is
/// L2-normalized. The measure-zero all-zeros draw is rejected and retried.
pub fn sample_unit_weight<R: Rng + ?Sized>(rng: &mut R, k: usize) -> Result<Vec<f64>> {
    if k == 0 {
        return Err(CoreError::EmptyInput);
    }
    loop {
        let mut w: Vec<f64> = (0..k).map(|_| abs_standard_normal(rng)).collect();
        let norm = libm::sqrt(w.iter().map(|v| v * v).sum());
        if norm > 0.0 {
            for v in &mut w {
                *v /= norm;
            }
            return Ok(w);
        }
    }
}

/// One draw from |N(0,1)| via the Box-Muller transform.
fn abs_standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    // 1 - U maps [0,1) to (0,1], keeping the log argument positive.
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random();
    let z = libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(2.0 * core::f64::consts::PI * u2);
    z.abs()
}

/// Best scalarized value of `f` over a fixed weight set.
///
/// The weight set is sampled once per run and shared by every evaluation,
/// so repeated calls with the same `f` are comparable.
pub fn max_scalarization(
    f: &ObjectiveVector,
    weights: &[Vec<f64>],
    kind: ScalarizerKind,
) -> Result<f64> {
    if weights.is_empty() {
        return Err(CoreError::EmptyInput);
    }
    let mut best = f64::NEG_INFINITY;
    for w in weights {
        best = best.max(kind.apply(f, w)?);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ov(values: &[f64]) -> ObjectiveVector {
        ObjectiveVector::new(values.to_vec()).unwrap()
    }

    #[test]
    fn weighted_sum_golden_values() {
        assert_eq!(weighted_sum(&ov(&[0.3, 0.7]), &[1.0, 0.0]).unwrap(), 0.3);
        assert_eq!(weighted_sum(&ov(&[1.0, 1.0]), &[0.5, 0.5]).unwrap(), 1.0);
        let v = weighted_sum(&ov(&[0.2, 0.4]), &[0.6, 0.8]).unwrap();
        assert!((v - 0.44).abs() < 1e-12);
    }

    #[test]
    fn chebyshev_golden_values() {
        assert_eq!(chebyshev(&ov(&[0.3, 0.7]), &[1.0, 0.0]).unwrap(), 0.0);
        assert_eq!(chebyshev(&ov(&[0.5, 0.5]), &[1.0, 1.0]).unwrap(), 0.5);
        let v = chebyshev(&ov(&[0.2, 0.9]), &[0.8, 0.6]).unwrap();
        assert!((v - 0.16).abs() < 1e-12);
    }

    #[test]
    fn parego_golden_values() {
        let v = parego(&ov(&[0.3, 0.7]), &[1.0, 0.0], 0.05).unwrap();
        assert!((v - 0.015).abs() < 1e-12);
        let v = parego(&ov(&[0.5, 0.5]), &[1.0, 1.0], 0.05).unwrap();
        assert!((v - 0.55).abs() < 1e-12);
        // Degenerate mixing coefficient reduces to Chebyshev.
        let f = ov(&[0.2, 0.9]);
        assert_eq!(
            parego(&f, &[0.8, 0.6], 0.0).unwrap(),
            chebyshev(&f, &[0.8, 0.6]).unwrap()
        );
    }

    #[test]
    fn golovin_golden_values() {
        let isq = 1.0 / libm::sqrt(2.0);
        let v = golovin(&ov(&[0.5, 0.5]), &[isq, isq], 2).unwrap();
        assert!((v - 0.5).abs() < 1e-12);
        assert_eq!(golovin(&ov(&[1.0, 1.0]), &[1.0, 1.0], 2).unwrap(), 1.0);
        // Any negative coordinate clamps the min to zero.
        assert_eq!(golovin(&ov(&[-0.1, 100.0]), &[0.5, 0.5], 2).unwrap(), 0.0);
    }

    #[test]
    fn golovin_rejects_zero_weights() {
        assert_eq!(
            golovin(&ov(&[1.0, 1.0]), &[1.0, 0.0], 2),
            Err(CoreError::ZeroWeight)
        );
    }

    #[test]
    fn weight_length_must_match() {
        assert_eq!(
            weighted_sum(&ov(&[1.0, 2.0]), &[1.0]),
            Err(CoreError::LengthMismatch { expected: 2, actual: 1 })
        );
    }

    #[test]
    fn sampled_weights_are_unit_norm_and_nonnegative() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for k in 1..=4 {
            for _ in 0..200 {
                let w = sample_unit_weight(&mut rng, k).unwrap();
                assert_eq!(w.len(), k);
                assert!(w.iter().all(|&v| v >= 0.0));
                let norm: f64 = w.iter().map(|v| v * v).sum::<f64>();
                assert!((norm - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn single_coordinate_weight_is_exactly_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        assert_eq!(sample_unit_weight(&mut rng, 1).unwrap(), alloc::vec![1.0]);
    }

    #[test]
    fn max_scalarization_with_one_weight_equals_plain_scalarization() {
        let f = ov(&[0.2, 0.9]);
        let w = alloc::vec![0.8, 0.6];
        assert_eq!(
            max_scalarization(&f, &[w.clone()], ScalarizerKind::Chebyshev).unwrap(),
            chebyshev(&f, &w).unwrap()
        );
    }

    #[test]
    fn golovin_max_scalarization_of_ones_lies_in_the_unit_to_two_band() {
        // For f=(1,1) and unit weights, each term is (1/max_i w_i)^2, which
        // lives in [1, 2]; the best weight's value is reproduced exactly by
        // an explicit scan.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let ws: Vec<Vec<f64>> = (0..100)
            .map(|_| sample_unit_weight(&mut rng, 2).unwrap())
            .collect();
        let f = ov(&[1.0, 1.0]);
        let v = max_scalarization(&f, &ws, ScalarizerKind::Golovin).unwrap();
        assert!(v >= 1.0 - 1e-12 && v <= 2.0 + 1e-12);
        let oracle = ws
            .iter()
            .map(|w| {
                let base = (1.0 / w[0]).min(1.0 / w[1]);
                base * base
            })
            .fold(f64::NEG_INFINITY, f64::max);
        assert!((v - oracle).abs() < 1e-12);
    }

    #[test]
    fn empty_weight_set_is_an_error() {
        assert_eq!(
            max_scalarization(&ov(&[1.0]), &[], ScalarizerKind::WeightedSum),
            Err(CoreError::EmptyInput)
        );
    }
}
