//! Summary statistics and the one-sided Wilcoxon rank-sum (Mann–Whitney U)
//! test used to compare algorithms across seeds.

use crate::{Error, Result};

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation (n − 1 denominator); 0 for fewer than two
/// samples so single-seed summaries print as "x ± 0".
pub fn sample_std(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    let var = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64;
    var.sqrt()
}

/// Outcome of the one-sided rank-sum test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankSumResult {
    /// U = #{(a, b) : a > b} + ½·#{a = b}.
    pub u_statistic: f64,
    /// P(U* ≥ U) under the null that both samples share a distribution.
    pub p_value: f64,
    /// True when the exact permutation distribution was used (no ties,
    /// small samples); false for the tie-corrected normal approximation.
    pub exact: bool,
}

/// Tests H1: values in `a` tend to be larger than values in `b`.
///
/// Exact for tie-free samples with |a|·|b| ≤ 400 (the regime every test in
/// this crate uses); otherwise a normal approximation with tie correction
/// and continuity correction.
pub fn rank_sum_greater(a: &[f64], b: &[f64]) -> Result<RankSumResult> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Runtime("rank-sum test needs two non-empty samples".into()));
    }
    if a.iter().chain(b).any(|v| !v.is_finite()) {
        return Err(Error::Runtime("rank-sum test needs finite samples".into()));
    }
    let (n, m) = (a.len(), b.len());
    let mut u: f64 = 0.0;
    let mut has_ties = false;
    for &x in a {
        for &y in b {
            if x > y {
                u += 1.0;
            } else if x == y {
                u += 0.5;
                has_ties = true;
            }
        }
    }
    // Ties within one sample also invalidate the exact distribution.
    has_ties = has_ties || contains_duplicates(a) || contains_duplicates(b);

    if !has_ties && n * m <= 400 {
        let counts = u_distribution(n, m);
        let total: f64 = counts.iter().sum();
        let threshold = u.round() as usize;
        let tail: f64 = counts[threshold..].iter().sum();
        return Ok(RankSumResult { u_statistic: u, p_value: tail / total, exact: true });
    }

    let nm = (n * m) as f64;
    let big_n = (n + m) as f64;
    let tie_term: f64 = tie_groups(a, b)
        .into_iter()
        .map(|t| {
            let t = t as f64;
            t * t * t - t
        })
        .sum();
    let variance = nm / 12.0 * (big_n + 1.0 - tie_term / (big_n * (big_n - 1.0)));
    if variance <= 0.0 {
        // All pooled values identical: U is exactly nm/2 and the one-sided
        // p-value is ½ by symmetry.
        return Ok(RankSumResult { u_statistic: u, p_value: 0.5, exact: false });
    }
    let z = (u - nm / 2.0 - 0.5) / variance.sqrt();
    let p = 0.5 * (1.0 - libm::erf(z / core::f64::consts::SQRT_2));
    Ok(RankSumResult { u_statistic: u, p_value: p, exact: false })
}

fn contains_duplicates(xs: &[f64]) -> bool {
    let mut sorted = xs.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.windows(2).any(|w| w[0] == w[1])
}

/// Sizes of tied groups in the pooled sample (groups of size 1 contribute
/// nothing to the correction but are included for simplicity).
fn tie_groups(a: &[f64], b: &[f64]) -> Vec<usize> {
    let mut pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    pooled.sort_by(f64::total_cmp);
    let mut groups = Vec::new();
    let mut run = 1;
    for i in 1..pooled.len() {
        if pooled[i] == pooled[i - 1] {
            run += 1;
        } else {
            groups.push(run);
            run = 1;
        }
    }
    groups.push(run);
    groups
}

/// Number of label arrangements with each U value, for samples of size `n`
/// and `m`: count(u; n, m) = count(u − m; n − 1, m) + count(u; n, m − 1).
fn u_distribution(n: usize, m: usize) -> Vec<f64> {
    let max_u = n * m;
    let mut prev_row: Vec<Vec<f64>> = Vec::new(); // indexed by j, for i − 1
    for i in 0..=n {
        let mut row: Vec<Vec<f64>> = Vec::with_capacity(m + 1);
        for j in 0..=m {
            let mut counts = vec![0.0; max_u + 1];
            if i == 0 && j == 0 {
                counts[0] = 1.0;
            } else {
                for u in 0..=max_u {
                    let mut c = 0.0;
                    if i > 0 && u >= j {
                        c += prev_row[j][u - j];
                    }
                    if j > 0 {
                        c += row[j - 1][u];
                    }
                    counts[u] = c;
                }
            }
            row.push(counts);
        }
        prev_row = row;
    }
    prev_row.pop().expect("distribution table is non-empty")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_and_std_golden_values() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(mean(&xs), 2.5);
        assert!((sample_std(&xs) - (5.0f64 / 3.0).sqrt()).abs() < 1e-12);
        assert_eq!(sample_std(&[7.0]), 0.0);
        assert!(mean(&[]).is_nan());
    }

    #[test]
    fn u_distribution_sums_to_the_binomial_coefficient() {
        // C(6, 3) = 20 arrangements for n = m = 3.
        let counts = u_distribution(3, 3);
        assert_eq!(counts.len(), 10);
        assert_eq!(counts.iter().sum::<f64>(), 20.0);
        // The distribution is symmetric around nm/2.
        for u in 0..counts.len() {
            assert_eq!(counts[u], counts[counts.len() - 1 - u]);
        }
    }

    #[test]
    fn complete_separation_matches_hand_computed_p_values() {
        // n = m = 2, a wholly above b: U = 4, p = 1/C(4,2) = 1/6.
        let r = rank_sum_greater(&[3.0, 4.0], &[1.0, 2.0]).unwrap();
        assert!(r.exact);
        assert_eq!(r.u_statistic, 4.0);
        assert!((r.p_value - 1.0 / 6.0).abs() < 1e-12);

        // n = m = 3 separation: p = 1/C(6,3) = 0.05 exactly.
        let r = rank_sum_greater(&[4.0, 5.0, 6.0], &[1.0, 2.0, 3.0]).unwrap();
        assert!((r.p_value - 0.05).abs() < 1e-12);

        // The reversed direction is maximally insignificant.
        let r = rank_sum_greater(&[1.0, 2.0], &[3.0, 4.0]).unwrap();
        assert_eq!(r.u_statistic, 0.0);
        assert_eq!(r.p_value, 1.0);
    }

    #[test]
    fn ten_by_ten_separation_is_decisive() {
        let a: Vec<f64> = (0..10).map(|i| 100.0 + i as f64).collect();
        let b: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let r = rank_sum_greater(&a, &b).unwrap();
        assert!(r.exact);
        assert_eq!(r.u_statistic, 100.0);
        // 1 / C(20, 10) = 1/184756.
        assert!((r.p_value - 1.0 / 184_756.0).abs() < 1e-15);
    }

    #[test]
    fn interleaved_samples_are_not_significant() {
        let a = [1.0, 3.0, 5.0, 7.0];
        let b = [2.0, 4.0, 6.0, 8.0];
        let r = rank_sum_greater(&a, &b).unwrap();
        assert!(r.exact);
        assert!(r.p_value > 0.5, "p = {}", r.p_value);
    }

    #[test]
    fn ties_fall_back_to_the_normal_approximation() {
        let a = [1.0, 2.0, 2.0, 3.0];
        let b = [1.0, 2.0, 3.0, 4.0];
        let r = rank_sum_greater(&a, &b).unwrap();
        assert!(!r.exact);
        assert!(r.p_value > 0.5 && r.p_value <= 1.0, "p = {}", r.p_value);

        let identical = rank_sum_greater(&[2.0, 2.0], &[2.0, 2.0]).unwrap();
        assert_eq!(identical.p_value, 0.5);
    }

    #[test]
    fn exact_tail_includes_the_observed_statistic() {
        // n = m = 2, a = [2, 4], b = [1, 3]: pairs (2>1), (4>1), (4>3) → U = 3.
        // Counts for U ≥ 3 are 1 (U=3) + 1 (U=4) → p = 2/6.
        let r = rank_sum_greater(&[2.0, 4.0], &[1.0, 3.0]).unwrap();
        assert_eq!(r.u_statistic, 3.0);
        assert!((r.p_value - 2.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn invalid_inputs_are_rejected() {
        assert!(rank_sum_greater(&[], &[1.0]).is_err());
        assert!(rank_sum_greater(&[1.0], &[f64::NAN]).is_err());
    }
}
