use alloc::vec;
use alloc::vec::Vec;

use super::ranks::{average_ranks, tie_groups};
use super::special::{chi_squared_sf, normal_sf};
use super::StatsError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestResult {
    /// U of the first sample, or H.
    pub statistic: f64,
    pub p_value: f64,
    pub significant: bool,
    /// All pooled values identical; the p-value is 1 by convention.
    pub degenerate: bool,
    /// Fewer observations than the large-sample approximation wants.
    pub small_sample: bool,
}

fn tie_term(pooled: &[f64]) -> f64 {
    tie_groups(pooled)
        .into_iter()
        .map(|t| {
            let t = t as f64;
            t * t * t - t
        })
        .sum()
}

fn check(sample: &[f64]) -> Result<(), StatsError> {
    if sample.is_empty() {
        return Err(StatsError::EmptySample);
    }
    if sample.iter().any(|v| !v.is_finite()) {
        return Err(StatsError::NonFinite);
    }
    Ok(())
}

/// Groups at most this large get the exact permutation p-value.
pub const EXACT_MAX_GROUP: usize = 8;

/// Exact two-sided p of U under random relabeling, from the distribution of
/// the first group's rank sum. Ranks are doubled to stay integral under ties.
fn exact_p(ranks: &[f64], na: usize) -> f64 {
    let doubled: Vec<usize> = ranks.iter().map(|r| libm::round(2.0 * r) as usize).collect();
    let max_sum: usize = doubled.iter().sum();
    // ways[j][s]: subsets of size j with doubled rank sum s.
    let mut ways = vec![vec![0u64; max_sum + 1]; na + 1];
    ways[0][0] = 1;
    for &r in &doubled {
        for j in (1..=na).rev() {
            for s in (r..=max_sum).rev() {
                ways[j][s] += ways[j - 1][s - r];
            }
        }
    }
    let nb = ranks.len() - na;
    // 2U = 2R - na(na + 1); centre at na * nb.
    let offset = (na * (na + 1)) as i64;
    let centre = (na * nb) as i64;
    let observed = (doubled[..na].iter().sum::<usize>() as i64 - offset - centre).abs();
    let (mut extreme, mut total) = (0u64, 0u64);
    for (s, &w) in ways[na].iter().enumerate() {
        total += w;
        if (s as i64 - offset - centre).abs() >= observed {
            extreme += w;
        }
    }
    extreme as f64 / total as f64
}

/// Two-sided Mann-Whitney U test. Exact when both groups have at most
/// [`EXACT_MAX_GROUP`] members, otherwise the normal approximation with tie
/// and continuity corrections.
pub fn mann_whitney(a: &[f64], b: &[f64], alpha: f64) -> Result<TestResult, StatsError> {
    check(a)?;
    check(b)?;
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let ranks = average_ranks(&pooled);
    let rank_sum_a: f64 = ranks[..a.len()].iter().sum();
    let u = rank_sum_a - na * (na + 1.0) / 2.0;
    let small_sample = a.len() < 8 || b.len() < 8;
    if pooled.iter().all(|v| *v == pooled[0]) {
        return Ok(TestResult {
            statistic: u,
            p_value: 1.0,
            significant: false,
            degenerate: true,
            small_sample,
        });
    }
    let p_value = if a.len() <= EXACT_MAX_GROUP && b.len() <= EXACT_MAX_GROUP {
        exact_p(&ranks, a.len())
    } else {
        let n = na + nb;
        let mean = na * nb / 2.0;
        let var = na * nb / 12.0 * ((n + 1.0) - tie_term(&pooled) / (n * (n - 1.0)));
        let z = ((u - mean).abs() - 0.5).max(0.0) / libm::sqrt(var);
        (2.0 * normal_sf(z)).min(1.0)
    };
    Ok(TestResult {
        statistic: u,
        p_value,
        significant: p_value < alpha,
        degenerate: false,
        small_sample,
    })
}

/// Kruskal-Wallis H test with tie correction; p from χ² with k−1 degrees of
/// freedom.
pub fn kruskal_wallis(groups: &[&[f64]], alpha: f64) -> Result<TestResult, StatsError> {
    if groups.len() < 2 {
        return Err(StatsError::TooFew(2));
    }
    for g in groups {
        check(g)?;
    }
    let pooled: Vec<f64> = groups.iter().flat_map(|g| g.iter().copied()).collect();
    let n = pooled.len() as f64;
    let small_sample = pooled.len() < 5;
    if pooled.iter().all(|v| *v == pooled[0]) {
        return Ok(TestResult {
            statistic: 0.0,
            p_value: 1.0,
            significant: false,
            degenerate: true,
            small_sample,
        });
    }
    let ranks = average_ranks(&pooled);
    let mut offset = 0;
    let mut sum = 0.0;
    for g in groups {
        let r: f64 = ranks[offset..offset + g.len()].iter().sum();
        sum += r * r / g.len() as f64;
        offset += g.len();
    }
    let h_raw = 12.0 / (n * (n + 1.0)) * sum - 3.0 * (n + 1.0);
    let correction = 1.0 - tie_term(&pooled) / (n * n * n - n);
    let h = (h_raw / correction).max(0.0);
    let p_value = chi_squared_sf(h, (groups.len() - 1) as f64);
    Ok(TestResult {
        statistic: h,
        p_value,
        significant: p_value < alpha,
        degenerate: false,
        small_sample,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn separated_samples() {
        let r = mann_whitney(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0], 0.05).unwrap();
        assert_eq!(r.statistic, 0.0);
        let r2 = mann_whitney(&[4.0, 5.0, 6.0], &[1.0, 2.0, 3.0], 0.05).unwrap();
        assert_eq!(r2.statistic, 9.0);
        assert_eq!(r.p_value, r2.p_value);
        // Two of the twenty relabelings are as extreme.
        assert_eq!(r.p_value, 0.1);
    }

    #[test]
    fn identical_samples() {
        let a = [1.0, 2.0, 3.0, 4.0];
        let r = mann_whitney(&a, &a, 0.05).unwrap();
        assert_eq!(r.statistic, 8.0);
        assert!(r.p_value > 0.99);
        assert!(!r.significant);
        let c = [2.0; 5];
        let d = mann_whitney(&c, &c, 0.05).unwrap();
        assert!(d.degenerate);
        assert_eq!(d.p_value, 1.0);
    }

    #[test]
    fn kruskal_closed_form() {
        let g = [vec![1.0, 2.0, 3.0], vec![4.0, 5.0, 6.0], vec![7.0, 8.0, 9.0]];
        let refs: Vec<&[f64]> = g.iter().map(Vec::as_slice).collect();
        let r = kruskal_wallis(&refs, 0.05).unwrap();
        assert!((r.statistic - 7.2).abs() < 1e-9);
        assert!((r.p_value - libm::exp(-3.6)).abs() < 1e-12);
        assert!(r.significant);
    }

    #[test]
    fn kruskal_constant() {
        let g = [2.0; 4];
        let r = kruskal_wallis(&[&g, &g, &g], 0.05).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.p_value, 1.0);
        assert!(kruskal_wallis(&[&g], 0.05).is_err());
    }
}
