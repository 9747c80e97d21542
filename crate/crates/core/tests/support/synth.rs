//! Seeded synthetic datasets for classifier, importance and trend checks.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

pub type Xy = (Vec<Vec<f64>>, Vec<bool>);

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Two unit-variance Gaussian clusters centred at -3 and +3 in every
/// coordinate.
pub fn gaussian_blobs(n: usize, dims: usize, seed: u64) -> Xy {
    let mut r = rng(seed);
    let unit = Normal::new(0.0, 1.0).unwrap();
    let mut x = Vec::with_capacity(n);
    let mut y = Vec::with_capacity(n);
    for i in 0..n {
        let label = i % 2 == 1;
        let centre = if label { 3.0 } else { -3.0 };
        x.push((0..dims).map(|_| centre + unit.sample(&mut r)).collect());
        y.push(label);
    }
    (x, y)
}

/// Four point masses with XOR labels, each repeated `reps` times.
pub fn xor(reps: usize) -> Xy {
    let mut x = Vec::new();
    let mut y = Vec::new();
    for _ in 0..reps {
        for (a, b) in [(0.0, 0.0), (0.0, 1.0), (1.0, 0.0), (1.0, 1.0)] {
            x.push(vec![a, b]);
            y.push((a == 1.0) != (b == 1.0));
        }
    }
    (x, y)
}

/// LOC-like first column with label `LOC > 100`; two noise columns.
pub fn loc_threshold(n: usize, seed: u64) -> Xy {
    let mut r = rng(seed);
    let mut x = Vec::with_capacity(n);
    let mut y = Vec::with_capacity(n);
    for _ in 0..n {
        let loc = r.random_range(1..=400) as f64;
        x.push(vec![loc, r.random_range(0..20) as f64, r.random::<f64>()]);
        y.push(loc > 100.0);
    }
    (x, y)
}

/// Informative data whose labels were then shuffled away from the rows.
pub fn shuffled_labels(n: usize, seed: u64) -> Xy {
    let (x, mut y) = gaussian_blobs(n, 3, seed ^ 0xA5A5);
    y.shuffle(&mut rng(seed));
    (x, y)
}

/// Column 1 alone decides the label; columns 0, 2 and 3 are noise.
pub fn planted_signal(n: usize, seed: u64) -> Xy {
    let mut r = rng(seed);
    let mut x = Vec::with_capacity(n);
    let mut y = Vec::with_capacity(n);
    for _ in 0..n {
        let row: Vec<f64> = (0..4).map(|_| r.random::<f64>()).collect();
        y.push(row[1] > 0.6);
        x.push(row);
    }
    (x, y)
}

/// Feature names of the synthetic metric tables, in canonical order.
pub const METRICS: [&str; 12] = [
    "LOC", "WMC", "DIT", "NOC", "CBO", "RFC", "LCOM5", "NPA", "NPM", "NLE", "CBOI", "CD",
];

/// One synthetic project of metric vectors. Defects follow an interaction
/// of coupling and inheritance depth (an XOR), gated by cohesion, with 5%
/// label noise. Size carries no signal.
pub fn benchmark_project(n: usize, seed: u64) -> Xy {
    let mut r = rng(seed);
    let log_loc = Normal::new(4.0, 0.7).unwrap();
    let mut x = Vec::with_capacity(n);
    let mut y = Vec::with_capacity(n);
    for _ in 0..n {
        let loc = (log_loc.sample(&mut r) as f64).exp().round().max(1.0);
        let wmc = (loc / 8.0).round() + r.random_range(0..5) as f64;
        let dit = r.random_range(0..=4) as f64;
        let noc = r.random_range(0..=3) as f64;
        let cbo = r.random_range(0..=14) as f64;
        let npm = r.random_range(0..=20) as f64;
        let rfc = wmc + npm + r.random_range(0..10) as f64;
        let lcom5 = r.random_range(1..=5) as f64;
        let npa = r.random_range(0..=5) as f64;
        let nle = r.random_range(0..=5) as f64;
        let cboi = r.random_range(0..=8) as f64;
        let cd = (r.random::<f64>() * 0.6 * 1e6).round() / 1e6;
        let mut label = ((cbo > 6.0) != (dit >= 2.0)) && lcom5 <= 3.0;
        if r.random::<f64>() < 0.05 {
            label = !label;
        }
        x.push(vec![loc, wmc, dit, noc, cbo, rfc, lcom5, npa, npm, nle, cboi, cd]);
        y.push(label);
    }
    (x, y)
}

/// Columns of `x` named in `names`, taken from the canonical order.
pub fn project_columns(x: &[Vec<f64>], names: &[&str]) -> Vec<Vec<f64>> {
    let idx: Vec<usize> = names
        .iter()
        .map(|n| METRICS.iter().position(|m| m == n).unwrap())
        .collect();
    x.iter()
        .map(|r| idx.iter().map(|&j| r[j]).collect())
        .collect()
}
