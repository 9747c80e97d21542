//! Reference computations used as test oracles. They are deliberately naive
//! and share no code with the library.
#![allow(dead_code)]

/// Gaussian elimination with partial pivoting.
pub fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let tail: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - tail) / a[row][row];
    }
    x
}

/// OLS with intercept through the normal equations. Returns
/// (intercept, coefficients, R²).
pub fn normal_equations_ols(x: &[Vec<f64>], y: &[f64]) -> (f64, Vec<f64>, f64) {
    let p = x[0].len() + 1;
    let design: Vec<Vec<f64>> = x
        .iter()
        .map(|r| std::iter::once(1.0).chain(r.iter().copied()).collect())
        .collect();
    let mut xtx = vec![vec![0.0; p]; p];
    let mut xty = vec![0.0; p];
    for (row, yi) in design.iter().zip(y) {
        for i in 0..p {
            xty[i] += row[i] * yi;
            for j in 0..p {
                xtx[i][j] += row[i] * row[j];
            }
        }
    }
    let beta = solve(xtx, xty);
    let mean = y.iter().sum::<f64>() / y.len() as f64;
    let ss_tot: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
    let ss_res: f64 = design
        .iter()
        .zip(y)
        .map(|(row, yi)| {
            let fit: f64 = row.iter().zip(&beta).map(|(a, b)| a * b).sum();
            (yi - fit).powi(2)
        })
        .sum();
    (beta[0], beta[1..].to_vec(), 1.0 - ss_res / ss_tot)
}

/// VIF of column `j` by regressing it on all other columns.
pub fn brute_vif(x: &[Vec<f64>], j: usize) -> f64 {
    let y: Vec<f64> = x.iter().map(|r| r[j]).collect();
    let others: Vec<Vec<f64>> = x
        .iter()
        .map(|r| {
            r.iter()
                .enumerate()
                .filter(|(k, _)| *k != j)
                .map(|(_, v)| *v)
                .collect()
        })
        .collect();
    let (_, _, r2) = normal_equations_ols(&others, &y);
    1.0 / (1.0 - r2)
}

/// U of `a` by direct pair counting (ties count one half).
pub fn pair_count_u(a: &[f64], b: &[f64]) -> f64 {
    let mut u = 0.0;
    for x in a {
        for y in b {
            if x > y {
                u += 1.0;
            } else if x == y {
                u += 0.5;
            }
        }
    }
    u
}

/// Exact two-sided permutation p-value of the Mann-Whitney U statistic:
/// the share of all relabelings whose U is at least as far from its mean.
pub fn exact_mann_whitney_p(a: &[f64], b: &[f64]) -> f64 {
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let n = pooled.len();
    assert!(n <= 20);
    let mean = (a.len() * b.len()) as f64 / 2.0;
    let observed = (pair_count_u(a, b) - mean).abs();
    let (mut extreme, mut total) = (0u64, 0u64);
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != a.len() {
            continue;
        }
        let (ga, gb): (Vec<f64>, Vec<f64>) = {
            let mut ga = Vec::new();
            let mut gb = Vec::new();
            for (i, v) in pooled.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    ga.push(*v);
                } else {
                    gb.push(*v);
                }
            }
            (ga, gb)
        };
        total += 1;
        if (pair_count_u(&ga, &gb) - mean).abs() >= observed - 1e-12 {
            extreme += 1;
        }
    }
    extreme as f64 / total as f64
}

/// AUC as the share of correctly ordered (positive, negative) pairs.
pub fn brute_auc(scores: &[f64], truth: &[bool]) -> f64 {
    let pos: Vec<f64> = scores.iter().zip(truth).filter(|(_, t)| **t).map(|(s, _)| *s).collect();
    let neg: Vec<f64> = scores.iter().zip(truth).filter(|(_, t)| !**t).map(|(s, _)| *s).collect();
    pair_count_u(&pos, &neg) / (pos.len() * neg.len()) as f64
}

/// Linear-interpolation quantile written out for small hand-checked inputs.
pub fn hand_quantile(values: &[f64], q: f64) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let pos = q * (v.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    v[lo] + (v[hi] - v[lo]) * (pos - lo as f64)
}
