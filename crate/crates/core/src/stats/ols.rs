use alloc::vec;
use alloc::vec::Vec;

use super::StatsError;

#[derive(Debug, Clone, PartialEq)]
pub struct OlsFit {
    pub intercept: f64,
    pub coefficients: Vec<f64>,
    pub r_squared: f64,
    /// Numerical rank of the centered design.
    pub rank: usize,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Ordinary least squares with an implicit intercept.
///
/// The centered design is column-normalized and decomposed with one-sided
/// Jacobi SVD; singular values below `σ_max · max(n, p) · ε` are treated as
/// zero, which yields the minimum-norm solution for rank-deficient designs.
pub fn ols_fit(x: &[Vec<f64>], y: &[f64]) -> Result<OlsFit, StatsError> {
    let n = x.len();
    let p = x.first().map_or(0, Vec::len);
    if y.len() != n {
        return Err(StatsError::DimensionMismatch {
            row: 0,
            expected: n,
            found: y.len(),
        });
    }
    if n <= p || n < 2 {
        return Err(StatsError::InsufficientRows { rows: n, cols: p });
    }
    for (i, row) in x.iter().enumerate() {
        if row.len() != p {
            return Err(StatsError::DimensionMismatch {
                row: i,
                expected: p,
                found: row.len(),
            });
        }
        if row.iter().any(|v| !v.is_finite()) {
            return Err(StatsError::NonFinite);
        }
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(StatsError::NonFinite);
    }

    let nf = n as f64;
    let y_mean = y.iter().sum::<f64>() / nf;
    let yc: Vec<f64> = y.iter().map(|v| v - y_mean).collect();
    let ss_tot = dot(&yc, &yc);
    if y.iter().all(|v| *v == y[0]) || ss_tot == 0.0 {
        return Err(StatsError::DegenerateResponse);
    }

    let means: Vec<f64> = (0..p)
        .map(|j| x.iter().map(|r| r[j]).sum::<f64>() / nf)
        .collect();
    // Column-major, centered, unit-norm columns.
    let mut scale = vec![1.0; p];
    let mut a: Vec<Vec<f64>> = (0..p)
        .map(|j| {
            let constant = x.iter().all(|r| r[j] == x[0][j]);
            let mut col: Vec<f64> = if constant {
                vec![0.0; n]
            } else {
                x.iter().map(|r| r[j] - means[j]).collect()
            };
            let norm = libm::sqrt(dot(&col, &col));
            if norm > 0.0 {
                col.iter_mut().for_each(|v| *v /= norm);
                scale[j] = norm;
            } else {
                scale[j] = 0.0;
            }
            col
        })
        .collect();
    let mut v: Vec<Vec<f64>> = (0..p)
        .map(|j| {
            let mut e = vec![0.0; p];
            e[j] = 1.0;
            e
        })
        .collect();

    for _sweep in 0..80 {
        let mut rotated = false;
        for i in 0..p {
            for j in (i + 1)..p {
                let alpha = dot(&a[i], &a[i]);
                let beta = dot(&a[j], &a[j]);
                let gamma = dot(&a[i], &a[j]);
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                if gamma.abs() <= f64::EPSILON * libm::sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let sign = if zeta >= 0.0 { 1.0 } else { -1.0 };
                let t = sign / (zeta.abs() + libm::sqrt(1.0 + zeta * zeta));
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = c * t;
                rotate(&mut a, i, j, c, s);
                rotate(&mut v, i, j, c, s);
            }
        }
        if !rotated {
            break;
        }
    }

    let sigma: Vec<f64> = a.iter().map(|col| libm::sqrt(dot(col, col))).collect();
    let sigma_max = sigma.iter().copied().fold(0.0, f64::max);
    let tol = sigma_max * (n.max(p) as f64) * f64::EPSILON;
    let mut beta_scaled = vec![0.0; p];
    let mut rank = 0;
    for k in 0..p {
        if sigma[k] <= tol || sigma[k] == 0.0 {
            continue;
        }
        rank += 1;
        // u_k = a_k / σ_k, so u_k·y / σ_k = a_k·y / σ_k².
        let w = dot(&a[k], &yc) / (sigma[k] * sigma[k]);
        for (j, b) in beta_scaled.iter_mut().enumerate() {
            *b += v[k][j] * w;
        }
    }
    let coefficients: Vec<f64> = beta_scaled
        .iter()
        .zip(&scale)
        .map(|(b, s)| if *s > 0.0 { b / s } else { 0.0 })
        .collect();
    let intercept = y_mean - dot(&coefficients, &means);

    let ss_res: f64 = x
        .iter()
        .zip(y)
        .map(|(row, yi)| {
            let r = yi - intercept - dot(&coefficients, row);
            r * r
        })
        .sum();
    let r_squared = (1.0 - ss_res / ss_tot).clamp(0.0, 1.0);
    Ok(OlsFit {
        intercept,
        coefficients,
        r_squared,
        rank,
    })
}

fn rotate(cols: &mut [Vec<f64>], i: usize, j: usize, c: f64, s: f64) {
    let (left, right) = cols.split_at_mut(j);
    let (ci, cj) = (&mut left[i], &mut right[0]);
    for (xi, xj) in ci.iter_mut().zip(cj.iter_mut()) {
        let (u, w) = (*xi, *xj);
        *xi = c * u - s * w;
        *xj = s * u + c * w;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_linear() {
        let x: Vec<Vec<f64>> = (0..10).map(|i| vec![i as f64, (i * i) as f64]).collect();
        let y: Vec<f64> = x.iter().map(|r| 3.0 + 2.0 * r[0] - 0.5 * r[1]).collect();
        let fit = ols_fit(&x, &y).unwrap();
        assert!((fit.r_squared - 1.0).abs() < 1e-9);
        assert!((fit.intercept - 3.0).abs() < 1e-9);
        assert!((fit.coefficients[0] - 2.0).abs() < 1e-9);
        assert!((fit.coefficients[1] + 0.5).abs() < 1e-9);
    }

    #[test]
    fn orthogonal_response() {
        let x = vec![vec![1.0], vec![-1.0], vec![1.0], vec![-1.0]];
        let y = vec![1.0, 1.0, -1.0, -1.0];
        let fit = ols_fit(&x, &y).unwrap();
        assert!(fit.r_squared.abs() < 1e-9);
    }

    #[test]
    fn rank_deficient_min_norm() {
        let x: Vec<Vec<f64>> = (0..6).map(|i| vec![i as f64, i as f64]).collect();
        let y: Vec<f64> = (0..6).map(|i| 2.0 * i as f64).collect();
        let fit = ols_fit(&x, &y).unwrap();
        assert_eq!(fit.rank, 1);
        assert!((fit.coefficients[0] - 1.0).abs() < 1e-9);
        assert!((fit.coefficients[1] - 1.0).abs() < 1e-9);
        assert!((fit.r_squared - 1.0).abs() < 1e-9);
    }

    #[test]
    fn constant_response() {
        let x = vec![vec![1.0], vec![2.0], vec![3.0]];
        assert_eq!(
            ols_fit(&x, &[4.0, 4.0, 4.0]),
            Err(StatsError::DegenerateResponse)
        );
    }
}
