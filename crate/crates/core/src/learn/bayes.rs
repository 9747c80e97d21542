use alloc::vec::Vec;

use super::{check_rows, LearnError};

#[derive(Debug, Clone, PartialEq)]
struct ClassStats {
    log_prior: f64,
    mean: Vec<f64>,
    var: Vec<f64>,
}

/// Gaussian naive Bayes with population variances.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianNb {
    n_features: usize,
    /// Index 0 = not defective, 1 = defective; `None` if absent in training.
    classes: [Option<ClassStats>; 2],
}

impl GaussianNb {
    pub fn fit(x: &[Vec<f64>], y: &[bool]) -> Result<Self, LearnError> {
        let p = super::check_training(x, y)?;
        let n = x.len() as f64;
        let overall_max_var = (0..p)
            .map(|j| population_var(x.iter().map(|r| r[j])))
            .fold(0.0, f64::max);
        let floor = 1e-9 * if overall_max_var > 0.0 { overall_max_var } else { 1.0 };
        let stats = |label: bool| -> Option<ClassStats> {
            let rows: Vec<&Vec<f64>> = x.iter().zip(y).filter(|(_, l)| **l == label).map(|(r, _)| r).collect();
            if rows.is_empty() {
                return None;
            }
            let m = rows.len() as f64;
            let mean: Vec<f64> = (0..p).map(|j| rows.iter().map(|r| r[j]).sum::<f64>() / m).collect();
            let var = (0..p)
                .map(|j| population_var(rows.iter().map(|r| r[j])).max(floor))
                .collect();
            Some(ClassStats {
                log_prior: libm::log(m / n),
                mean,
                var,
            })
        };
        Ok(Self {
            n_features: p,
            classes: [stats(false), stats(true)],
        })
    }

    /// Training data held a single class; predictions are constant.
    pub fn single_class(&self) -> bool {
        self.classes.iter().any(Option::is_none)
    }

    pub fn predict_proba(&self, x: &[Vec<f64>]) -> Result<Vec<f64>, LearnError> {
        check_rows(x, self.n_features)?;
        Ok(x.iter().map(|row| self.proba_one(row)).collect())
    }

    fn proba_one(&self, row: &[f64]) -> f64 {
        match (&self.classes[0], &self.classes[1]) {
            (Some(neg), Some(pos)) => {
                let l0 = log_joint(neg, row);
                let l1 = log_joint(pos, row);
                let m = l0.max(l1);
                let lse = m + libm::log(libm::exp(l0 - m) + libm::exp(l1 - m));
                libm::exp(l1 - lse)
            }
            (None, Some(_)) => 1.0,
            _ => 0.0,
        }
    }
}

fn log_joint(c: &ClassStats, row: &[f64]) -> f64 {
    let mut l = c.log_prior;
    for ((v, mu), var) in row.iter().zip(&c.mean).zip(&c.var) {
        let d = v - mu;
        l -= 0.5 * libm::log(2.0 * core::f64::consts::PI * var) + d * d / (2.0 * var);
    }
    l
}

fn population_var(values: impl Iterator<Item = f64> + Clone) -> f64 {
    let (n, sum) = values.clone().fold((0usize, 0.0), |(n, s), v| (n + 1, s + v));
    if n == 0 {
        return 0.0;
    }
    let mean = sum / n as f64;
    values.map(|v| (v - mean) * (v - mean)).sum::<f64>() / n as f64
}
