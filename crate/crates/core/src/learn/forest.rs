use alloc::vec::Vec;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::tree::{grow, DecisionTree};
use super::{check_rows, ForestParams, LearnError, TreeParams};

#[derive(Debug, Clone, PartialEq)]
pub struct RandomForest {
    n_features: usize,
    trees: Vec<DecisionTree>,
}

impl RandomForest {
    /// Tree `t` draws from ChaCha8 seeded with `seed` on stream `t`.
    pub fn fit(
        x: &[Vec<f64>],
        y: &[bool],
        tree: &TreeParams,
        forest: &ForestParams,
        seed: u64,
    ) -> Result<Self, LearnError> {
        let p = super::check_training(x, y)?;
        if forest.n_trees == 0 {
            return Err(LearnError::InvalidSpec("n_trees must be >= 1"));
        }
        let m = forest
            .features_per_split
            .unwrap_or_else(|| libm::ceil(libm::sqrt(p as f64)) as usize)
            .clamp(1, p.max(1));
        let n = x.len();
        let trees = (0..forest.n_trees)
            .map(|t| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(t as u64);
                let rows: Vec<usize> = if forest.bootstrap {
                    (0..n).map(|_| rng.random_range(0..n)).collect()
                } else {
                    (0..n).collect()
                };
                grow(x, y, rows, tree, p, || {
                    if m >= p {
                        (0..p).collect()
                    } else {
                        let mut f = index::sample(&mut rng, p, m).into_vec();
                        f.sort_unstable();
                        f
                    }
                })
            })
            .collect();
        Ok(Self {
            n_features: p,
            trees,
        })
    }

    pub fn from_trees(trees: Vec<DecisionTree>, n_features: usize) -> Self {
        Self { n_features, trees }
    }

    pub fn trees(&self) -> &[DecisionTree] {
        &self.trees
    }

    /// Mean of the trees' probabilities.
    pub fn predict_proba(&self, x: &[Vec<f64>]) -> Result<Vec<f64>, LearnError> {
        check_rows(x, self.n_features)?;
        let mut sum = alloc::vec![0.0; x.len()];
        for t in &self.trees {
            for (s, p) in sum.iter_mut().zip(t.predict_proba(x)?) {
                *s += p;
            }
        }
        let k = self.trees.len() as f64;
        Ok(sum.into_iter().map(|s| s / k).collect())
    }
}
