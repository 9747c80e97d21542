//! Classifiers, cross-validation, scoring and permutation importance.
//!
//! All functions take a row-major feature matrix and boolean labels
//! (`true` = defective). Randomness always comes from explicit seeds.

mod bayes;
mod cv;
mod folds;
mod forest;
mod importance;
mod score;
mod tree;

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

pub use bayes::GaussianNb;
pub use cv::{cross_validate, CvOutcome};
pub use folds::{stratified_folds, FoldAssignment};
pub use forest::RandomForest;
pub use importance::{
    aggregate_rankings, permutation_importance, ImportanceRanking, ImportanceScore, RankSummary,
};
pub use score::{score, weighted_auc, Confusion, ScoreReport};
pub use tree::DecisionTree;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LearnError {
    #[error("training set is empty")]
    EmptyTraining,
    #[error("expected {expected} features, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("minority class has {minority} rows; need at least 2")]
    TooFewSamples { minority: usize },
    #[error("invalid model specification: {0}")]
    InvalidSpec(&'static str),
    #[error("labels and rows differ in length")]
    LabelMismatch,
    #[error("non-finite feature value")]
    NonFinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModelKind {
    NaiveBayes,
    DecisionTree,
    RandomForest,
}

impl ModelKind {
    pub const ALL: [ModelKind; 3] = [
        ModelKind::NaiveBayes,
        ModelKind::DecisionTree,
        ModelKind::RandomForest,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::NaiveBayes => "NB",
            ModelKind::DecisionTree => "DT",
            ModelKind::RandomForest => "RF",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = LearnError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ModelKind::ALL
            .iter()
            .copied()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or(LearnError::InvalidSpec("unknown model kind"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeParams {
    pub max_depth: Option<usize>,
    pub min_samples_leaf: usize,
}

impl Default for TreeParams {
    fn default() -> Self {
        Self {
            max_depth: None,
            min_samples_leaf: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ForestParams {
    pub n_trees: usize,
    /// `None` means ⌈√p⌉.
    pub features_per_split: Option<usize>,
    pub bootstrap: bool,
}

impl Default for ForestParams {
    fn default() -> Self {
        Self {
            n_trees: 100,
            features_per_split: None,
            bootstrap: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModelSpec {
    pub kind: ModelKind,
    pub tree: TreeParams,
    pub forest: ForestParams,
    pub seed: u64,
}

impl ModelSpec {
    pub fn new(kind: ModelKind, seed: u64) -> Self {
        Self {
            kind,
            tree: TreeParams::default(),
            forest: ForestParams::default(),
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), LearnError> {
        if self.tree.min_samples_leaf < 1 {
            return Err(LearnError::InvalidSpec("min_samples_leaf must be >= 1"));
        }
        if self.forest.n_trees < 1 {
            return Err(LearnError::InvalidSpec("n_trees must be >= 1"));
        }
        if self.forest.features_per_split == Some(0) {
            return Err(LearnError::InvalidSpec("features_per_split must be >= 1"));
        }
        Ok(())
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    NaiveBayes(GaussianNb),
    Tree(DecisionTree),
    Forest(RandomForest),
}

impl Model {
    pub fn fit(spec: &ModelSpec, x: &[Vec<f64>], y: &[bool]) -> Result<Model, LearnError> {
        spec.validate()?;
        check_training(x, y)?;
        Ok(match spec.kind {
            ModelKind::NaiveBayes => Model::NaiveBayes(GaussianNb::fit(x, y)?),
            ModelKind::DecisionTree => Model::Tree(DecisionTree::fit(x, y, &spec.tree)?),
            ModelKind::RandomForest => {
                Model::Forest(RandomForest::fit(x, y, &spec.tree, &spec.forest, spec.seed)?)
            }
        })
    }

    /// Probability of the defective class for every row.
    pub fn predict_proba(&self, x: &[Vec<f64>]) -> Result<Vec<f64>, LearnError> {
        match self {
            Model::NaiveBayes(m) => m.predict_proba(x),
            Model::Tree(m) => m.predict_proba(x),
            Model::Forest(m) => m.predict_proba(x),
        }
    }

    pub fn predict(&self, x: &[Vec<f64>]) -> Result<Vec<bool>, LearnError> {
        Ok(self
            .predict_proba(x)?
            .into_iter()
            .map(|p| p >= 0.5)
            .collect())
    }
}

pub(crate) fn check_training(x: &[Vec<f64>], y: &[bool]) -> Result<usize, LearnError> {
    if x.is_empty() {
        return Err(LearnError::EmptyTraining);
    }
    if x.len() != y.len() {
        return Err(LearnError::LabelMismatch);
    }
    let p = x[0].len();
    check_rows(x, p)?;
    Ok(p)
}

pub(crate) fn check_rows(x: &[Vec<f64>], p: usize) -> Result<(), LearnError> {
    for row in x {
        if row.len() != p {
            return Err(LearnError::ArityMismatch {
                expected: p,
                found: row.len(),
            });
        }
        if row.iter().any(|v| !v.is_finite()) {
            return Err(LearnError::NonFinite);
        }
    }
    Ok(())
}

/// SplitMix64 finalizer, used to derive independent sub-seeds.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed derived from a base seed and a path of indices.
pub fn derive_seed(base: u64, path: &[u64]) -> u64 {
    path.iter()
        .fold(splitmix64(base), |acc, &p| splitmix64(acc ^ splitmix64(p)))
}
