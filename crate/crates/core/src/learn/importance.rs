use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::cv::take;
use super::folds::stratified_folds;
use super::score::score;
use super::{derive_seed, LearnError, Model, ModelSpec};
use crate::stats::{average_ranks, five_number_summary, FiveNumber};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ImportanceScore {
    #[default]
    AucWeighted,
    FMinority,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImportanceRanking {
    pub features: Vec<String>,
    /// Mean score decrease over folds and repeats.
    pub importance: Vec<f64>,
    /// 1 = most important; ties share the average rank.
    pub ranks: Vec<f64>,
    pub k: usize,
}

impl ImportanceRanking {
    /// Ranks by descending importance.
    pub fn from_importance(features: Vec<String>, importance: Vec<f64>, k: usize) -> Self {
        let negated: Vec<f64> = importance.iter().map(|v| -v + 0.0).collect();
        let ranks = average_ranks(&negated);
        Self {
            features,
            importance,
            ranks,
            k,
        }
    }
}

/// Permutation importance over a dedicated stratified k-fold run.
///
/// Within each fold the model is fitted on the training part; then every
/// feature's test column is shuffled `repeats` times and the drop from the
/// unshuffled score is averaged.
#[allow(clippy::too_many_arguments)]
pub fn permutation_importance(
    x: &[Vec<f64>],
    y: &[bool],
    names: &[&str],
    spec: &ModelSpec,
    k: usize,
    repeats: usize,
    seed: u64,
    scoring: ImportanceScore,
) -> Result<ImportanceRanking, LearnError> {
    spec.validate()?;
    let p = super::check_training(x, y)?;
    if names.len() != p {
        return Err(LearnError::ArityMismatch {
            expected: p,
            found: names.len(),
        });
    }
    if repeats == 0 {
        return Err(LearnError::InvalidSpec("repeats must be >= 1"));
    }
    let metric = |probs: &[f64], truth: &[bool]| {
        let r = score(probs, truth);
        match scoring {
            ImportanceScore::AucWeighted => r.auc_weighted,
            ImportanceScore::FMinority => r.f_minority,
        }
    };
    let folds = stratified_folds(y, k, seed)?;
    let mut total = vec![0.0; p];
    for f in 0..folds.k {
        let (train, test) = folds.split(f);
        let (xtr, ytr) = take(x, y, &train);
        let (xte, yte) = take(x, y, &test);
        let model = Model::fit(&spec.with_seed(derive_seed(spec.seed, &[f as u64])), &xtr, &ytr)?;
        let baseline = metric(&model.predict_proba(&xte)?, &yte);
        for (j, acc) in total.iter_mut().enumerate() {
            let column: Vec<f64> = xte.iter().map(|r| r[j]).collect();
            let mut shuffled_x = xte.clone();
            for r in 0..repeats {
                let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(
                    seed,
                    &[f as u64, j as u64, r as u64],
                ));
                let mut col = column.clone();
                col.shuffle(&mut rng);
                for (row, v) in shuffled_x.iter_mut().zip(&col) {
                    row[j] = *v;
                }
                *acc += baseline - metric(&model.predict_proba(&shuffled_x)?, &yte);
            }
        }
    }
    let denom = (folds.k * repeats) as f64;
    let importance = total.into_iter().map(|t| t / denom + 0.0).collect();
    Ok(ImportanceRanking::from_importance(
        names.iter().map(|s| s.to_string()).collect(),
        importance,
        folds.k,
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankSummary {
    pub feature: String,
    pub summary: FiveNumber,
    /// Number of rankings that include the feature.
    pub count: usize,
}

/// Five-number summary of each feature's rank across rankings, in order of
/// first appearance.
pub fn aggregate_rankings(rankings: &[ImportanceRanking]) -> Vec<RankSummary> {
    let mut order: Vec<&str> = Vec::new();
    for r in rankings {
        for f in &r.features {
            if !order.contains(&f.as_str()) {
                order.push(f);
            }
        }
    }
    order
        .into_iter()
        .map(|feature| {
            let ranks: Vec<f64> = rankings
                .iter()
                .filter_map(|r| {
                    r.features
                        .iter()
                        .position(|f| f == feature)
                        .map(|i| r.ranks[i])
                })
                .collect();
            RankSummary {
                feature: feature.to_string(),
                summary: five_number_summary(&ranks),
                count: ranks.len(),
            }
        })
        .collect()
}
