use alloc::vec::Vec;

use super::folds::{stratified_folds, FoldAssignment};
use super::score::{score, ScoreReport};
use super::{derive_seed, LearnError, Model, ModelSpec};

#[derive(Debug, Clone, PartialEq)]
pub struct CvOutcome {
    /// One report per fold, in fold order.
    pub reports: Vec<ScoreReport>,
    pub folds: FoldAssignment,
}

pub(crate) fn take(x: &[Vec<f64>], y: &[bool], idx: &[usize]) -> (Vec<Vec<f64>>, Vec<bool>) {
    (
        idx.iter().map(|&i| x[i].clone()).collect(),
        idx.iter().map(|&i| y[i]).collect(),
    )
}

/// Stratified k-fold cross-validation. Folds come from `seed`; the model of
/// fold `f` is fitted with a seed derived from `spec.seed` and `f`.
pub fn cross_validate(
    x: &[Vec<f64>],
    y: &[bool],
    spec: &ModelSpec,
    k: usize,
    seed: u64,
) -> Result<CvOutcome, LearnError> {
    spec.validate()?;
    super::check_training(x, y)?;
    let folds = stratified_folds(y, k, seed)?;
    let reports = (0..folds.k)
        .map(|f| {
            let (train, test) = folds.split(f);
            let (xtr, ytr) = take(x, y, &train);
            let (xte, yte) = take(x, y, &test);
            let fold_spec = spec.with_seed(derive_seed(spec.seed, &[f as u64]));
            let model = Model::fit(&fold_spec, &xtr, &ytr)?;
            Ok(score(&model.predict_proba(&xte)?, &yte))
        })
        .collect::<Result<Vec<_>, LearnError>>()?;
    Ok(CvOutcome { reports, folds })
}
