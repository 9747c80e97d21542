use alloc::vec::Vec;

use crate::stats::average_ranks;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Confusion {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    pub fn_: usize,
}

impl Confusion {
    pub fn total(&self) -> usize {
        self.tp + self.fp + self.tn + self.fn_
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoreReport {
    pub precision: f64,
    pub recall: f64,
    pub f_minority: f64,
    pub auc_weighted: f64,
    pub confusion: Confusion,
    /// Truth had no defective rows (recall reported as 0).
    pub no_positive_truth: bool,
    /// Truth held one class only (AUC reported as 0.5).
    pub single_class_truth: bool,
}

/// Rank-statistic AUC with tied scores counting one half. `None` when
/// either class is missing.
fn auc(scores: &[f64], positive: &[bool]) -> Option<f64> {
    let n1 = positive.iter().filter(|p| **p).count();
    let n0 = positive.len() - n1;
    if n1 == 0 || n0 == 0 {
        return None;
    }
    let ranks = average_ranks(scores);
    let rank_sum: f64 = ranks
        .iter()
        .zip(positive)
        .filter(|(_, p)| **p)
        .map(|(r, _)| r)
        .sum();
    let (n1, n0) = (n1 as f64, n0 as f64);
    Some((rank_sum - n1 * (n1 + 1.0) / 2.0) / (n1 * n0))
}

/// Support-weighted mean of the per-class one-vs-rest AUCs.
pub fn weighted_auc(probs: &[f64], truth: &[bool]) -> Option<f64> {
    let auc_def = auc(probs, truth)?;
    // Ranking by -p is ranking by the clean-class probability 1 - p.
    let neg_scores: Vec<f64> = probs.iter().map(|p| -p).collect();
    let clean: Vec<bool> = truth.iter().map(|t| !t).collect();
    let auc_clean = auc(&neg_scores, &clean)?;
    let n = truth.len() as f64;
    let n1 = truth.iter().filter(|t| **t).count() as f64;
    Some((n1 * auc_def + (n - n1) * auc_clean) / n)
}

pub fn score(probs: &[f64], truth: &[bool]) -> ScoreReport {
    assert_eq!(probs.len(), truth.len(), "probabilities and truth differ in length");
    let mut c = Confusion::default();
    for (p, t) in probs.iter().zip(truth) {
        match (*p >= 0.5, *t) {
            (true, true) => c.tp += 1,
            (true, false) => c.fp += 1,
            (false, false) => c.tn += 1,
            (false, true) => c.fn_ += 1,
        }
    }
    let ratio = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
    let precision = ratio(c.tp, c.tp + c.fp);
    let recall = ratio(c.tp, c.tp + c.fn_);
    let f_minority = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    let auc = weighted_auc(probs, truth);
    ScoreReport {
        precision,
        recall,
        f_minority,
        auc_weighted: auc.unwrap_or(0.5),
        confusion: c,
        no_positive_truth: c.tp + c.fn_ == 0,
        single_class_truth: auc.is_none(),
    }
}
