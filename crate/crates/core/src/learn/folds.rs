use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::LearnError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldAssignment {
    /// Fold index of every row.
    pub fold_of: Vec<usize>,
    /// Number of folds actually used.
    pub k: usize,
    /// Set when the minority class was too small for the requested `k`.
    pub reduced_from: Option<usize>,
}

impl FoldAssignment {
    /// Row indices of (train, test) for fold `f`.
    pub fn split(&self, f: usize) -> (Vec<usize>, Vec<usize>) {
        (0..self.fold_of.len()).partition(|&i| self.fold_of[i] != f)
    }
}

/// Each class is shuffled and dealt round-robin over the folds, with the
/// dealing position carried from the negatives into the positives so fold
/// sizes stay within one of each other.
pub fn stratified_folds(labels: &[bool], k: usize, seed: u64) -> Result<FoldAssignment, LearnError> {
    if k < 2 {
        return Err(LearnError::InvalidSpec("k must be >= 2"));
    }
    let mut neg: Vec<usize> = (0..labels.len()).filter(|&i| !labels[i]).collect();
    let mut pos: Vec<usize> = (0..labels.len()).filter(|&i| labels[i]).collect();
    let minority = neg.len().min(pos.len());
    if minority < 2 {
        return Err(LearnError::TooFewSamples { minority });
    }
    let (k, reduced_from) = if minority < k {
        (minority, Some(k))
    } else {
        (k, None)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    neg.shuffle(&mut rng);
    pos.shuffle(&mut rng);
    let mut fold_of = vec![0; labels.len()];
    for (slot, &i) in neg.iter().chain(pos.iter()).enumerate() {
        fold_of[i] = slot % k;
    }
    Ok(FoldAssignment {
        fold_of,
        k,
        reduced_from,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(a: &FoldAssignment, labels: &[bool]) -> Vec<(usize, usize)> {
        let mut c = vec![(0, 0); a.k];
        for (i, &f) in a.fold_of.iter().enumerate() {
            if labels[i] {
                c[f].1 += 1;
            } else {
                c[f].0 += 1;
            }
        }
        c
    }

    #[test]
    fn divisible_case() {
        let labels: Vec<bool> = (0..100).map(|i| i % 10 == 0).collect();
        let a = stratified_folds(&labels, 10, 1).unwrap();
        assert!(counts(&a, &labels).iter().all(|&c| c == (9, 1)));
    }

    #[test]
    fn uneven_case() {
        let labels: Vec<bool> = (0..95).map(|i| i < 10).collect();
        let a = stratified_folds(&labels, 10, 1).unwrap();
        for (n, p) in counts(&a, &labels) {
            assert_eq!(p, 1);
            assert!(n + p == 9 || n + p == 10);
        }
        assert_eq!(a, stratified_folds(&labels, 10, 1).unwrap());
    }

    #[test]
    fn reduced_k() {
        let labels: Vec<bool> = (0..30).map(|i| i < 3).collect();
        let a = stratified_folds(&labels, 10, 1).unwrap();
        assert_eq!(a.k, 3);
        assert_eq!(a.reduced_from, Some(10));
        let labels: Vec<bool> = (0..30).map(|i| i < 1).collect();
        assert_eq!(
            stratified_folds(&labels, 10, 1),
            Err(LearnError::TooFewSamples { minority: 1 })
        );
    }
}
