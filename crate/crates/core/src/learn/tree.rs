use alloc::vec;
use alloc::vec::Vec;

use super::{check_rows, LearnError, TreeParams};

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Leaf { defective: usize, total: usize },
    Split { feature: usize, threshold: f64, left: usize, right: usize },
}

/// Binary CART tree grown on Gini impurity.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionTree {
    n_features: usize,
    nodes: Vec<Node>,
}

impl DecisionTree {
    pub fn fit(x: &[Vec<f64>], y: &[bool], params: &TreeParams) -> Result<Self, LearnError> {
        let p = super::check_training(x, y)?;
        let all: Vec<usize> = (0..p).collect();
        Ok(grow(x, y, (0..x.len()).collect(), params, p, || all.clone()))
    }

    pub fn predict_proba(&self, x: &[Vec<f64>]) -> Result<Vec<f64>, LearnError> {
        check_rows(x, self.n_features)?;
        Ok(x.iter()
            .map(|row| {
                let (d, n) = self.leaf_counts(row);
                (d as f64 + 1.0) / (n as f64 + 2.0)
            })
            .collect())
    }

    /// (defective, total) training counts of the leaf `row` lands in.
    pub fn leaf_counts(&self, row: &[f64]) -> (usize, usize) {
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                Node::Leaf { defective, total } => return (*defective, *total),
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => at = if row[*feature] <= *threshold { *left } else { *right },
            }
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn depth(&self) -> usize {
        fn walk(nodes: &[Node], at: usize) -> usize {
            match &nodes[at] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + walk(nodes, *left).max(walk(nodes, *right)),
            }
        }
        walk(&self.nodes, 0)
    }
}

/// Grows a tree over `rows` (indices into `x`, repeats allowed).
/// `candidates` yields the sorted feature subset tried at each node.
pub(crate) fn grow(
    x: &[Vec<f64>],
    y: &[bool],
    rows: Vec<usize>,
    params: &TreeParams,
    n_features: usize,
    mut candidates: impl FnMut() -> Vec<usize>,
) -> DecisionTree {
    let msl = params.min_samples_leaf.max(1);
    let mut nodes = vec![Node::Leaf {
        defective: 0,
        total: 0,
    }];
    let mut stack = vec![(0usize, rows, 0usize)];
    while let Some((id, rows, depth)) = stack.pop() {
        let n = rows.len();
        let d = rows.iter().filter(|&&i| y[i]).count();
        let splittable =
            d > 0 && d < n && n >= 2 * msl && params.max_depth.map_or(true, |m| depth < m);
        if splittable {
            if let Some((feature, threshold)) = best_split(x, y, &rows, &candidates(), msl) {
                let (l, r): (Vec<usize>, Vec<usize>) =
                    rows.iter().partition(|&&i| x[i][feature] <= threshold);
                let left = nodes.len();
                let right = left + 1;
                nodes.push(Node::Leaf { defective: 0, total: 0 });
                nodes.push(Node::Leaf { defective: 0, total: 0 });
                nodes[id] = Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                };
                stack.push((right, r, depth + 1));
                stack.push((left, l, depth + 1));
                continue;
            }
        }
        nodes[id] = Node::Leaf {
            defective: d,
            total: n,
        };
    }
    DecisionTree { n_features, nodes }
}

fn gini(pos: usize, n: usize) -> f64 {
    let p = pos as f64 / n as f64;
    2.0 * p * (1.0 - p)
}

/// Lowest weighted Gini split; ties keep the earliest feature and threshold.
/// Zero-gain splits are allowed so that patterns like XOR can be learned.
fn best_split(
    x: &[Vec<f64>],
    y: &[bool],
    rows: &[usize],
    features: &[usize],
    msl: usize,
) -> Option<(usize, f64)> {
    let n = rows.len();
    let total_pos = rows.iter().filter(|&&i| y[i]).count();
    let mut best: Option<(usize, f64)> = None;
    let mut best_imp = f64::INFINITY;
    let mut sorted = rows.to_vec();
    for &f in features {
        sorted.sort_by(|&a, &b| x[a][f].total_cmp(&x[b][f]));
        let mut left_pos = 0;
        for i in 0..n - 1 {
            if y[sorted[i]] {
                left_pos += 1;
            }
            let (a, b) = (x[sorted[i]][f], x[sorted[i + 1]][f]);
            if a == b {
                continue;
            }
            let nl = i + 1;
            let nr = n - nl;
            if nl < msl || nr < msl {
                continue;
            }
            let imp = (nl as f64 * gini(left_pos, nl)
                + nr as f64 * gini(total_pos - left_pos, nr))
                / n as f64;
            if imp < best_imp - 1e-12 {
                best_imp = imp;
                let mid = a + (b - a) / 2.0;
                best = Some((f, if mid < b { mid } else { a }));
            }
        }
    }
    best
}
