mod support;

use defectlens_core::learn::{
    cross_validate, permutation_importance, score, ForestParams, ImportanceScore, Model,
    ModelKind, ModelSpec,
};
use support::{oracle, synth};

fn mean(v: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = v.collect();
    v.iter().sum::<f64>() / v.len() as f64
}

fn training_accuracy(spec: &ModelSpec, x: &[Vec<f64>], y: &[bool]) -> f64 {
    let model = Model::fit(spec, x, y).unwrap();
    let hits = model
        .predict(x)
        .unwrap()
        .iter()
        .zip(y)
        .filter(|(a, b)| a == b)
        .count();
    hits as f64 / y.len() as f64
}

#[test]
fn naive_bayes_separates_blobs() {
    let (x, y) = synth::gaussian_blobs(200, 2, 3);
    let nb = ModelSpec::new(ModelKind::NaiveBayes, 0);
    assert!(training_accuracy(&nb, &x, &y) >= 0.95);
    let cv = cross_validate(&x, &y, &nb, 10, 3).unwrap();
    assert!(mean(cv.reports.iter().map(|r| r.f_minority)) >= 0.9);
}

#[test]
fn xor_needs_a_tree() {
    let (x, y) = synth::xor(25);
    let dt = ModelSpec::new(ModelKind::DecisionTree, 0);
    assert_eq!(training_accuracy(&dt, &x, &y), 1.0);
    let nb = ModelSpec::new(ModelKind::NaiveBayes, 0);
    assert!(training_accuracy(&nb, &x, &y) <= 0.75);
}

#[test]
fn single_split_dataset() {
    let (x, y) = synth::loc_threshold(300, 17);
    for kind in [ModelKind::DecisionTree, ModelKind::RandomForest] {
        let cv = cross_validate(&x, &y, &ModelSpec::new(kind, 1), 10, 4).unwrap();
        let f = mean(cv.reports.iter().map(|r| r.f_minority));
        assert!(f >= 0.95, "{kind}: {f}");
    }
}

#[test]
fn shuffled_labels_give_chance_auc() {
    let (x, y) = synth::shuffled_labels(200, 5);
    for kind in ModelKind::ALL {
        let cv = cross_validate(&x, &y, &ModelSpec::new(kind, 2), 10, 5).unwrap();
        let auc = mean(cv.reports.iter().map(|r| r.auc_weighted));
        assert!((0.35..=0.65).contains(&auc), "{kind}: {auc}");
    }
}

#[test]
fn one_tree_forest_is_the_tree() {
    let (x, y) = synth::benchmark_project(150, 8);
    let dt = Model::fit(&ModelSpec::new(ModelKind::DecisionTree, 0), &x, &y).unwrap();
    let mut rf = ModelSpec::new(ModelKind::RandomForest, 99);
    rf.forest = ForestParams {
        n_trees: 1,
        features_per_split: Some(12),
        bootstrap: false,
    };
    let rf = Model::fit(&rf, &x, &y).unwrap();
    let (probe, _) = synth::benchmark_project(80, 9);
    assert_eq!(dt.predict_proba(&probe).unwrap(), rf.predict_proba(&probe).unwrap());
    assert_eq!(dt.predict_proba(&x).unwrap(), rf.predict_proba(&x).unwrap());
}

#[test]
fn cross_validation_is_deterministic() {
    let (x, y) = synth::benchmark_project(120, 4);
    let spec = ModelSpec::new(ModelKind::RandomForest, 6);
    let a = cross_validate(&x, &y, &spec, 10, 1).unwrap();
    let b = cross_validate(&x, &y, &spec, 10, 1).unwrap();
    assert_eq!(a, b);
}

#[test]
fn auc_matches_pair_counting() {
    let (x, y) = synth::benchmark_project(200, 12);
    let (train_x, test_x) = x.split_at(120);
    let (train_y, test_y) = y.split_at(120);
    let model = Model::fit(&ModelSpec::new(ModelKind::NaiveBayes, 0), train_x, train_y).unwrap();
    let probs = model.predict_proba(test_x).unwrap();
    let r = score(&probs, test_y);
    assert!((r.auc_weighted - oracle::brute_auc(&probs, test_y)).abs() < 1e-12);
}

#[test]
fn planted_signal_ranks_first() {
    let names = ["n0", "signal", "n2", "n3"];
    let mut firsts = 0;
    for seed in 0..20 {
        let (x, y) = synth::planted_signal(200, 1000 + seed);
        let spec = ModelSpec::new(ModelKind::DecisionTree, seed);
        let r = permutation_importance(&x, &y, &names, &spec, 10, 5, seed, ImportanceScore::AucWeighted)
            .unwrap();
        if r.ranks[1] == 1.0 {
            firsts += 1;
        }
        assert_eq!(r.ranks.iter().sum::<f64>(), 10.0);
    }
    assert!(firsts >= 18, "{firsts}");
}

#[test]
fn constant_feature_has_zero_importance() {
    let (mut x, y) = synth::planted_signal(200, 13);
    for row in &mut x {
        row[3] = 7.0;
    }
    for kind in ModelKind::ALL {
        let r = permutation_importance(
            &x,
            &y,
            &["n0", "signal", "n2", "const"],
            &ModelSpec::new(kind, 3),
            10,
            3,
            13,
            ImportanceScore::AucWeighted,
        )
        .unwrap();
        assert_eq!(r.importance[3], 0.0, "{kind}");
    }
}

#[test]
fn duplicated_column_splits_importance() {
    let (x, y) = synth::planted_signal(300, 13);
    let single: Vec<Vec<f64>> = x.iter().map(|r| vec![r[1], r[0], r[2], r[3]]).collect();
    let doubled: Vec<Vec<f64>> = x.iter().map(|r| vec![r[1], r[1], r[0], r[2], r[3]]).collect();
    let spec = ModelSpec::new(ModelKind::RandomForest, 4);
    let one = permutation_importance(&single, &y, &["s", "a", "b", "c"], &spec, 10, 5, 13, ImportanceScore::AucWeighted)
        .unwrap();
    let two = permutation_importance(&doubled, &y, &["s", "s2", "a", "b", "c"], &spec, 10, 5, 13, ImportanceScore::AucWeighted)
        .unwrap();
    assert!(two.importance[0] < one.importance[0]);
    assert!(two.importance[1] < one.importance[0]);
}

#[test]
fn noise_importance_vanishes_with_repeats() {
    let (x, y) = synth::planted_signal(200, 13);
    let r = permutation_importance(
        &x,
        &y,
        &["n0", "signal", "n2", "n3"],
        &ModelSpec::new(ModelKind::RandomForest, 13),
        10,
        50,
        13,
        ImportanceScore::AucWeighted,
    )
    .unwrap();
    for j in [0, 2, 3] {
        assert!(r.importance[j].abs() < 0.05, "{j}: {}", r.importance[j]);
    }
}
