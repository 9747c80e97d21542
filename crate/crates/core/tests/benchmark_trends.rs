mod support;

use defectlens_core::learn::{cross_validate, ModelKind, ModelSpec};
use defectlens_core::stats::{five_number_summary, kruskal_wallis};
use support::synth;

const SUITE_LOC: [&str; 1] = ["LOC"];
const SUITE_CK_OTHER: [&str; 11] = [
    "WMC", "DIT", "NOC", "CBO", "RFC", "LCOM5", "NPA", "NPM", "NLE", "CBOI", "CD",
];

/// Fold scores of `kind` pooled over five synthetic projects.
fn pooled(kind: ModelKind, suite: &[&str]) -> (Vec<f64>, Vec<f64>) {
    let mut f = Vec::new();
    let mut auc = Vec::new();
    for p in 0..5u64 {
        let (x, y) = synth::benchmark_project(300, 500 + p);
        let x = synth::project_columns(&x, suite);
        let cv = cross_validate(&x, &y, &ModelSpec::new(kind, p), 10, p).unwrap();
        f.extend(cv.reports.iter().map(|r| r.f_minority));
        auc.extend(cv.reports.iter().map(|r| r.auc_weighted));
    }
    (f, auc)
}

#[test]
fn trees_beat_naive_bayes_on_interactions() {
    let nb = pooled(ModelKind::NaiveBayes, &SUITE_CK_OTHER).0;
    let dt = pooled(ModelKind::DecisionTree, &SUITE_CK_OTHER).0;
    let rf = pooled(ModelKind::RandomForest, &SUITE_CK_OTHER).0;
    let kw = kruskal_wallis(&[&nb, &dt, &rf], 0.05).unwrap();
    let med = |v: &[f64]| five_number_summary(v).median;
    println!("median F: NB {} DT {} RF {}; KW p {}", med(&nb), med(&dt), med(&rf), kw.p_value);
    assert!(kw.significant);
    assert!(med(&dt) > med(&nb));
    assert!(med(&rf) > med(&nb));
}

#[test]
fn full_suite_beats_size_alone() {
    for kind in [ModelKind::DecisionTree, ModelKind::RandomForest] {
        let loc = pooled(kind, &SUITE_LOC).1;
        let all = pooled(kind, &SUITE_CK_OTHER).1;
        let med = |v: &[f64]| five_number_summary(v).median;
        println!("{kind}: median AUC LOC {} CK+OTHER {}", med(&loc), med(&all));
        assert!(med(&all) > med(&loc));
    }
}
