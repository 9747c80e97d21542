use defectlens::formats::{self, ImportanceRow, ScoreRow};
use defectlens::report;
use defectlens_core::stats::{kruskal_wallis, mann_whitney};

fn rows(project: &str, model: &str, f: &[f64], auc: &[f64]) -> Vec<ScoreRow> {
    f.iter()
        .zip(auc)
        .enumerate()
        .map(|(fold, (f, a))| ScoreRow {
            project: project.into(),
            suite: "CK".into(),
            model: model.into(),
            fold,
            precision: 0.5,
            recall: 0.5,
            f_minority: *f,
            auc_weighted: *a,
        })
        .collect()
}

#[test]
fn significance_table_matches_direct_calls() {
    let dir = tempfile::tempdir().unwrap();
    let nb_a = [0.10, 0.20, 0.15, 0.25];
    let dt_a = [0.60, 0.70, 0.65, 0.55];
    let rf_a = [0.62, 0.71, 0.58, 0.66];
    let nb_b = [0.30, 0.10, 0.20];
    let dt_b = [0.80, 0.75, 0.50];
    let rf_b = [0.90, 0.40, 0.85];
    let auc = |v: &[f64]| v.iter().map(|x| 1.0 - x / 2.0).collect::<Vec<_>>();
    for (project, sets) in [("alpha", [nb_a.to_vec(), dt_a.to_vec(), rf_a.to_vec()]), ("beta", [nb_b.to_vec(), dt_b.to_vec(), rf_b.to_vec()])] {
        let mut all = Vec::new();
        for (model, f) in ["NB", "DT", "RF"].iter().zip(&sets) {
            all.extend(rows(project, model, f, &auc(f)));
        }
        let path = dir.path().join(project).join("evaluate/CK/scores.csv");
        formats::write_atomic(&path, formats::scores_csv(&all).as_bytes()).unwrap();
    }
    let imp = vec![
        ImportanceRow { project: "alpha".into(), metric: "NOC".into(), importance: 0.3, rank: 1.0 },
        ImportanceRow { project: "alpha".into(), metric: "CBO".into(), importance: 0.1, rank: 2.0 },
    ];
    formats::write_atomic(&dir.path().join("alpha/importance/importance.csv"), formats::importance_csv(&imp).as_bytes()).unwrap();
    formats::write_atomic(&dir.path().join("beta/importance/importance.csv"), formats::importance_csv(&[]).as_bytes()).unwrap();

    let r = report::collect(dir.path(), 0.05).unwrap();
    let pooled = |a: &[f64], b: &[f64]| a.iter().chain(b).copied().collect::<Vec<f64>>();
    let nb = pooled(&nb_a, &nb_b);
    let dt = pooled(&dt_a, &dt_b);
    let rf = pooled(&rf_a, &rf_b);

    let find = |test: &str, metric: &str, groups: &[&str]| {
        r.tests
            .iter()
            .find(|t| t.test == test && t.metric == metric && t.groups == groups)
            .unwrap_or_else(|| panic!("{test} {groups:?} missing"))
            .result
            .clone()
            .unwrap()
    };
    assert_eq!(find("kruskal-wallis", "f_minority", &["NB", "DT", "RF"]), kruskal_wallis(&[&nb, &dt, &rf], 0.05).unwrap());
    assert_eq!(find("mann-whitney", "f_minority", &["NB", "DT"]), mann_whitney(&nb, &dt, 0.05).unwrap());
    assert_eq!(find("mann-whitney", "f_minority", &["NB", "RF"]), mann_whitney(&nb, &rf, 0.05).unwrap());
    assert_eq!(find("mann-whitney", "f_minority", &["DT", "RF"]), mann_whitney(&dt, &rf, 0.05).unwrap());
    let auc_dt = auc(&dt);
    let auc_rf = auc(&rf);
    assert_eq!(find("mann-whitney", "auc_weighted", &["DT", "RF"]), mann_whitney(&auc_dt, &auc_rf, 0.05).unwrap());
    assert_eq!(r.tests.len(), 8);
    assert!(find("kruskal-wallis", "f_minority", &["NB", "DT", "RF"]).significant);

    assert_eq!(r.excluded, vec!["beta".to_string()]);
    assert_eq!(r.ranks.len(), 2);
    assert_eq!(r.ranks[0].feature, "NOC");

    // Writing does not touch stage outputs, and is repeatable.
    let before = std::fs::read(dir.path().join("alpha/evaluate/CK/scores.csv")).unwrap();
    let files = report::write(&r, &dir.path().join("report")).unwrap();
    let first: Vec<Vec<u8>> = files.iter().map(|f| std::fs::read(f).unwrap()).collect();
    let again = report::collect(dir.path(), 0.05).unwrap();
    assert_eq!(again, r);
    report::write(&again, &dir.path().join("report")).unwrap();
    let second: Vec<Vec<u8>> = files.iter().map(|f| std::fs::read(f).unwrap()).collect();
    assert_eq!(first, second);
    assert_eq!(std::fs::read(dir.path().join("alpha/evaluate/CK/scores.csv")).unwrap(), before);
    let tests_csv = String::from_utf8(first[1].clone()).unwrap();
    assert!(tests_csv.starts_with("suite,metric,test,groups,statistic,p_value,significant,note\n"));
    assert!(files.iter().any(|f| f.ends_with("figures/scores-ck-f-minority.svg")));
}

#[test]
fn summary_is_five_numbers_of_fold_scores() {
    let scores = rows("p", "DT", &[0.0, 0.25, 0.5, 1.0], &[0.5, 0.5, 0.5, 0.5]);
    let r = report::compose(&scores, &[], &[], Vec::new(), 0.05);
    let f = r
        .scores
        .iter()
        .find(|s| s.metric == "f_minority")
        .unwrap()
        .summary;
    // Linear-interpolation quartiles of [0, .25, .5, 1].
    assert_eq!((f.min, f.q1, f.median, f.q3, f.max), (0.0, 0.1875, 0.375, 0.625, 1.0));
    assert!(r.tests.is_empty());
}

#[test]
fn boxplot_is_well_formed_svg() {
    let f = defectlens_core::stats::five_number_summary(&[0.1, 0.2, 0.3]);
    let svg = report::boxplot_svg("a < b & c", "F", &[("NB".into(), f)], (0.0, 1.0));
    assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
    assert!(svg.contains("a &lt; b &amp; c"));
    assert_eq!(svg.matches("<rect").count(), 2);
}
