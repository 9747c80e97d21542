use std::path::Path;

use defectlens::snapshot::load_snapshot;
use defectlens_core::build_project_model;
use defectlens_core::metrics::compute_all;

fn fixtures() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures"))
}

#[test]
fn corpus_matches_hand_counts() {
    let snap = load_snapshot(&fixtures().join("corpus")).unwrap();
    assert!(snap.errors.is_empty() && snap.diagnostics.is_empty());
    let model = build_project_model(snap.entities).unwrap();
    let mut got: Vec<String> = compute_all(&model)
        .unwrap()
        .iter()
        .map(|v| {
            format!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{:.6}",
                v.fqn, v.loc, v.wmc, v.dit, v.noc, v.cbo, v.rfc, v.lcom5, v.npa, v.npm, v.nle, v.cboi, v.cd
            )
        })
        .collect();
    got.sort();
    let golden = std::fs::read_to_string(fixtures().join("golden_metrics.csv")).unwrap();
    let mut want: Vec<&str> = golden.lines().skip(1).collect();
    want.sort();
    let mut bad = Vec::new();
    for (g, w) in got.iter().zip(&want) {
        if g != w {
            bad.push(format!("got  {g}\nwant {w}"));
        }
    }
    assert_eq!(got.len(), want.len(), "{got:#?}");
    assert!(bad.is_empty(), "{}", bad.join("\n"));
}
