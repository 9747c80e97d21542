mod common;

use std::collections::BTreeSet;

use defectlens::git::Repo;
use defectlens::mine::{mine, MineConfig};
use defectlens::snapshot::load_snapshot;
use defectlens_core::metrics::compute_all;
use defectlens_core::{build_project_model, ClassEntity, ProjectModel};

/// Drops package segments: `corpus.Account.Entry` becomes `Account.Entry`.
fn short(fqn: &str) -> String {
    fqn.split('.')
        .skip_while(|s| s.starts_with(|c: char| c.is_lowercase()))
        .collect::<Vec<_>>()
        .join(".")
}

fn edges(model: &ProjectModel, set: &BTreeSet<(defectlens_core::resolve::EntityId, defectlens_core::resolve::EntityId)>) -> BTreeSet<String> {
    set.iter()
        .map(|(a, b)| format!("{}->{}", short(&model.entity(*a).fqn), short(&model.entity(*b).fqn)))
        .collect()
}

fn hand_drawn(list: &str) -> BTreeSet<String> {
    list.split(',').map(|s| s.trim().to_string()).collect()
}

#[test]
fn corpus_edges_match_hand_drawn_graph() {
    let snap = load_snapshot(&common::fixtures().join("corpus")).unwrap();
    let model = build_project_model(snap.entities).unwrap();
    assert_eq!(
        edges(&model, model.inherits()),
        hand_drawn(
            "Circle->Shape, Square->Shape, RoundedSquare->Square, Left->Base0, Right->Base0, \
             Diamond->Left, Diamond->Right"
        )
    );
    assert_eq!(
        edges(&model, model.uses()),
        hand_drawn(
            "Account->Account.Entry, Circle->Shape, Square->Shape, RoundedSquare->Square, \
             Left->Base0, Right->Base0, Diamond->Left, Diamond->Right, Alpha->Beta, Beta->Gamma, \
             Outer->Outer.Node, Registry->Shape, Registry->Circle"
        )
    );
}

fn check_conservation(entities: Vec<ClassEntity>) {
    let model = build_project_model(entities).unwrap();
    let v = compute_all(&model).unwrap();
    let sum = |f: fn(&defectlens_core::MetricVector) -> u32| v.iter().map(f).sum::<u32>() as usize;
    assert_eq!(sum(|m| m.noc), model.inherits().len());
    assert_eq!(sum(|m| m.cbo), model.uses().len());
    assert_eq!(sum(|m| m.cboi), model.uses().len());
}

#[test]
fn conservation_on_every_fixture_snapshot() {
    check_conservation(load_snapshot(&common::fixtures().join("corpus")).unwrap().entities);
    let fx = common::build();
    let repo = Repo::open(&fx.repo_path()).unwrap();
    let out = mine(&repo, &MineConfig::default(), &Default::default()).unwrap();
    assert_eq!(out.releases.len(), 3);
    for r in out.releases {
        check_conservation(r.entities);
    }
}
