use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::model::ClassEntity;

/// Changed pre-image lines of one defect-fixing commit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixChanges {
    pub commit: String,
    pub lines: BTreeMap<String, BTreeSet<u32>>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Provenance {
    pub commit: String,
    pub file: String,
    pub line: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefectLabel {
    pub release: usize,
    pub fqn: String,
    pub defective: bool,
    pub provenance: Vec<Provenance>,
}

/// A fix touched a file that does not exist in the window's snapshot.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Unmatched {
    pub commit: String,
    pub file: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LabelOutcome {
    /// One label per named class of the snapshot, ordered by name.
    pub labels: Vec<DefectLabel>,
    pub unmatched: Vec<Unmatched>,
}

/// Marks a named class defective when a changed line of one of the window's
/// fixes falls inside it. Lines inside nested, anonymous or local classes go
/// to the innermost entity and then up to its nearest named class.
pub fn label_defective_classes(
    release: usize,
    fixes: &[FixChanges],
    snapshot: &[ClassEntity],
) -> LabelOutcome {
    let by_fqn: BTreeMap<&str, &ClassEntity> =
        snapshot.iter().map(|e| (e.fqn.as_str(), e)).collect();
    let mut by_file: BTreeMap<&str, Vec<&ClassEntity>> = BTreeMap::new();
    for e in snapshot {
        by_file.entry(e.file_path.as_str()).or_default().push(e);
    }
    fn named_owner<'a>(
        by_fqn: &BTreeMap<&str, &'a ClassEntity>,
        mut e: &'a ClassEntity,
    ) -> Option<String> {
        loop {
            if e.nesting.is_named() {
                return Some(e.fqn.clone());
            }
            e = by_fqn.get(e.enclosing.as_deref()?)?;
        }
    }

    let mut hits: BTreeMap<String, BTreeSet<Provenance>> = BTreeMap::new();
    let mut unmatched = BTreeSet::new();
    for fix in fixes {
        for (file, lines) in &fix.lines {
            let Some(candidates) = by_file.get(file.as_str()) else {
                unmatched.insert(Unmatched {
                    commit: fix.commit.clone(),
                    file: file.clone(),
                });
                continue;
            };
            for &line in lines {
                let innermost = candidates
                    .iter()
                    .filter(|e| e.span.contains(line))
                    .min_by_key(|e| e.span.len());
                if let Some(owner) = innermost.and_then(|e| named_owner(&by_fqn, e)) {
                    hits.entry(owner).or_default().insert(Provenance {
                        commit: fix.commit.clone(),
                        file: file.clone(),
                        line,
                    });
                }
            }
        }
    }

    let mut labels: Vec<DefectLabel> = snapshot
        .iter()
        .filter(|e| e.nesting.is_named())
        .map(|e| {
            let provenance: Vec<Provenance> = hits
                .get(&e.fqn)
                .map(|s| s.iter().cloned().collect())
                .unwrap_or_default();
            DefectLabel {
                release,
                fqn: e.fqn.clone(),
                defective: !provenance.is_empty(),
                provenance,
            }
        })
        .collect();
    labels.sort_by(|a, b| a.fqn.cmp(&b.fqn));
    labels.dedup_by(|a, b| a.fqn == b.fqn);
    LabelOutcome {
        labels,
        unmatched: unmatched.into_iter().collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn entity(fqn: &str, span: (u32, u32), nesting: Nesting, enclosing: Option<&str>) -> ClassEntity {
        ClassEntity {
            fqn: fqn.to_string(),
            simple_name: fqn.rsplit('.').next().unwrap().to_string(),
            kind: ClassKind::Class,
            file_path: "src/Account.java".to_string(),
            package: String::new(),
            imports: Vec::new(),
            span: LineSpan::new(span.0, span.1),
            nesting,
            enclosing: enclosing.map(|s| s.to_string()),
            supertype_names: Vec::new(),
            fields: Vec::new(),
            methods: Vec::new(),
            init_blocks: Vec::new(),
            line_classes: vec![LineClass::Code; (span.1 - span.0 + 1) as usize],
        }
    }

    fn fix(commit: &str, file: &str, lines: &[u32]) -> FixChanges {
        let mut map = BTreeMap::new();
        map.insert(file.to_string(), lines.iter().copied().collect());
        FixChanges {
            commit: commit.to_string(),
            lines: map,
        }
    }

    #[test]
    fn no_fixes_means_clean() {
        let snap = vec![entity("Account", (1, 31), Nesting::TopLevel, None)];
        let out = label_defective_classes(0, &[], &snap);
        assert_eq!(out.labels.len(), 1);
        assert!(!out.labels[0].defective);
    }

    #[test]
    fn containment_with_provenance() {
        let snap = vec![entity("Account", (1, 31), Nesting::TopLevel, None)];
        let out = label_defective_classes(2, &[fix("abc", "src/Account.java", &[13])], &snap);
        let l = &out.labels[0];
        assert!(l.defective);
        assert_eq!(l.release, 2);
        assert_eq!(
            l.provenance,
            vec![Provenance {
                commit: "abc".into(),
                file: "src/Account.java".into(),
                line: 13
            }]
        );
    }

    #[test]
    fn anonymous_lines_go_to_named_owner_and_nested_stay() {
        let snap = vec![
            entity("A", (1, 40), Nesting::TopLevel, None),
            entity("A.B", (5, 10), Nesting::Nested, Some("A")),
            entity("A$anon1", (20, 25), Nesting::Anonymous, Some("A")),
            entity("A.B$anon1", (7, 8), Nesting::Anonymous, Some("A.B")),
        ];
        let out = label_defective_classes(0, &[fix("c", "src/Account.java", &[8, 22])], &snap);
        let get = |f: &str| out.labels.iter().find(|l| l.fqn == f).unwrap();
        assert_eq!(out.labels.len(), 2);
        assert_eq!(get("A").provenance[0].line, 22);
        assert_eq!(get("A.B").provenance[0].line, 8);
    }

    #[test]
    fn missing_file_is_unmatched_and_outside_lines_ignored() {
        let snap = vec![entity("A", (3, 10), Nesting::TopLevel, None)];
        let fixes = [
            fix("c1", "src/Gone.java", &[1]),
            fix("c2", "src/Account.java", &[1]),
        ];
        let out = label_defective_classes(0, &fixes, &snap);
        assert!(!out.labels[0].defective);
        assert_eq!(
            out.unmatched,
            vec![Unmatched {
                commit: "c1".into(),
                file: "src/Gone.java".into()
            }]
        );
    }
}
