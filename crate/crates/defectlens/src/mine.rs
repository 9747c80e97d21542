//! Mining a repository: release windows, defect-fixing commits and class
//! labels per window.

use std::collections::{BTreeMap, BTreeSet};

use chrono::{DateTime, Utc};
use defectlens_core::miner::{
    assign_window, changed_lines, classify_fix_commit, enumerate_release_windows,
    label_defective_classes, DefectLabel, FixChanges, FixPatterns, HistoryCommit, ReleaseWindow,
    WindowError,
};
use defectlens_core::model::ClassEntity;

use crate::git::{GitError, Repo};
use crate::java::ParseDiagnostic;
use crate::snapshot::parse_files;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MineConfig {
    pub interval_months: u32,
    pub patterns: FixPatterns,
}

impl Default for MineConfig {
    fn default() -> Self {
        Self {
            interval_months: 6,
            patterns: FixPatterns::default(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum IssueError {
    #[error("issues file line {line}: {reason}")]
    Malformed { line: usize, reason: String },
}

/// Reads `issues.ndjson`: one object per line with `id` (string or number)
/// and `created` (RFC 3339). Blank lines are ignored.
pub fn parse_issues(text: &str) -> Result<BTreeMap<String, DateTime<Utc>>, IssueError> {
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let bad = |reason: String| IssueError::Malformed {
            line: line_no,
            reason,
        };
        let v: serde_json::Value = serde_json::from_str(line).map_err(|e| bad(e.to_string()))?;
        let id = match v.get("id") {
            Some(serde_json::Value::String(s)) => s.trim_start_matches('#').to_string(),
            Some(serde_json::Value::Number(n)) => n.to_string(),
            _ => return Err(bad("missing id".into())),
        };
        let created = v
            .get("created")
            .and_then(|c| c.as_str())
            .ok_or_else(|| bad("missing created".into()))?;
        let created = DateTime::parse_from_rfc3339(created)
            .map_err(|e| bad(format!("created: {e}")))?
            .with_timezone(&Utc);
        out.insert(id, created);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefectFixCommit {
    pub id: String,
    pub time: DateTime<Utc>,
    pub message: String,
    pub evidence: Vec<String>,
    /// First referenced issue with a known creation time, else the first
    /// referenced issue.
    pub issue_ref: Option<String>,
    pub issue_created: Option<DateTime<Utc>>,
    /// The instant used for window assignment.
    pub assigned_at: DateTime<Utc>,
    pub window: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum MineDiagnostic {
    /// A fix commit without a parent has no diff to label from.
    RootFix { commit: String },
    DiffUnavailable { commit: String, reason: String },
    /// The fix falls in no retained window.
    Unassigned { commit: String },
    /// A fix touched a file missing from the window snapshot.
    Unmatched {
        release: usize,
        commit: String,
        file: String,
    },
    Parse {
        release: usize,
        diagnostic: ParseDiagnostic,
    },
    ParseFailed { release: usize, error: String },
}

impl std::fmt::Display for MineDiagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MineDiagnostic::RootFix { commit } => write!(f, "{commit}: root fix commit skipped"),
            MineDiagnostic::DiffUnavailable { commit, reason } => {
                write!(f, "{commit}: diff unavailable: {reason}")
            }
            MineDiagnostic::Unassigned { commit } => write!(f, "{commit}: fix outside all windows"),
            MineDiagnostic::Unmatched {
                release,
                commit,
                file,
            } => write!(f, "release {release}: {commit} touches {file}, absent from snapshot"),
            MineDiagnostic::Parse {
                release,
                diagnostic,
            } => write!(f, "release {release}: {diagnostic}"),
            MineDiagnostic::ParseFailed { release, error } => write!(f, "release {release}: {error}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Release {
    pub window: ReleaseWindow,
    /// Parsed snapshot at the window's snapshot commit.
    pub entities: Vec<ClassEntity>,
    pub labels: Vec<DefectLabel>,
}

#[derive(Debug, Clone)]
pub struct MineOutcome {
    pub windows: Vec<ReleaseWindow>,
    /// Fix commits in history order.
    pub fixes: Vec<DefectFixCommit>,
    /// Changed pre-image lines per fix commit.
    pub changes: BTreeMap<String, BTreeMap<String, BTreeSet<u32>>>,
    pub releases: Vec<Release>,
    pub diagnostics: Vec<MineDiagnostic>,
}

#[derive(Debug, thiserror::Error)]
pub enum MineError {
    #[error(transparent)]
    Git(#[from] GitError),
    #[error(transparent)]
    Window(#[from] WindowError),
    #[error("cannot read snapshot {commit}: {source}")]
    SnapshotCheckoutFailed { commit: String, source: GitError },
}

/// Assignment instant: the earliest known creation time of a referenced
/// issue that is not after the commit, else the commit time.
fn candidate_instant(
    time: DateTime<Utc>,
    refs: &[String],
    issues: &BTreeMap<String, DateTime<Utc>>,
) -> (Option<String>, Option<DateTime<Utc>>) {
    let known = refs
        .iter()
        .filter_map(|r| issues.get(r).map(|t| (*t, r)))
        .filter(|(t, _)| *t <= time)
        .min();
    match known {
        Some((t, r)) => (Some(r.clone()), Some(t)),
        None => (refs.first().cloned(), None),
    }
}

pub fn mine(
    repo: &Repo,
    config: &MineConfig,
    issues: &BTreeMap<String, DateTime<Utc>>,
) -> Result<MineOutcome, MineError> {
    let history = repo.first_parent_history()?;
    let mut diagnostics = BTreeSet::new();

    let mut fixes: Vec<DefectFixCommit> = Vec::new();
    let mut parents: BTreeMap<String, Option<String>> = BTreeMap::new();
    for c in &history {
        let class = classify_fix_commit(&c.message, &config.patterns);
        if !class.is_fix {
            continue;
        }
        let (issue_ref, issue_created) = candidate_instant(c.time, &class.issue_refs, issues);
        parents.insert(c.id.clone(), c.parents.first().cloned());
        fixes.push(DefectFixCommit {
            id: c.id.clone(),
            time: c.time,
            message: c.message.clone(),
            evidence: class.evidence,
            issue_ref,
            issue_created,
            assigned_at: issue_created.unwrap_or(c.time),
            window: None,
        });
    }

    let plain: Vec<HistoryCommit> = history
        .iter()
        .map(|c| HistoryCommit {
            id: c.id.clone(),
            time: c.time,
        })
        .collect();
    let instants: Vec<DateTime<Utc>> = fixes.iter().map(|f| f.assigned_at).collect();
    let windows = enumerate_release_windows(&plain, config.interval_months, &instants)?;

    for f in &mut fixes {
        f.window = assign_window(&windows, f.assigned_at);
        if f.window.is_none() && f.issue_created.is_some() {
            f.assigned_at = f.time;
            f.issue_created = None;
            f.window = assign_window(&windows, f.time);
        }
        if f.window.is_none() {
            diagnostics.insert(MineDiagnostic::Unassigned {
                commit: f.id.clone(),
            });
        }
    }

    let mut changes = BTreeMap::new();
    for f in &fixes {
        let Some(parent) = parents.get(&f.id).cloned().flatten() else {
            diagnostics.insert(MineDiagnostic::RootFix {
                commit: f.id.clone(),
            });
            continue;
        };
        match repo.diff(&parent, &f.id) {
            Ok(text) => {
                changes.insert(f.id.clone(), changed_lines(&text));
            }
            Err(e) => {
                diagnostics.insert(MineDiagnostic::DiffUnavailable {
                    commit: f.id.clone(),
                    reason: e.to_string(),
                });
            }
        }
    }

    let mut releases = Vec::with_capacity(windows.len());
    for w in &windows {
        let files = repo
            .java_files_at(&w.snapshot_commit)
            .map_err(|source| MineError::SnapshotCheckoutFailed {
                commit: w.snapshot_commit.clone(),
                source,
            })?;
        let snap = parse_files(files);
        for d in snap.diagnostics {
            diagnostics.insert(MineDiagnostic::Parse {
                release: w.index,
                diagnostic: d,
            });
        }
        for e in snap.errors {
            diagnostics.insert(MineDiagnostic::ParseFailed {
                release: w.index,
                error: e.to_string(),
            });
        }
        let assigned: Vec<FixChanges> = fixes
            .iter()
            .filter(|f| f.window == Some(w.index))
            .filter_map(|f| {
                changes.get(&f.id).map(|lines: &BTreeMap<String, BTreeSet<u32>>| FixChanges {
                    commit: f.id.clone(),
                    lines: lines.clone(),
                })
            })
            .collect();
        let outcome = label_defective_classes(w.index, &assigned, &snap.entities);
        for u in outcome.unmatched {
            diagnostics.insert(MineDiagnostic::Unmatched {
                release: w.index,
                commit: u.commit,
                file: u.file,
            });
        }
        releases.push(Release {
            window: w.clone(),
            entities: snap.entities,
            labels: outcome.labels,
        });
    }

    Ok(MineOutcome {
        windows,
        fixes,
        changes,
        releases,
        diagnostics: diagnostics.into_iter().collect(),
    })
}

/// Parses the snapshot of `rev` without mining.
pub fn snapshot_at(repo: &Repo, rev: &str) -> Result<crate::snapshot::Snapshot, GitError> {
    Ok(parse_files(repo.java_files_at(rev)?))
}
