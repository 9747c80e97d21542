//! Builds the scripted fixture repository described by
//! `fixtures/history/manifest.toml`.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::Command;

use serde::Deserialize;

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

#[derive(Debug, Deserialize)]
pub struct Manifest {
    pub project: String,
    pub commit: Vec<CommitSpec>,
    pub issue: Vec<IssueSpec>,
    pub expect: Expect,
}

#[derive(Debug, Deserialize)]
pub struct CommitSpec {
    pub tag: String,
    pub date: String,
    pub message: String,
    pub files: BTreeMap<String, String>,
}

#[derive(Debug, Deserialize)]
pub struct IssueSpec {
    pub id: String,
    pub created: String,
}

#[derive(Debug, Deserialize)]
pub struct Expect {
    pub windows: Vec<ExpectWindow>,
    pub fixes: Vec<ExpectFix>,
    pub changed: Vec<ExpectChanged>,
    pub labels: Vec<(usize, String, u8)>,
}

#[derive(Debug, Deserialize)]
pub struct ExpectWindow {
    pub index: usize,
    pub start: String,
    pub snapshot: String,
}

#[derive(Debug, Deserialize)]
pub struct ExpectFix {
    pub tag: String,
    pub window: usize,
    pub evidence: Vec<String>,
}

#[derive(Debug, Deserialize)]
pub struct ExpectChanged {
    pub tag: String,
    pub file: String,
    pub lines: Vec<u32>,
}

pub fn manifest() -> Manifest {
    let text = std::fs::read_to_string(fixtures().join("history/manifest.toml")).unwrap();
    toml::from_str(&text).unwrap()
}

pub struct FixtureRepo {
    pub dir: tempfile::TempDir,
    pub manifest: Manifest,
    /// Commit tag to object id.
    pub ids: BTreeMap<String, String>,
}

impl FixtureRepo {
    pub fn path(&self) -> &Path {
        self.dir.path()
    }

    pub fn issues_path(&self) -> PathBuf {
        self.dir.path().join("issues.ndjson")
    }

    pub fn repo_path(&self) -> PathBuf {
        self.dir.path().join("repo")
    }

    pub fn tag_of(&self, id: &str) -> &str {
        self.ids
            .iter()
            .find(|(_, v)| v.as_str() == id)
            .map(|(k, _)| k.as_str())
            .unwrap_or_else(|| panic!("unknown commit {id}"))
    }
}

fn git(dir: &Path, date: Option<&str>, args: &[&str]) -> String {
    let mut cmd = Command::new("git");
    cmd.arg("-C")
        .arg(dir)
        .args(args)
        .env("GIT_CONFIG_NOSYSTEM", "1")
        .env("GIT_CONFIG_GLOBAL", "/dev/null")
        .env("GIT_AUTHOR_NAME", "Fixture")
        .env("GIT_AUTHOR_EMAIL", "fixture@example.org")
        .env("GIT_COMMITTER_NAME", "Fixture")
        .env("GIT_COMMITTER_EMAIL", "fixture@example.org");
    if let Some(d) = date {
        cmd.env("GIT_AUTHOR_DATE", d).env("GIT_COMMITTER_DATE", d);
    }
    let out = cmd.output().expect("git runs");
    assert!(
        out.status.success(),
        "git {args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap().trim().to_string()
}

/// Creates `<tmp>/repo` with the scripted history and `<tmp>/issues.ndjson`.
pub fn build() -> FixtureRepo {
    let manifest = manifest();
    let dir = tempfile::tempdir().unwrap();
    let repo = dir.path().join("repo");
    std::fs::create_dir(&repo).unwrap();
    git(&repo, None, &["init", "-q", "-b", "main"]);
    let files = fixtures().join("history/files");
    let mut ids = BTreeMap::new();
    for c in &manifest.commit {
        for (dest, src) in &c.files {
            let target = repo.join(dest);
            std::fs::create_dir_all(target.parent().unwrap()).unwrap();
            std::fs::copy(files.join(src), &target).unwrap();
        }
        git(&repo, None, &["add", "-A"]);
        git(&repo, Some(&c.date), &["commit", "-q", "-m", &c.message]);
        ids.insert(c.tag.clone(), git(&repo, None, &["rev-parse", "HEAD"]));
    }
    let issues: String = manifest
        .issue
        .iter()
        .map(|i| {
            serde_json::json!({ "id": i.id, "created": i.created }).to_string() + "\n"
        })
        .collect();
    std::fs::write(dir.path().join("issues.ndjson"), issues).unwrap();
    FixtureRepo { dir, manifest, ids }
}
