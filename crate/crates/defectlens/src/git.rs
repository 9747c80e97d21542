//! Read-only access to a local repository through the `git` executable.

use std::io::{BufRead, BufReader, Read, Write};
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};

use chrono::{DateTime, Utc};

#[derive(Debug, thiserror::Error)]
pub enum GitError {
    #[error("cannot run git: {0}")]
    Spawn(#[from] std::io::Error),
    #[error("git {args} failed: {stderr}")]
    Failed { args: String, stderr: String },
    #[error("unexpected git output: {0}")]
    Output(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommitInfo {
    pub id: String,
    pub parents: Vec<String>,
    /// Committer time.
    pub time: DateTime<Utc>,
    pub message: String,
}

#[derive(Debug, Clone)]
pub struct Repo {
    path: PathBuf,
}

impl Repo {
    pub fn open(path: &Path) -> Result<Self, GitError> {
        let repo = Self {
            path: path.to_path_buf(),
        };
        repo.run(&["rev-parse", "--git-dir"])?;
        Ok(repo)
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    fn command(&self, args: &[&str]) -> Command {
        let mut cmd = Command::new("git");
        cmd.arg("-C")
            .arg(&self.path)
            .args(["-c", "core.quotepath=on", "-c", "diff.noprefix=false"])
            .args(["-c", "diff.mnemonicPrefix=false", "-c", "log.showSignature=false"])
            .args(args)
            .env("LC_ALL", "C")
            .env("GIT_CONFIG_NOSYSTEM", "1")
            .env_remove("GIT_DIR")
            .env_remove("GIT_WORK_TREE");
        cmd
    }

    fn run(&self, args: &[&str]) -> Result<Vec<u8>, GitError> {
        let out = self.command(args).stdin(Stdio::null()).output()?;
        if !out.status.success() {
            return Err(GitError::Failed {
                args: args.join(" "),
                stderr: String::from_utf8_lossy(&out.stderr).trim().to_string(),
            });
        }
        Ok(out.stdout)
    }

    fn has_commits(&self) -> bool {
        self.run(&["rev-parse", "--verify", "--quiet", "HEAD^{commit}"])
            .is_ok()
    }

    /// First-parent history of `HEAD`, oldest first. Empty for a repository
    /// without commits.
    pub fn first_parent_history(&self) -> Result<Vec<CommitInfo>, GitError> {
        if !self.has_commits() {
            return Ok(Vec::new());
        }
        let raw = self.run(&[
            "log",
            "--first-parent",
            "--reverse",
            "--no-color",
            "--format=%H%x00%P%x00%ct%x00%B%x1e",
            "HEAD",
        ])?;
        let text = String::from_utf8_lossy(&raw);
        let mut commits = Vec::new();
        for record in text.split('\x1e') {
            let record = record.trim_start_matches('\n');
            if record.is_empty() {
                continue;
            }
            let mut parts = record.splitn(4, '\0');
            let (Some(id), Some(parents), Some(ct), Some(msg)) =
                (parts.next(), parts.next(), parts.next(), parts.next())
            else {
                return Err(GitError::Output(record.chars().take(80).collect()));
            };
            let secs: i64 = ct
                .trim()
                .parse()
                .map_err(|_| GitError::Output(format!("bad timestamp {ct:?}")))?;
            let time = DateTime::from_timestamp(secs, 0)
                .ok_or_else(|| GitError::Output(format!("timestamp out of range {secs}")))?;
            commits.push(CommitInfo {
                id: id.to_string(),
                parents: parents.split_whitespace().map(String::from).collect(),
                time,
                message: msg.trim_end().to_string(),
            });
        }
        Ok(commits)
    }

    /// Zero-context unified diff from `parent` to `commit`, with renames.
    pub fn diff(&self, parent: &str, commit: &str) -> Result<String, GitError> {
        let raw = self.run(&[
            "diff",
            "-U0",
            "--find-renames",
            "--no-color",
            "--no-ext-diff",
            "--no-textconv",
            parent,
            commit,
        ])?;
        Ok(String::from_utf8_lossy(&raw).into_owned())
    }

    /// Contents of every `.java` blob in the tree of `rev`.
    pub fn java_files_at(&self, rev: &str) -> Result<Vec<(String, Vec<u8>)>, GitError> {
        let listing = self.run(&["ls-tree", "-r", "-z", "--full-tree", rev])?;
        let mut entries: Vec<(String, String)> = Vec::new();
        for item in listing.split(|b| *b == 0).filter(|s| !s.is_empty()) {
            let item = String::from_utf8_lossy(item);
            let Some((meta, path)) = item.split_once('\t') else {
                return Err(GitError::Output(item.into_owned()));
            };
            let mut meta = meta.split_whitespace();
            let (_mode, kind, id) = (meta.next(), meta.next(), meta.next());
            if kind == Some("blob") && path.ends_with(".java") {
                if let Some(id) = id {
                    entries.push((path.to_string(), id.to_string()));
                }
            }
        }
        let blobs = self.read_blobs(entries.iter().map(|e| e.1.as_str()))?;
        Ok(entries.into_iter().map(|e| e.0).zip(blobs).collect())
    }

    fn read_blobs<'a>(&self, ids: impl Iterator<Item = &'a str>) -> Result<Vec<Vec<u8>>, GitError> {
        let ids: Vec<&str> = ids.collect();
        if ids.is_empty() {
            return Ok(Vec::new());
        }
        let mut child = self
            .command(&["cat-file", "--batch"])
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::null())
            .spawn()?;
        let mut stdin = child.stdin.take().expect("piped stdin");
        let request: String = ids.iter().map(|id| format!("{id}\n")).collect();
        let writer = std::thread::spawn(move || stdin.write_all(request.as_bytes()));
        let mut reader = BufReader::new(child.stdout.take().expect("piped stdout"));
        let mut blobs = Vec::with_capacity(ids.len());
        for id in &ids {
            let mut header = String::new();
            reader.read_line(&mut header)?;
            let mut fields = header.split_whitespace();
            let size: usize = match (fields.next(), fields.next(), fields.next()) {
                (Some(_), Some("blob"), Some(n)) => n
                    .parse()
                    .map_err(|_| GitError::Output(header.clone()))?,
                _ => return Err(GitError::Output(format!("{id}: {}", header.trim()))),
            };
            let mut buf = vec![0; size + 1];
            reader.read_exact(&mut buf)?;
            buf.pop();
            blobs.push(buf);
        }
        writer
            .join()
            .map_err(|_| GitError::Output("cat-file writer panicked".into()))??;
        let status = child.wait()?;
        if !status.success() {
            return Err(GitError::Failed {
                args: "cat-file --batch".into(),
                stderr: String::new(),
            });
        }
        Ok(blobs)
    }
}
