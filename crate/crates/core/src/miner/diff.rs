use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

/// One file section of a unified diff.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FileChange {
    /// Pre-image path; `None` for added files.
    pub old_path: Option<String>,
    /// Post-image path; `None` for deleted files.
    pub new_path: Option<String>,
    pub binary: bool,
    /// Pre-image line numbers of deleted or replaced lines, plus the anchor
    /// line of each pure insertion.
    pub lines: BTreeSet<u32>,
}

fn unquote(raw: &str) -> String {
    let raw = raw.trim();
    let Some(inner) = raw.strip_prefix('"').and_then(|r| r.strip_suffix('"')) else {
        return raw.to_string();
    };
    let mut out = String::new();
    let mut chars = inner.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('t') => out.push('\t'),
            Some('n') => out.push('\n'),
            Some(other) => out.push(other),
            None => {}
        }
    }
    out
}

/// `a/src/X.java` -> `src/X.java`; `/dev/null` -> `None`.
fn side_path(raw: &str, prefix: &str) -> Option<String> {
    let path = unquote(raw);
    if path == "/dev/null" {
        return None;
    }
    Some(path.strip_prefix(prefix).unwrap_or(&path).to_string())
}

fn parse_range(spec: &str) -> Option<(u32, u32)> {
    let (start, count) = match spec.split_once(',') {
        Some((s, c)) => (s.parse().ok()?, c.parse().ok()?),
        None => (spec.parse().ok()?, 1),
    };
    Some((start, count))
}

/// Parses `@@ -a,b +c,d @@` into ((a, b), (c, d)).
fn parse_hunk_header(line: &str) -> Option<((u32, u32), (u32, u32))> {
    let rest = line.strip_prefix("@@ ")?;
    let mut parts = rest.split_whitespace();
    let old = parse_range(parts.next()?.strip_prefix('-')?)?;
    let new = parse_range(parts.next()?.strip_prefix('+')?)?;
    Some((old, new))
}

struct Hunk {
    old_left: u32,
    new_left: u32,
    next_old: u32,
    last_old: u32,
    block_deleted: bool,
    block_added: bool,
}

impl Hunk {
    fn close_block(&mut self, lines: &mut BTreeSet<u32>) {
        if self.block_added && !self.block_deleted {
            lines.insert(self.last_old.max(1));
        }
        self.block_added = false;
        self.block_deleted = false;
    }
}

/// Parses `git diff` output (any context size) into per-file changes.
pub fn parse_unified_diff(text: &str) -> Vec<FileChange> {
    let mut files: Vec<FileChange> = Vec::new();
    let mut hunk: Option<Hunk> = None;
    for line in text.lines() {
        if let Some(h) = hunk.as_mut() {
            let file = files.last_mut().expect("hunk inside a file");
            let consumed = match line.as_bytes().first() {
                Some(b' ') | None if h.old_left > 0 && h.new_left > 0 => {
                    h.close_block(&mut file.lines);
                    h.last_old = h.next_old;
                    h.next_old += 1;
                    h.old_left -= 1;
                    h.new_left -= 1;
                    true
                }
                Some(b'-') if h.old_left > 0 => {
                    file.lines.insert(h.next_old);
                    h.block_deleted = true;
                    h.last_old = h.next_old;
                    h.next_old += 1;
                    h.old_left -= 1;
                    true
                }
                Some(b'+') if h.new_left > 0 => {
                    h.block_added = true;
                    h.new_left -= 1;
                    true
                }
                Some(b'\\') => true,
                _ => false,
            };
            if h.old_left == 0 && h.new_left == 0 {
                h.close_block(&mut file.lines);
                hunk = None;
            }
            if consumed {
                continue;
            }
            hunk = None;
        }

        if let Some(rest) = line.strip_prefix("diff --git ") {
            let (old, new) = split_git_header(rest);
            files.push(FileChange {
                old_path: old,
                new_path: new,
                ..FileChange::default()
            });
        } else if let Some(file) = files.last_mut() {
            if let Some(p) = line.strip_prefix("rename from ") {
                file.old_path = Some(unquote(p));
            } else if let Some(p) = line.strip_prefix("rename to ") {
                file.new_path = Some(unquote(p));
            } else if line.starts_with("new file mode") {
                file.old_path = None;
            } else if line.starts_with("deleted file mode") {
                file.new_path = None;
            } else if line.starts_with("Binary files ") || line.starts_with("GIT binary patch") {
                file.binary = true;
            } else if let Some(p) = line.strip_prefix("--- ") {
                file.old_path = side_path(p, "a/");
            } else if let Some(p) = line.strip_prefix("+++ ") {
                file.new_path = side_path(p, "b/");
            } else if let Some(((old_start, old_count), (_, new_count))) = parse_hunk_header(line) {
                // A zero-length old range names the line the insertion follows.
                let (next_old, last_old) = if old_count == 0 {
                    (old_start + 1, old_start)
                } else {
                    (old_start, old_start.saturating_sub(1))
                };
                hunk = Some(Hunk {
                    old_left: old_count,
                    new_left: new_count,
                    next_old,
                    last_old,
                    block_deleted: false,
                    block_added: false,
                });
            }
        }
    }
    files
}

fn split_git_header(rest: &str) -> (Option<String>, Option<String>) {
    // `a/x b/y`, possibly quoted. Paths with spaces are disambiguated by the
    // later `---`/`+++` or rename lines, so a best effort split is enough.
    if rest.starts_with('"') {
        if let Some(end) = rest[1..].find("\" ") {
            let (a, b) = rest.split_at(end + 2);
            return (side_path(a, "a/"), side_path(b, "b/"));
        }
    }
    match rest.find(" b/") {
        Some(i) => (side_path(&rest[..i], "a/"), side_path(&rest[i + 1..], "b/")),
        None => (None, None),
    }
}

/// Pre-image lines touched in each modified `.java` file, keyed by the
/// pre-image path. Added and binary files are skipped.
pub fn changed_lines(diff: &str) -> BTreeMap<String, BTreeSet<u32>> {
    let mut out: BTreeMap<String, BTreeSet<u32>> = BTreeMap::new();
    for change in parse_unified_diff(diff) {
        let Some(path) = change.old_path else { continue };
        if change.binary || !path.ends_with(".java") || change.lines.is_empty() {
            continue;
        }
        out.entry(path).or_default().extend(change.lines);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn lines(diff: &str, file: &str) -> Vec<u32> {
        changed_lines(diff)
            .get(file)
            .map(|s| s.iter().copied().collect())
            .unwrap_or_default()
    }

    #[test]
    fn deletion_of_three_lines() {
        let d = "diff --git a/F.java b/F.java\n--- a/F.java\n+++ b/F.java\n@@ -5,3 +4,0 @@\n-a\n-b\n-c\n";
        assert_eq!(lines(d, "F.java"), vec![5, 6, 7]);
    }

    #[test]
    fn pure_insertion_maps_to_anchor() {
        let d = "diff --git a/F.java b/F.java\n--- a/F.java\n+++ b/F.java\n@@ -10,0 +11,3 @@\n+x\n+y\n+z\n";
        assert_eq!(lines(d, "F.java"), vec![10]);
    }

    #[test]
    fn insertion_at_file_start() {
        let d = "diff --git a/F.java b/F.java\n--- a/F.java\n+++ b/F.java\n@@ -0,0 +1 @@\n+x\n";
        assert_eq!(lines(d, "F.java"), vec![1]);
    }

    #[test]
    fn context_hunks() {
        let d = "\
diff --git a/F.java b/F.java
index 1..2 100644
--- a/F.java
+++ b/F.java
@@ -3,6 +3,7 @@ class F {
 a
 b
-c
+C
 d
+new
 e
 f
";
        // c replaced at line 5; insertion after d (line 6).
        assert_eq!(lines(d, "F.java"), vec![5, 6]);
    }

    #[test]
    fn deleted_line_starting_with_dashes() {
        let d = "diff --git a/F.java b/F.java\n--- a/F.java\n+++ b/F.java\n@@ -2 +2 @@\n--- old\n+++ new\n";
        assert_eq!(lines(d, "F.java"), vec![2]);
    }

    #[test]
    fn renames_binaries_and_new_files() {
        let d = "\
diff --git a/old/A.java b/new/A.java
similarity index 90%
rename from old/A.java
rename to new/A.java
--- a/old/A.java
+++ b/new/A.java
@@ -4 +4 @@
-x
+y
diff --git a/img.png b/img.png
Binary files a/img.png and b/img.png differ
diff --git a/B.java b/B.java
new file mode 100644
--- /dev/null
+++ b/B.java
@@ -0,0 +1,2 @@
+class B {
+}
diff --git a/notes.txt b/notes.txt
--- a/notes.txt
+++ b/notes.txt
@@ -1 +1 @@
-a
+b
";
        let map = changed_lines(d);
        assert_eq!(map.len(), 1);
        assert_eq!(lines(d, "old/A.java"), vec![4]);
        let all = parse_unified_diff(d);
        assert_eq!(all.len(), 4);
        assert_eq!(all[0].new_path.as_deref(), Some("new/A.java"));
        assert!(all[1].binary);
        assert_eq!(all[2].old_path, None);
    }

    #[test]
    fn quoted_paths() {
        let d = "diff --git \"a/sp ace.java\" \"b/sp ace.java\"\n--- \"a/sp ace.java\"\n+++ \"b/sp ace.java\"\n@@ -1 +1 @@\n-a\n+b\n";
        assert_eq!(lines(d, "sp ace.java"), vec![1]);
    }
}
