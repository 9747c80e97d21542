//! Loading a source tree as one release snapshot.

use std::path::{Path, PathBuf};

use defectlens_core::model::ClassEntity;
use rayon::prelude::*;
use walkdir::WalkDir;

use crate::java::{parse_bytes, ParseDiagnostic, ParseError};

#[derive(Debug, Clone, Default)]
pub struct Snapshot {
    /// Entities of all files, files in path order.
    pub entities: Vec<ClassEntity>,
    pub diagnostics: Vec<ParseDiagnostic>,
    /// Files that yielded nothing usable.
    pub errors: Vec<ParseError>,
}

/// Parses `(relative path, bytes)` pairs in parallel. The result does not
/// depend on the input order.
pub fn parse_files(mut files: Vec<(String, Vec<u8>)>) -> Snapshot {
    files.sort_by(|a, b| a.0.cmp(&b.0));
    let parsed: Vec<_> = files
        .par_iter()
        .map(|(path, bytes)| parse_bytes(bytes, path))
        .collect();
    let mut snap = Snapshot::default();
    for r in parsed {
        match r {
            Ok(unit) => {
                snap.entities.extend(unit.entities);
                snap.diagnostics.extend(unit.diagnostics);
            }
            Err(e) => snap.errors.push(e),
        }
    }
    snap
}

/// `.java` files under `root`, as sorted `/`-separated relative paths.
pub fn java_files(root: &Path) -> std::io::Result<Vec<(String, PathBuf)>> {
    let mut out = Vec::new();
    let walker = WalkDir::new(root)
        .follow_links(false)
        .into_iter()
        .filter_entry(|e| e.depth() == 0 || !e.file_name().to_string_lossy().starts_with('.'));
    for entry in walker {
        let entry = entry.map_err(std::io::Error::other)?;
        if !entry.file_type().is_file() || entry.path().extension().is_none_or(|x| x != "java") {
            continue;
        }
        let rel = entry
            .path()
            .strip_prefix(root)
            .unwrap_or(entry.path())
            .components()
            .map(|c| c.as_os_str().to_string_lossy().into_owned())
            .collect::<Vec<_>>()
            .join("/");
        out.push((rel, entry.into_path()));
    }
    out.sort();
    Ok(out)
}

/// Parses every `.java` file below `root`.
pub fn load_snapshot(root: &Path) -> std::io::Result<Snapshot> {
    let files = java_files(root)?
        .into_iter()
        .map(|(rel, path)| std::fs::read(&path).map(|b| (rel, b)))
        .collect::<std::io::Result<Vec<_>>>()?;
    Ok(parse_files(files))
}
