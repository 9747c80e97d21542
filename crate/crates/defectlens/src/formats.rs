//! CSV artifacts exchanged between pipeline stages, and atomic file writes.
//!
//! All files are UTF-8 with LF line ends. Fields are quoted only when they
//! need to be.

use std::path::Path;

use chrono::{DateTime, SecondsFormat, Utc};
use defectlens_core::dataset::{Dataset, DatasetRow, Metric};
use defectlens_core::metrics::MetricVector;
use defectlens_core::miner::{DefectLabel, ReleaseWindow};
use defectlens_core::stats::{VifFlag, VifReport};

use crate::mine::DefectFixCommit;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("malformed CSV at line {line}: {reason}")]
    MalformedCsv { line: u64, reason: String },
    #[error("header mismatch: expected `{expected}`, found `{found}`")]
    HeaderMismatch { expected: String, found: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Writes `bytes` to `path` through a temporary file in the same directory,
/// creating parent directories as needed.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    std::io::Write::write_all(&mut tmp, bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

pub fn timestamp(t: DateTime<Utc>) -> String {
    t.to_rfc3339_opts(SecondsFormat::Secs, true)
}

fn parse_timestamp(s: &str, line: u64) -> Result<DateTime<Utc>, FormatError> {
    DateTime::parse_from_rfc3339(s)
        .map(|t| t.with_timezone(&Utc))
        .map_err(|e| malformed(line, format!("timestamp {s:?}: {e}")))
}

fn malformed(line: u64, reason: impl Into<String>) -> FormatError {
    FormatError::MalformedCsv {
        line,
        reason: reason.into(),
    }
}

fn writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> String {
    let bytes = w.into_inner().expect("in-memory CSV writer");
    String::from_utf8(bytes).expect("CSV fields are UTF-8")
}

fn row(w: &mut csv::Writer<Vec<u8>>, fields: &[String]) {
    w.write_record(fields).expect("in-memory CSV writer");
}

/// Parsed records with their 1-based line numbers, after checking the header.
fn records(text: &str, header: &[&str]) -> Result<Vec<(u64, csv::StringRecord)>, FormatError> {
    let mut rd = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(text.as_bytes());
    let found = rd
        .headers()
        .map_err(|e| malformed(1, e.to_string()))?
        .clone();
    if found.iter().ne(header.iter().copied()) {
        return Err(FormatError::HeaderMismatch {
            expected: header.join(","),
            found: found.iter().collect::<Vec<_>>().join(","),
        });
    }
    let mut out = Vec::new();
    for rec in rd.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            malformed(line, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() != header.len() {
            return Err(malformed(
                line,
                format!("{} fields, expected {}", rec.len(), header.len()),
            ));
        }
        out.push((line, rec));
    }
    Ok(out)
}

fn num<T: std::str::FromStr>(s: &str, line: u64, what: &str) -> Result<T, FormatError> {
    s.trim()
        .parse()
        .map_err(|_| malformed(line, format!("{what}: {s:?} is not a number")))
}

fn flag(s: &str, line: u64) -> Result<bool, FormatError> {
    match s.trim() {
        "1" => Ok(true),
        "0" => Ok(false),
        other => Err(malformed(line, format!("expected 0 or 1, found {other:?}"))),
    }
}

fn bit(b: bool) -> String {
    u8::from(b).to_string()
}

/// Feature value as serialized: CD with six decimals, counts as integers.
pub fn feature_text(metric: Metric, value: f64) -> String {
    if metric == Metric::Cd {
        format!("{value:.6}")
    } else if value.fract() == 0.0 && value.abs() < 1e15 {
        format!("{value:.0}")
    } else {
        format!("{value}")
    }
}

pub const METRICS_HEADER: [&str; 13] = [
    "fqn", "LOC", "WMC", "DIT", "NOC", "CBO", "RFC", "LCOM5", "NPA", "NPM", "NLE", "CBOI", "CD",
];

pub fn metrics_csv(vectors: &[MetricVector]) -> String {
    let mut w = writer();
    row(&mut w, &METRICS_HEADER.map(String::from));
    for v in vectors {
        let mut fields = vec![v.fqn.clone()];
        fields.extend(
            Metric::ALL
                .iter()
                .zip(v.features())
                .map(|(m, x)| feature_text(*m, x)),
        );
        row(&mut w, &fields);
    }
    finish(w)
}

pub fn read_metrics_csv(text: &str) -> Result<Vec<MetricVector>, FormatError> {
    records(text, &METRICS_HEADER)?
        .into_iter()
        .map(|(line, r)| {
            let n = |i: usize| num::<u32>(&r[i], line, METRICS_HEADER[i]);
            let cd: f64 = num(&r[12], line, "CD")?;
            if !(0.0..=1.0).contains(&cd) {
                return Err(malformed(line, format!("CD {cd} outside [0,1]")));
            }
            Ok(MetricVector {
                fqn: r[0].to_string(),
                loc: n(1)?,
                wmc: n(2)?,
                dit: n(3)?,
                noc: n(4)?,
                cbo: n(5)?,
                rfc: n(6)?,
                lcom5: n(7)?,
                npa: n(8)?,
                npm: n(9)?,
                nle: n(10)?,
                cboi: n(11)?,
                cd,
            })
        })
        .collect()
}

fn dataset_header(features: &[Metric]) -> Vec<String> {
    let mut h: Vec<String> = ["project", "release", "fqn"].map(String::from).to_vec();
    h.extend(features.iter().map(|m| m.name().to_string()));
    h.push("defective".into());
    h
}

pub fn dataset_csv(d: &Dataset) -> String {
    let mut w = writer();
    row(&mut w, &dataset_header(d.features()));
    for r in d.rows() {
        let mut fields = vec![r.project.clone(), r.release.to_string(), r.fqn.clone()];
        fields.extend(
            d.features()
                .iter()
                .zip(&r.features)
                .map(|(m, x)| feature_text(*m, *x)),
        );
        fields.push(bit(r.defective));
        row(&mut w, &fields);
    }
    finish(w)
}

/// Reads a dataset file. The header must be exactly the canonical one.
pub fn read_dataset_csv(text: &str) -> Result<Dataset, FormatError> {
    let header = dataset_header(&Metric::ALL);
    let names: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut d = Dataset::default();
    for (line, r) in records(text, &names)? {
        let features = (0..Metric::ALL.len())
            .map(|i| num::<f64>(&r[3 + i], line, names[3 + i]))
            .collect::<Result<Vec<_>, _>>()?;
        d.push(DatasetRow {
            project: r[0].to_string(),
            release: num(&r[1], line, "release")?,
            fqn: r[2].to_string(),
            features,
            defective: flag(&r[r.len() - 1], line)?,
        })
        .map_err(|e| malformed(line, e.to_string()))?;
    }
    Ok(d)
}

pub fn labels_csv(labels: &[DefectLabel]) -> String {
    let mut w = writer();
    row(&mut w, &["fqn".into(), "defective".into()]);
    for l in labels {
        row(&mut w, &[l.fqn.clone(), bit(l.defective)]);
    }
    finish(w)
}

pub fn read_labels_csv(text: &str) -> Result<Vec<(String, bool)>, FormatError> {
    records(text, &["fqn", "defective"])?
        .into_iter()
        .map(|(line, r)| Ok((r[0].to_string(), flag(&r[1], line)?)))
        .collect()
}

pub fn provenance_csv(labels: &[DefectLabel]) -> String {
    let mut w = writer();
    row(&mut w, &["fqn", "commit", "file", "line"].map(String::from));
    for l in labels {
        for p in &l.provenance {
            row(
                &mut w,
                &[l.fqn.clone(), p.commit.clone(), p.file.clone(), p.line.to_string()],
            );
        }
    }
    finish(w)
}

pub const WINDOWS_HEADER: [&str; 4] = ["index", "start", "end", "snapshot_commit"];

pub fn windows_csv(windows: &[ReleaseWindow]) -> String {
    let mut w = writer();
    row(&mut w, &WINDOWS_HEADER.map(String::from));
    for x in windows {
        row(
            &mut w,
            &[
                x.index.to_string(),
                timestamp(x.start),
                timestamp(x.end),
                x.snapshot_commit.clone(),
            ],
        );
    }
    finish(w)
}

pub fn read_windows_csv(text: &str) -> Result<Vec<ReleaseWindow>, FormatError> {
    records(text, &WINDOWS_HEADER)?
        .into_iter()
        .map(|(line, r)| {
            Ok(ReleaseWindow {
                index: num(&r[0], line, "index")?,
                start: parse_timestamp(&r[1], line)?,
                end: parse_timestamp(&r[2], line)?,
                snapshot_commit: r[3].to_string(),
            })
        })
        .collect()
}

pub fn fixes_csv(fixes: &[DefectFixCommit]) -> String {
    let mut w = writer();
    row(
        &mut w,
        &["commit", "time", "window", "assigned_at", "issue", "issue_created", "evidence"]
            .map(String::from),
    );
    for f in fixes {
        row(
            &mut w,
            &[
                f.id.clone(),
                timestamp(f.time),
                f.window.map(|x| x.to_string()).unwrap_or_default(),
                timestamp(f.assigned_at),
                f.issue_ref.clone().unwrap_or_default(),
                f.issue_created.map(timestamp).unwrap_or_default(),
                f.evidence.join(";"),
            ],
        );
    }
    finish(w)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreRow {
    pub project: String,
    pub suite: String,
    pub model: String,
    pub fold: usize,
    pub precision: f64,
    pub recall: f64,
    pub f_minority: f64,
    pub auc_weighted: f64,
}

pub const SCORES_HEADER: [&str; 8] = [
    "project",
    "suite",
    "model",
    "fold",
    "precision",
    "recall",
    "f_minority",
    "auc_weighted",
];

pub fn scores_csv(rows: &[ScoreRow]) -> String {
    let mut w = writer();
    row(&mut w, &SCORES_HEADER.map(String::from));
    for s in rows {
        row(
            &mut w,
            &[
                s.project.clone(),
                s.suite.clone(),
                s.model.clone(),
                s.fold.to_string(),
                format!("{:.6}", s.precision),
                format!("{:.6}", s.recall),
                format!("{:.6}", s.f_minority),
                format!("{:.6}", s.auc_weighted),
            ],
        );
    }
    finish(w)
}

pub fn read_scores_csv(text: &str) -> Result<Vec<ScoreRow>, FormatError> {
    records(text, &SCORES_HEADER)?
        .into_iter()
        .map(|(line, r)| {
            let unit = |i: usize| -> Result<f64, FormatError> {
                let v: f64 = num(&r[i], line, SCORES_HEADER[i])?;
                if (0.0..=1.0).contains(&v) {
                    Ok(v)
                } else {
                    Err(malformed(line, format!("{} {v} outside [0,1]", SCORES_HEADER[i])))
                }
            };
            Ok(ScoreRow {
                project: r[0].to_string(),
                suite: r[1].to_string(),
                model: r[2].to_string(),
                fold: num(&r[3], line, "fold")?,
                precision: unit(4)?,
                recall: unit(5)?,
                f_minority: unit(6)?,
                auc_weighted: unit(7)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImportanceRow {
    pub project: String,
    pub metric: String,
    pub importance: f64,
    pub rank: f64,
}

pub const IMPORTANCE_HEADER: [&str; 4] = ["project", "metric", "importance", "rank"];

pub fn importance_csv(rows: &[ImportanceRow]) -> String {
    let mut w = writer();
    row(&mut w, &IMPORTANCE_HEADER.map(String::from));
    for r in rows {
        row(
            &mut w,
            &[
                r.project.clone(),
                r.metric.clone(),
                format!("{:.6}", r.importance),
                format!("{}", r.rank),
            ],
        );
    }
    finish(w)
}

pub fn read_importance_csv(text: &str) -> Result<Vec<ImportanceRow>, FormatError> {
    records(text, &IMPORTANCE_HEADER)?
        .into_iter()
        .map(|(line, r)| {
            Ok(ImportanceRow {
                project: r[0].to_string(),
                metric: r[1].to_string(),
                importance: num(&r[2], line, "importance")?,
                rank: num(&r[3], line, "rank")?,
            })
        })
        .collect()
}

pub const VIF_HEADER: [&str; 3] = ["feature", "vif", "flag"];

fn vif_text(v: Option<f64>) -> String {
    match v {
        None => String::new(),
        Some(x) if x.is_infinite() => "inf".into(),
        Some(x) => format!("{x:.6}"),
    }
}

pub fn vif_csv(report: &VifReport) -> String {
    let mut w = writer();
    row(&mut w, &VIF_HEADER.map(String::from));
    for e in &report.entries {
        row(
            &mut w,
            &[e.feature.clone(), vif_text(e.vif), e.flag.name().to_string()],
        );
    }
    finish(w)
}

#[derive(Debug, Clone, PartialEq)]
pub struct VifRow {
    pub feature: String,
    /// `None` for degenerate features.
    pub vif: Option<f64>,
    pub flag: String,
}

pub fn read_vif_csv(text: &str) -> Result<Vec<VifRow>, FormatError> {
    records(text, &VIF_HEADER)?
        .into_iter()
        .map(|(line, r)| {
            let vif = match r[1].trim() {
                "" => None,
                "inf" => Some(f64::INFINITY),
                s => Some(num(s, line, "vif")?),
            };
            let flag = r[2].to_string();
            let known = [VifFlag::Ok, VifFlag::Investigate, VifFlag::Severe, VifFlag::Degenerate];
            if !known.iter().any(|f| f.name() == flag) {
                return Err(malformed(line, format!("unknown flag {flag:?}")));
            }
            Ok(VifRow {
                feature: r[0].to_string(),
                vif,
                flag,
            })
        })
        .collect()
}
