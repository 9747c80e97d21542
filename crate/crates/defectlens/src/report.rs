//! Run report: score distributions per suite and model, significance tests,
//! the aggregated importance-rank distribution and the VIF table.
//!
//! Reads stage outputs only and writes under `<run>/report/`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use defectlens_core::dataset::Suite;
use defectlens_core::learn::{ModelKind, RankSummary};
use defectlens_core::stats::{five_number_summary, kruskal_wallis, mann_whitney, FiveNumber, TestResult};

use crate::formats::{self, ImportanceRow, ScoreRow, VifRow};
use crate::pipeline::{self, StageError, StageResult};

pub const SCORE_METRICS: [&str; 4] = ["precision", "recall", "f_minority", "auc_weighted"];
/// Metrics the significance tests are run on.
pub const TESTED_METRICS: [&str; 2] = ["f_minority", "auc_weighted"];

fn metric_value(r: &ScoreRow, metric: &str) -> f64 {
    match metric {
        "precision" => r.precision,
        "recall" => r.recall,
        "f_minority" => r.f_minority,
        "auc_weighted" => r.auc_weighted,
        _ => unreachable!("unknown score metric {metric}"),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreSummary {
    pub suite: String,
    pub model: String,
    pub metric: String,
    pub n: usize,
    pub summary: FiveNumber,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TestRow {
    pub suite: String,
    pub metric: String,
    pub test: &'static str,
    pub groups: Vec<String>,
    pub result: Result<TestResult, String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub scores: Vec<ScoreSummary>,
    pub tests: Vec<TestRow>,
    pub ranks: Vec<RankSummary>,
    pub vif: Vec<(String, VifRow)>,
    /// Projects whose importance file has no rows.
    pub excluded: Vec<String>,
}

fn suite_order(s: &str) -> (usize, String) {
    let pos = Suite::ALL.iter().position(|x| x.name() == s).unwrap_or(usize::MAX);
    (pos, s.to_string())
}

fn model_order(m: &str) -> (usize, String) {
    let pos = ModelKind::ALL.iter().position(|x| x.name() == m).unwrap_or(usize::MAX);
    (pos, m.to_string())
}

/// Fold-level scores grouped by suite, then model, in canonical order.
fn group_scores(rows: &[ScoreRow]) -> Vec<(String, Vec<(String, Vec<&ScoreRow>)>)> {
    let mut by: BTreeMap<(usize, String), BTreeMap<(usize, String), Vec<&ScoreRow>>> = BTreeMap::new();
    for r in rows {
        by.entry(suite_order(&r.suite))
            .or_default()
            .entry(model_order(&r.model))
            .or_default()
            .push(r);
    }
    by.into_iter()
        .map(|((_, s), models)| (s, models.into_iter().map(|((_, m), v)| (m, v)).collect()))
        .collect()
}

/// Builds the report from in-memory stage outputs.
pub fn compose(
    scores: &[ScoreRow],
    importance: &[ImportanceRow],
    vif: &[(String, VifRow)],
    excluded: Vec<String>,
    alpha: f64,
) -> Report {
    let mut summaries = Vec::new();
    let mut tests = Vec::new();
    for (suite, models) in group_scores(scores) {
        for metric in SCORE_METRICS {
            for (model, rows) in &models {
                let values: Vec<f64> = rows.iter().map(|r| metric_value(r, metric)).collect();
                summaries.push(ScoreSummary {
                    suite: suite.clone(),
                    model: model.clone(),
                    metric: metric.to_string(),
                    n: values.len(),
                    summary: five_number_summary(&values),
                });
            }
        }
        for metric in TESTED_METRICS {
            let samples: Vec<(String, Vec<f64>)> = models
                .iter()
                .map(|(m, rows)| (m.clone(), rows.iter().map(|r| metric_value(r, metric)).collect()))
                .collect();
            if samples.len() >= 2 {
                let groups: Vec<&[f64]> = samples.iter().map(|s| s.1.as_slice()).collect();
                tests.push(TestRow {
                    suite: suite.clone(),
                    metric: metric.to_string(),
                    test: "kruskal-wallis",
                    groups: samples.iter().map(|s| s.0.clone()).collect(),
                    result: kruskal_wallis(&groups, alpha).map_err(|e| e.to_string()),
                });
            }
            for i in 0..samples.len() {
                for j in i + 1..samples.len() {
                    tests.push(TestRow {
                        suite: suite.clone(),
                        metric: metric.to_string(),
                        test: "mann-whitney",
                        groups: vec![samples[i].0.clone(), samples[j].0.clone()],
                        result: mann_whitney(&samples[i].1, &samples[j].1, alpha).map_err(|e| e.to_string()),
                    });
                }
            }
        }
    }
    Report {
        scores: summaries,
        tests,
        ranks: pipeline::rank_summaries(importance),
        vif: vif.to_vec(),
        excluded,
    }
}

fn find_files(root: &Path, depth: usize, accept: impl Fn(&Path) -> bool) -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = walkdir::WalkDir::new(root)
        .min_depth(depth)
        .max_depth(depth)
        .into_iter()
        .filter_map(Result::ok)
        .filter(|e| e.file_type().is_file() && accept(e.path()))
        .map(|e| e.into_path())
        .collect();
    files.sort();
    files
}

fn parent_names(path: &Path, root: &Path) -> Vec<String> {
    path.strip_prefix(root)
        .unwrap_or(path)
        .components()
        .map(|c| c.as_os_str().to_string_lossy().into_owned())
        .collect()
}

fn read_with<T>(path: &Path, parse: impl FnOnce(&str) -> Result<T, formats::FormatError>) -> StageResult<T> {
    parse(&pipeline::read_input(path)?).map_err(|e| StageError::data(format!("{}: {e}", path.display())))
}

/// Collects every stage output under `run_dir` and composes the report.
pub fn collect(run_dir: &Path, alpha: f64) -> StageResult<Report> {
    if !run_dir.is_dir() {
        return Err(StageError::data(format!("run directory {} not found", run_dir.display())));
    }
    let score_files = find_files(run_dir, 4, |p| {
        let parts = parent_names(p, run_dir);
        parts.len() == 4 && parts[1] == "evaluate" && parts[3] == "scores.csv"
    });
    if score_files.is_empty() {
        return Err(StageError::data(format!(
            "no scores.csv under {}; run `evaluate` first",
            run_dir.display()
        )));
    }
    let mut scores = Vec::new();
    for f in &score_files {
        scores.extend(read_with(f, formats::read_scores_csv)?);
    }
    let imp_files = find_files(run_dir, 3, |p| {
        let parts = parent_names(p, run_dir);
        parts[1] == "importance" && parts[2] == "importance.csv"
    });
    let mut importance = Vec::new();
    let mut excluded = Vec::new();
    for f in &imp_files {
        let rows = read_with(f, formats::read_importance_csv)?;
        if rows.is_empty() {
            excluded.push(parent_names(f, run_dir)[0].clone());
        }
        importance.extend(rows);
    }
    let vif_files = find_files(run_dir, 3, |p| {
        let parts = parent_names(p, run_dir);
        parts[1] == "importance" && parts[2] == "vif.csv"
    });
    let mut vif = Vec::new();
    for f in &vif_files {
        let project = parent_names(f, run_dir)[0].clone();
        vif.extend(read_with(f, formats::read_vif_csv)?.into_iter().map(|r| (project.clone(), r)));
    }
    Ok(compose(&scores, &importance, &vif, excluded, alpha))
}

fn num(x: f64) -> String {
    if x.is_infinite() {
        "inf".into()
    } else {
        format!("{x:.6}")
    }
}

fn csv_text(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header).expect("in-memory writer");
    for r in rows {
        w.write_record(&r).expect("in-memory writer");
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("UTF-8 fields")
}

fn five(s: &FiveNumber) -> Vec<String> {
    vec![num(s.min), num(s.q1), num(s.median), num(s.q3), num(s.max)]
}

pub fn scores_summary_csv(r: &Report) -> String {
    csv_text(
        &["suite", "model", "metric", "n", "min", "q1", "median", "q3", "max"],
        r.scores
            .iter()
            .map(|s| {
                let mut row = vec![s.suite.clone(), s.model.clone(), s.metric.clone(), s.n.to_string()];
                row.extend(five(&s.summary));
                row
            })
            .collect(),
    )
}

pub fn tests_csv(r: &Report) -> String {
    csv_text(
        &[
            "suite",
            "metric",
            "test",
            "groups",
            "statistic",
            "p_value",
            "significant",
            "note",
        ],
        r.tests
            .iter()
            .map(|t| {
                let mut row = vec![t.suite.clone(), t.metric.clone(), t.test.to_string(), t.groups.join(" ")];
                match &t.result {
                    Ok(x) => {
                        let mut notes = Vec::new();
                        if x.degenerate {
                            notes.push("identical samples");
                        }
                        if x.small_sample {
                            notes.push("small sample");
                        }
                        row.extend([
                            num(x.statistic),
                            num(x.p_value),
                            u8::from(x.significant).to_string(),
                            notes.join("; "),
                        ]);
                    }
                    Err(e) => row.extend([String::new(), String::new(), String::new(), e.clone()]),
                }
                row
            })
            .collect(),
    )
}

pub fn rank_summary_csv(r: &Report) -> String {
    csv_text(
        &["metric", "n", "min", "q1", "median", "q3", "max"],
        r.ranks
            .iter()
            .map(|s| {
                let mut row = vec![s.feature.clone(), s.count.to_string()];
                row.extend(five(&s.summary));
                row
            })
            .collect(),
    )
}

pub fn vif_table_csv(r: &Report) -> String {
    csv_text(
        &["project", "feature", "vif", "flag"],
        r.vif
            .iter()
            .map(|(p, v)| vec![p.clone(), v.feature.clone(), v.vif.map(num).unwrap_or_default(), v.flag.clone()])
            .collect(),
    )
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Box-and-whisker chart of five-number summaries. Whiskers span min to max.
pub fn boxplot_svg(title: &str, y_label: &str, boxes: &[(String, FiveNumber)], range: (f64, f64)) -> String {
    let (w, h) = (120.0 + 90.0 * boxes.len().max(1) as f64, 360.0);
    let (left, right, top, bottom) = (70.0, 20.0, 40.0, 50.0);
    let (lo, hi) = if range.1 > range.0 { range } else { (range.0 - 1.0, range.0 + 1.0) };
    let y = |v: f64| top + (hi - v) / (hi - lo) * (h - top - bottom);
    let step = (w - left - right) / boxes.len().max(1) as f64;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.0} {h:.0}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="20" text-anchor="middle" font-size="14">{}</text>"#,
        w / 2.0,
        escape(title)
    );
    for i in 0..=4 {
        let v = lo + (hi - lo) * i as f64 / 4.0;
        let _ = writeln!(
            s,
            r##"<line x1="{left:.1}" x2="{:.1}" y1="{y:.1}" y2="{y:.1}" stroke="#ddd"/><text x="{:.1}" y="{:.1}" text-anchor="end">{v:.2}</text>"##,
            w - right,
            left - 6.0,
            y(v) + 4.0,
            y = y(v)
        );
    }
    let _ = writeln!(
        s,
        r#"<text transform="translate(16 {:.1}) rotate(-90)" text-anchor="middle">{}</text>"#,
        (top + h - bottom) / 2.0,
        escape(y_label)
    );
    for (i, (label, f)) in boxes.iter().enumerate() {
        let cx = left + step * (i as f64 + 0.5);
        let half = (step * 0.3).min(30.0);
        let _ = writeln!(
            s,
            r#"<g><line x1="{cx:.1}" x2="{cx:.1}" y1="{:.1}" y2="{:.1}" stroke="black"/><line x1="{:.1}" x2="{:.1}" y1="{:.1}" y2="{:.1}" stroke="black"/><line x1="{:.1}" x2="{:.1}" y1="{:.1}" y2="{:.1}" stroke="black"/><rect x="{:.1}" y="{:.1}" width="{:.1}" height="{:.1}" fill="steelblue" fill-opacity="0.35" stroke="black"/><line x1="{:.1}" x2="{:.1}" y1="{:.1}" y2="{:.1}" stroke="black" stroke-width="2"/><text x="{cx:.1}" y="{:.1}" text-anchor="middle">{}</text></g>"#,
            y(f.max),
            y(f.min),
            cx - half / 2.0,
            cx + half / 2.0,
            y(f.max),
            y(f.max),
            cx - half / 2.0,
            cx + half / 2.0,
            y(f.min),
            y(f.min),
            cx - half,
            y(f.q3),
            2.0 * half,
            (y(f.q1) - y(f.q3)).max(0.5),
            cx - half,
            cx + half,
            y(f.median),
            y(f.median),
            h - bottom + 18.0,
            escape(label)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn slug(s: &str) -> String {
    s.chars()
        .map(|c| if c.is_ascii_alphanumeric() { c.to_ascii_lowercase() } else { '-' })
        .collect::<String>()
        .replace("--", "-")
}

fn markdown(r: &Report, figures: &[(String, String)]) -> String {
    let mut md = String::from("# Defect prediction run report\n\n");
    md.push_str("## Scores\n\nFold-level scores pooled over projects.\n\n");
    let mut suites: Vec<&str> = r.scores.iter().map(|s| s.suite.as_str()).collect();
    suites.dedup();
    for suite in suites {
        let _ = writeln!(md, "### Suite {suite}\n");
        md.push_str("| model | metric | n | min | q1 | median | q3 | max |\n|---|---|---|---|---|---|---|---|\n");
        for s in r.scores.iter().filter(|s| s.suite == suite) {
            let f = &s.summary;
            let _ = writeln!(
                md,
                "| {} | {} | {} | {:.3} | {:.3} | {:.3} | {:.3} | {:.3} |",
                s.model, s.metric, s.n, f.min, f.q1, f.median, f.q3, f.max
            );
        }
        md.push('\n');
    }
    md.push_str("## Significance tests\n\n");
    if r.tests.is_empty() {
        md.push_str("No suite has scores for two or more models.\n\n");
    } else {
        md.push_str("| suite | metric | test | groups | statistic | p | significant |\n|---|---|---|---|---|---|---|\n");
        for t in &r.tests {
            let (stat, p, sig) = match &t.result {
                Ok(x) => (format!("{:.4}", x.statistic), format!("{:.4}", x.p_value), if x.significant { "yes" } else { "no" }.to_string()),
                Err(e) => (String::new(), String::new(), e.clone()),
            };
            let _ = writeln!(md, "| {} | {} | {} | {} | {stat} | {p} | {sig} |", t.suite, t.metric, t.test, t.groups.join(" vs "));
        }
        md.push('\n');
    }
    md.push_str("## Importance ranks\n\nRank 1 is the most important metric.\n\n");
    if r.ranks.is_empty() {
        md.push_str("No importance rankings.\n\n");
    } else {
        md.push_str("| metric | projects | min | q1 | median | q3 | max |\n|---|---|---|---|---|---|---|\n");
        for s in &r.ranks {
            let f = &s.summary;
            let _ = writeln!(md, "| {} | {} | {:.2} | {:.2} | {:.2} | {:.2} | {:.2} |", s.feature, s.count, f.min, f.q1, f.median, f.q3, f.max);
        }
        md.push('\n');
    }
    if !r.excluded.is_empty() {
        let _ = writeln!(md, "Excluded for collinearity: {}.\n", r.excluded.join(", "));
    }
    md.push_str("## VIF\n\n");
    if r.vif.is_empty() {
        md.push_str("No VIF tables.\n\n");
    } else {
        md.push_str("| project | feature | VIF | flag |\n|---|---|---|---|\n");
        for (p, v) in &r.vif {
            let vif = v.vif.map(|x| if x.is_infinite() { "inf".to_string() } else { format!("{x:.3}") }).unwrap_or_else(|| "n/a".into());
            let _ = writeln!(md, "| {p} | {} | {vif} | {} |", v.feature, v.flag);
        }
        md.push('\n');
    }
    md.push_str("## Figures\n\n");
    for (title, file) in figures {
        let _ = writeln!(md, "- [{title}]({file})");
    }
    md
}

/// Writes every report file under `dir` and returns their paths.
pub fn write(r: &Report, dir: &Path) -> StageResult<Vec<PathBuf>> {
    let mut files: Vec<(PathBuf, String)> = vec![
        (dir.join("scores_summary.csv"), scores_summary_csv(r)),
        (dir.join("tests.csv"), tests_csv(r)),
        (dir.join("rank_summary.csv"), rank_summary_csv(r)),
        (dir.join("vif.csv"), vif_table_csv(r)),
    ];
    let mut figures = Vec::new();
    let mut suites: Vec<&str> = r.scores.iter().map(|s| s.suite.as_str()).collect();
    suites.dedup();
    for suite in suites {
        for metric in SCORE_METRICS {
            let boxes: Vec<(String, FiveNumber)> = r
                .scores
                .iter()
                .filter(|s| s.suite == suite && s.metric == metric)
                .map(|s| (s.model.clone(), s.summary))
                .collect();
            let name = format!("figures/scores-{}-{}.svg", slug(suite), slug(metric));
            let title = format!("{metric} by model, suite {suite}");
            files.push((dir.join(&name), boxplot_svg(&title, metric, &boxes, (0.0, 1.0))));
            figures.push((title, name));
        }
    }
    if !r.ranks.is_empty() {
        let boxes: Vec<(String, FiveNumber)> = r.ranks.iter().map(|s| (s.feature.clone(), s.summary)).collect();
        let top = boxes.iter().map(|b| b.1.max).fold(1.0, f64::max);
        let name = "figures/ranks.svg".to_string();
        let title = "Importance rank by metric (lower is better)".to_string();
        files.push((dir.join(&name), boxplot_svg(&title, "rank", &boxes, (1.0, top.max(2.0)))));
        figures.push((title, name));
    }
    files.push((dir.join("report.md"), markdown(r, &figures)));
    for (path, text) in &files {
        pipeline::write_output(path, text)?;
    }
    Ok(files.into_iter().map(|f| f.0).collect())
}
