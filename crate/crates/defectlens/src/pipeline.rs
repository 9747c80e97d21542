//! Pipeline stages. Each stage reads the files of the previous one and
//! writes its own under `<out>/<project>/<stage>/`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use defectlens_core::dataset::{assemble, deduplicate, undersample, Dataset, Metric, Suite};
use defectlens_core::learn::{aggregate_rankings, cross_validate, permutation_importance, ImportanceRanking};
use defectlens_core::metrics::{compute_all, MetricVector};
use defectlens_core::model::ClassEntity;
use defectlens_core::stats::{dataset_vif, screen_features, Screening, VifReport};
use defectlens_core::build_project_model;

use crate::config::RunConfig;
use crate::formats::{self, ImportanceRow, ScoreRow};
use crate::git::Repo;
use crate::mine::{mine, parse_issues, MineOutcome};

/// Exit status class of a failure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ErrorKind {
    Config = 1,
    Data = 2,
    Internal = 3,
}

#[derive(Debug, thiserror::Error)]
#[error("{message}")]
pub struct StageError {
    pub kind: ErrorKind,
    pub message: String,
}

impl StageError {
    pub fn config(message: impl Into<String>) -> Self {
        Self {
            kind: ErrorKind::Config,
            message: message.into(),
        }
    }

    pub fn data(message: impl Into<String>) -> Self {
        Self {
            kind: ErrorKind::Data,
            message: message.into(),
        }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Self {
            kind: ErrorKind::Internal,
            message: message.into(),
        }
    }
}

impl From<crate::config::ConfigError> for StageError {
    fn from(e: crate::config::ConfigError) -> Self {
        StageError::config(e.to_string())
    }
}

pub type StageResult<T> = Result<T, StageError>;

/// Reads an input file; absence or an unreadable file is a data error.
pub fn read_input(path: &Path) -> StageResult<String> {
    std::fs::read_to_string(path)
        .map_err(|e| StageError::data(format!("missing or unreadable input {}: {e}", path.display())))
}

pub fn write_output(path: &Path, text: &str) -> StageResult<()> {
    formats::write_atomic(path, text.as_bytes())
        .map_err(|e| StageError::internal(format!("cannot write {}: {e}", path.display())))
}

fn parse_input<T>(path: &Path, parse: impl FnOnce(&str) -> Result<T, formats::FormatError>) -> StageResult<T> {
    parse(&read_input(path)?).map_err(|e| StageError::data(format!("{}: {e}", path.display())))
}

/// Paths of the output tree.
#[derive(Debug, Clone)]
pub struct Layout {
    pub root: PathBuf,
}

impl Layout {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Self { root: root.into() }
    }

    pub fn project(&self, project: &str) -> PathBuf {
        self.root.join(project)
    }

    pub fn mine_dir(&self, project: &str) -> PathBuf {
        self.project(project).join("mine")
    }

    pub fn windows(&self, project: &str) -> PathBuf {
        self.mine_dir(project).join("windows.csv")
    }

    pub fn labels(&self, project: &str, release: usize) -> PathBuf {
        self.mine_dir(project)
            .join(format!("release-{release}"))
            .join("labels.csv")
    }

    pub fn metrics(&self, project: &str, release: usize) -> PathBuf {
        self.project(project)
            .join("metrics")
            .join(format!("release-{release}"))
            .join("metrics.csv")
    }

    pub fn assembled(&self, project: &str) -> PathBuf {
        self.project(project).join("dataset").join("assembled.csv")
    }

    pub fn dataset(&self, project: &str) -> PathBuf {
        self.project(project).join("dataset").join("dataset.csv")
    }

    pub fn scores(&self, project: &str, suite: Suite) -> PathBuf {
        self.project(project)
            .join("evaluate")
            .join(suite.name())
            .join("scores.csv")
    }

    pub fn vif(&self, project: &str) -> PathBuf {
        self.project(project).join("importance").join("vif.csv")
    }

    pub fn importance(&self, project: &str) -> PathBuf {
        self.project(project).join("importance").join("importance.csv")
    }

    pub fn report_dir(&self) -> PathBuf {
        self.root.join("report")
    }
}

pub fn measure(entities: Vec<ClassEntity>) -> StageResult<Vec<MetricVector>> {
    let model = build_project_model(entities).map_err(|e| StageError::data(e.to_string()))?;
    compute_all(&model).map_err(|e| StageError::data(e.to_string()))
}

/// Mines `repo`, writes the mining outputs, and returns the outcome.
pub fn run_mine(
    layout: &Layout,
    project: &str,
    repo: &Path,
    issues: Option<&Path>,
    cfg: &RunConfig,
) -> StageResult<MineOutcome> {
    let repo = Repo::open(repo).map_err(|e| StageError::data(e.to_string()))?;
    let issues = match issues {
        Some(p) => parse_issues(&read_input(p)?)
            .map_err(|e| StageError::data(format!("{}: {e}", p.display())))?,
        None => BTreeMap::new(),
    };
    let outcome = mine(&repo, &cfg.mine_config(), &issues).map_err(|e| StageError::data(e.to_string()))?;
    let dir = layout.mine_dir(project);
    write_output(&dir.join("windows.csv"), &formats::windows_csv(&outcome.windows))?;
    write_output(&dir.join("fixes.csv"), &formats::fixes_csv(&outcome.fixes))?;
    let diagnostics: String = outcome.diagnostics.iter().map(|d| format!("{d}\n")).collect();
    write_output(&dir.join("diagnostics.txt"), &diagnostics)?;
    for r in &outcome.releases {
        write_output(&layout.labels(project, r.window.index), &formats::labels_csv(&r.labels))?;
        let prov = dir.join(format!("release-{}", r.window.index)).join("provenance.csv");
        write_output(&prov, &formats::provenance_csv(&r.labels))?;
    }
    Ok(outcome)
}

pub fn write_metrics(layout: &Layout, project: &str, release: usize, vectors: &[MetricVector]) -> StageResult<()> {
    write_output(&layout.metrics(project, release), &formats::metrics_csv(vectors))
}

/// Measures every release snapshot of a mined repository.
pub fn run_metrics_for_windows(layout: &Layout, project: &str, repo: &Path) -> StageResult<()> {
    let windows = parse_input(&layout.windows(project), formats::read_windows_csv)?;
    let repo = Repo::open(repo).map_err(|e| StageError::data(e.to_string()))?;
    for w in windows {
        let snap = crate::mine::snapshot_at(&repo, &w.snapshot_commit)
            .map_err(|e| StageError::data(e.to_string()))?;
        write_metrics(layout, project, w.index, &measure(snap.entities)?)?;
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct DatasetOutcome {
    pub assembled: Dataset,
    pub dataset: Dataset,
    pub orphan_labels: Vec<(usize, String)>,
}

/// Joins every release's metrics with its labels, then removes duplicate
/// rows over the whole project.
pub fn run_dataset(layout: &Layout, project: &str, cfg: &RunConfig) -> StageResult<DatasetOutcome> {
    let windows = parse_input(&layout.windows(project), formats::read_windows_csv)?;
    let mut all = Dataset::default();
    let mut orphan_labels = Vec::new();
    for w in &windows {
        let vectors = parse_input(&layout.metrics(project, w.index), formats::read_metrics_csv)?;
        let labels = parse_input(&layout.labels(project, w.index), formats::read_labels_csv)?;
        let release = u32::try_from(w.index).map_err(|_| StageError::data("release index overflow"))?;
        let a = assemble(&vectors, &labels, project, release).map_err(|e| StageError::data(e.to_string()))?;
        orphan_labels.extend(a.orphan_labels.into_iter().map(|f| (w.index, f)));
        all.extend(a.dataset).map_err(|e| StageError::data(e.to_string()))?;
    }
    let mut dataset = deduplicate(&all);
    if cfg.undersample {
        dataset = undersample(&dataset, cfg.seed);
    }
    write_output(&layout.assembled(project), &formats::dataset_csv(&all))?;
    write_output(&layout.dataset(project), &formats::dataset_csv(&dataset))?;
    Ok(DatasetOutcome {
        assembled: all,
        dataset,
        orphan_labels,
    })
}

/// Splits a dataset by its project column, in name order.
pub fn split_projects(d: &Dataset) -> Vec<(String, Dataset)> {
    let mut groups: BTreeMap<&str, Dataset> = BTreeMap::new();
    for r in d.rows() {
        groups
            .entry(r.project.as_str())
            .or_insert_with(|| Dataset::new(d.features().to_vec()).expect("features already distinct"))
            .push(r.clone())
            .expect("rows already validated");
    }
    groups.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn check_project(name: &str) -> StageResult<()> {
    if crate::config::valid_name(name) {
        Ok(())
    } else {
        Err(StageError::data(format!("project name {name:?} cannot be used as a directory")))
    }
}

/// Cross-validates every configured model on one project's rows restricted
/// to `suite`. All models see the same folds.
pub fn evaluate_project(project: &str, d: &Dataset, suite: Suite, cfg: &RunConfig) -> StageResult<Vec<ScoreRow>> {
    let projected = d.select(&suite.metrics()).map_err(|e| StageError::data(e.to_string()))?;
    let (x, y) = (projected.matrix(), projected.labels());
    let mut rows = Vec::new();
    for kind in cfg.model_kinds()? {
        let cv = cross_validate(&x, &y, &cfg.spec(kind), cfg.k, cfg.seed)
            .map_err(|e| StageError::data(format!("{project}, {suite}, {kind}: {e}")))?;
        for (fold, r) in cv.reports.iter().enumerate() {
            rows.push(ScoreRow {
                project: project.to_string(),
                suite: suite.name().to_string(),
                model: kind.name().to_string(),
                fold,
                precision: r.precision,
                recall: r.recall,
                f_minority: r.f_minority,
                auc_weighted: r.auc_weighted,
            });
        }
    }
    Ok(rows)
}

pub fn run_evaluate(layout: &Layout, dataset: &Dataset, suite: Suite, cfg: &RunConfig) -> StageResult<Vec<PathBuf>> {
    let mut written = Vec::new();
    for (project, d) in split_projects(dataset) {
        check_project(&project)?;
        let rows = evaluate_project(&project, &d, suite, cfg)?;
        let path = layout.scores(&project, suite);
        write_output(&path, &formats::scores_csv(&rows))?;
        written.push(path);
    }
    Ok(written)
}

#[derive(Debug, Clone)]
pub struct ImportanceOutcome {
    pub vif: VifReport,
    pub screening: Screening,
    /// `None` when the project is excluded for collinearity.
    pub ranking: Option<ImportanceRanking>,
}

/// VIF screening over the importance candidates, then permutation importance
/// of the kept features unless the project is excluded.
pub fn importance_project(d: &Dataset, cfg: &RunConfig) -> StageResult<ImportanceOutcome> {
    let candidates = Metric::IMPORTANCE_CANDIDATES.to_vec();
    let vif = dataset_vif(d, &candidates, &cfg.thresholds()).map_err(|e| StageError::data(e.to_string()))?;
    let names: Vec<&str> = candidates.iter().map(|m| m.name()).collect();
    let screening = screen_features(&vif, &names);
    if screening.project_excluded {
        return Ok(ImportanceOutcome {
            vif,
            screening,
            ranking: None,
        });
    }
    let kept: Vec<Metric> = screening
        .kept
        .iter()
        .map(|n| n.parse().expect("candidate names are metric names"))
        .collect();
    let projected = d.select(&kept).map_err(|e| StageError::data(e.to_string()))?;
    let (kind, scoring) = cfg.importance()?;
    let kept_names: Vec<&str> = kept.iter().map(|m| m.name()).collect();
    let ranking = permutation_importance(
        &projected.matrix(),
        &projected.labels(),
        &kept_names,
        &cfg.spec(kind),
        cfg.k,
        cfg.repeats,
        cfg.seed,
        scoring,
    )
    .map_err(|e| StageError::data(e.to_string()))?;
    Ok(ImportanceOutcome {
        vif,
        screening,
        ranking: Some(ranking),
    })
}

pub fn importance_rows(project: &str, ranking: Option<&ImportanceRanking>) -> Vec<ImportanceRow> {
    let Some(r) = ranking else { return Vec::new() };
    r.features
        .iter()
        .zip(&r.importance)
        .zip(&r.ranks)
        .map(|((f, i), k)| ImportanceRow {
            project: project.to_string(),
            metric: f.clone(),
            importance: *i,
            rank: *k,
        })
        .collect()
}

pub fn run_importance(layout: &Layout, dataset: &Dataset, cfg: &RunConfig) -> StageResult<Vec<(String, ImportanceOutcome)>> {
    let mut out = Vec::new();
    for (project, d) in split_projects(dataset) {
        check_project(&project)?;
        let o = importance_project(&d, cfg)?;
        write_output(&layout.vif(&project), &formats::vif_csv(&o.vif))?;
        write_output(
            &layout.importance(&project),
            &formats::importance_csv(&importance_rows(&project, o.ranking.as_ref())),
        )?;
        out.push((project, o));
    }
    Ok(out)
}

pub fn read_dataset(path: &Path) -> StageResult<Dataset> {
    parse_input(path, formats::read_dataset_csv)
}

/// Rank distributions over projects, for rankings read back from files.
pub fn rankings_from_rows(rows: &[ImportanceRow]) -> Vec<ImportanceRanking> {
    let mut by_project: BTreeMap<&str, Vec<&ImportanceRow>> = BTreeMap::new();
    for r in rows {
        by_project.entry(r.project.as_str()).or_default().push(r);
    }
    by_project
        .into_values()
        .map(|rs| ImportanceRanking {
            features: rs.iter().map(|r| r.metric.clone()).collect(),
            importance: rs.iter().map(|r| r.importance).collect(),
            ranks: rs.iter().map(|r| r.rank).collect(),
            k: 0,
        })
        .collect()
}

pub use defectlens_core::learn::RankSummary;

pub fn rank_summaries(rows: &[ImportanceRow]) -> Vec<RankSummary> {
    aggregate_rankings(&rankings_from_rows(rows))
}
