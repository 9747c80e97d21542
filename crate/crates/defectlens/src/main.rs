use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use defectlens::config::RunConfig;
use defectlens::pipeline::{self, ErrorKind, Layout, StageError, StageResult};
use defectlens::{formats, report};
use defectlens_core::dataset::Suite;

/// Java class metrics, defect mining and defect-prediction evaluation.
#[derive(Debug, Parser)]
#[command(name = "defectlens", version)]
struct Cli {
    /// Run configuration (TOML).
    #[arg(long, short, global = true)]
    config: Option<PathBuf>,
    /// Output root. Overrides DEFECTLENS_OUT and the config file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Find release windows, fix commits and defective classes in a git clone.
    Mine {
        repo: PathBuf,
        /// Project name; defaults to the repository directory name.
        #[arg(long)]
        project: Option<String>,
        /// Issue creation times, one JSON object per line.
        #[arg(long)]
        issues: Option<PathBuf>,
    },
    /// Compute class metrics of a source tree or of a repository revision.
    Metrics {
        snapshot: PathBuf,
        #[arg(long)]
        project: Option<String>,
        /// Read the tree of this revision from the repository at SNAPSHOT.
        #[arg(long)]
        rev: Option<String>,
        /// Store as this release; without --rev, the release's mined
        /// snapshot commit is read from the repository.
        #[arg(long, conflicts_with = "all_releases")]
        release: Option<usize>,
        /// Measure every mined release of the repository at SNAPSHOT.
        #[arg(long, conflicts_with = "rev")]
        all_releases: bool,
    },
    /// Join metrics and labels of every release into the project dataset.
    Dataset { project: String },
    /// Cross-validate the configured models on one metric suite.
    Evaluate {
        dataset: PathBuf,
        #[arg(long)]
        suite: String,
    },
    /// VIF screening and permutation importance.
    Importance { dataset: PathBuf },
    /// Summaries, significance tests and figures over a run directory.
    Report { run_dir: PathBuf },
    /// Every stage for every configured project, then the report.
    Run,
}

fn project_name(explicit: Option<String>, path: &Path) -> StageResult<String> {
    let name = match explicit {
        Some(n) => n,
        None => std::fs::canonicalize(path)
            .ok()
            .and_then(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()))
            .ok_or_else(|| StageError::config(format!("cannot name a project after {}; pass --project", path.display())))?,
    };
    if defectlens::config::valid_name(&name) {
        Ok(name)
    } else {
        Err(StageError::config(format!("invalid project name {name:?}")))
    }
}

fn report_diagnostics<T: std::fmt::Display>(items: &[T]) {
    for d in items {
        eprintln!("warning: {d}");
    }
}

fn mine_cmd(layout: &Layout, cfg: &RunConfig, repo: &Path, project: &str, issues: Option<&Path>) -> StageResult<()> {
    let o = pipeline::run_mine(layout, project, repo, issues, cfg)?;
    report_diagnostics(&o.diagnostics);
    eprintln!(
        "{project}: {} windows, {} fix commits, {} defective labels",
        o.windows.len(),
        o.fixes.len(),
        o.releases
            .iter()
            .map(|r| r.labels.iter().filter(|l| l.defective).count())
            .sum::<usize>()
    );
    Ok(())
}

fn metrics_cmd(
    layout: &Layout,
    snapshot: &Path,
    project: &str,
    rev: Option<String>,
    release: Option<usize>,
    all: bool,
) -> StageResult<()> {
    if all {
        return pipeline::run_metrics_for_windows(layout, project, snapshot);
    }
    let rev = match (rev, release) {
        (Some(r), _) => Some(r),
        (None, Some(n)) if snapshot.join(".git").exists() => {
            let windows = formats::read_windows_csv(&pipeline::read_input(&layout.windows(project))?)
                .map_err(|e| StageError::data(e.to_string()))?;
            let w = windows
                .into_iter()
                .find(|w| w.index == n)
                .ok_or_else(|| StageError::data(format!("no mined release {n} for {project}")))?;
            Some(w.snapshot_commit)
        }
        _ => None,
    };
    let snap = match rev {
        Some(r) => {
            let repo = defectlens::git::Repo::open(snapshot).map_err(|e| StageError::data(e.to_string()))?;
            defectlens::mine::snapshot_at(&repo, &r).map_err(|e| StageError::data(e.to_string()))?
        }
        None => defectlens::snapshot::load_snapshot(snapshot)
            .map_err(|e| StageError::data(format!("{}: {e}", snapshot.display())))?,
    };
    report_diagnostics(&snap.diagnostics);
    report_diagnostics(&snap.errors);
    let vectors = pipeline::measure(snap.entities)?;
    let path = match release {
        Some(n) => layout.metrics(project, n),
        None => layout.project(project).join("metrics").join("snapshot").join("metrics.csv"),
    };
    pipeline::write_output(&path, &formats::metrics_csv(&vectors))?;
    eprintln!("{}: {} classes", path.display(), vectors.len());
    Ok(())
}

fn dataset_cmd(layout: &Layout, cfg: &RunConfig, project: &str) -> StageResult<()> {
    let o = pipeline::run_dataset(layout, project, cfg)?;
    for (release, fqn) in &o.orphan_labels {
        eprintln!("warning: release {release}: label for {fqn} has no metrics");
    }
    eprintln!(
        "{project}: {} rows, {} after removing duplicates",
        o.assembled.len(),
        o.dataset.len()
    );
    Ok(())
}

fn run_project(layout: &Layout, cfg: &RunConfig, p: &defectlens::config::ProjectConfig) -> StageResult<()> {
    let outcome = pipeline::run_mine(layout, &p.name, &p.repo, p.issues.as_deref(), cfg)?;
    report_diagnostics(&outcome.diagnostics);
    for r in outcome.releases {
        pipeline::write_metrics(layout, &p.name, r.window.index, &pipeline::measure(r.entities)?)?;
    }
    pipeline::run_dataset(layout, &p.name, cfg)?;
    let dataset = pipeline::read_dataset(&layout.dataset(&p.name))?;
    for suite in cfg.suite_list()? {
        pipeline::run_evaluate(layout, &dataset, suite, cfg)?;
    }
    pipeline::run_importance(layout, &dataset, cfg)?;
    Ok(())
}

fn run_all(layout: &Layout, cfg: &RunConfig) -> StageResult<()> {
    if cfg.projects.is_empty() {
        return Err(StageError::config("the configuration lists no [[project]]"));
    }
    let failures: Vec<(String, StageError)> = cfg
        .projects
        .par_iter()
        .filter_map(|p| run_project(layout, cfg, p).err().map(|e| (p.name.clone(), e)))
        .collect();
    for (name, e) in &failures {
        eprintln!("error: {name}: {e}");
    }
    let written = report::collect(&layout.root, cfg.alpha).and_then(|r| report::write(&r, &layout.report_dir()));
    match (failures.into_iter().max_by_key(|f| f.1.kind), written) {
        (Some((name, e)), _) => Err(StageError {
            kind: e.kind,
            message: format!("project {name} failed"),
        }),
        (None, Err(e)) => Err(e),
        (None, Ok(_)) => Ok(()),
    }
}

fn dispatch(cli: Cli) -> StageResult<()> {
    let cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let layout = Layout::new(cfg.out_root(cli.out.as_deref()));
    match cli.command {
        Command::Mine { repo, project, issues } => {
            let project = project_name(project, &repo)?;
            mine_cmd(&layout, &cfg, &repo, &project, issues.as_deref())
        }
        Command::Metrics {
            snapshot,
            project,
            rev,
            release,
            all_releases,
        } => {
            let project = project_name(project, &snapshot)?;
            metrics_cmd(&layout, &snapshot, &project, rev, release, all_releases)
        }
        Command::Dataset { project } => {
            let project = project_name(Some(project), Path::new(""))?;
            dataset_cmd(&layout, &cfg, &project)
        }
        Command::Evaluate { dataset, suite } => {
            let suite: Suite = suite
                .parse()
                .map_err(|_| StageError::config(format!("unknown suite {suite:?}; expected LOC, CK, OTHER or CK+OTHER")))?;
            let d = pipeline::read_dataset(&dataset)?;
            if d.is_empty() {
                return Err(StageError::data(format!("{} has no rows", dataset.display())));
            }
            for path in pipeline::run_evaluate(&layout, &d, suite, &cfg)? {
                eprintln!("wrote {}", path.display());
            }
            Ok(())
        }
        Command::Importance { dataset } => {
            let d = pipeline::read_dataset(&dataset)?;
            if d.is_empty() {
                return Err(StageError::data(format!("{} has no rows", dataset.display())));
            }
            for (project, o) in pipeline::run_importance(&layout, &d, &cfg)? {
                if o.ranking.is_none() {
                    eprintln!("{project}: excluded from importance analysis (VIF at or above {})", cfg.vif.severe);
                }
            }
            Ok(())
        }
        Command::Report { run_dir } => {
            let r = report::collect(&run_dir, cfg.alpha)?;
            let files = report::write(&r, &run_dir.join("report"))?;
            eprintln!("wrote {} report files", files.len());
            Ok(())
        }
        Command::Run => run_all(&layout, &cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(ErrorKind::Config as u8),
            };
        }
    };
    let outcome = std::panic::catch_unwind(|| dispatch(cli));
    match outcome {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.kind as u8)
        }
        Err(_) => ExitCode::from(ErrorKind::Internal as u8),
    }
}
