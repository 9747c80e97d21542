//! Run configuration, read from a TOML file.
//!
//! Every field is optional; defaults follow the study design. Relative
//! paths are taken relative to the file's directory.

use std::path::{Path, PathBuf};

use defectlens_core::dataset::Suite;
use defectlens_core::learn::{ForestParams, ImportanceScore, ModelKind, ModelSpec, TreeParams};
use defectlens_core::miner::FixPatterns;
use defectlens_core::stats::VifThresholds;
use serde::Deserialize;

use crate::mine::MineConfig;

pub const OUT_ENV: &str = "DEFECTLENS_OUT";
pub const DEFAULT_OUT: &str = "defectlens-out";

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        source: toml::de::Error,
    },
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProjectConfig {
    pub name: String,
    pub repo: PathBuf,
    #[serde(default)]
    pub issues: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FixPatternConfig {
    pub keywords: Vec<String>,
    pub issue_refs: bool,
}

impl Default for FixPatternConfig {
    fn default() -> Self {
        let p = FixPatterns::default();
        Self {
            keywords: p.keywords,
            issue_refs: p.issue_refs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VifConfig {
    pub investigate: f64,
    pub severe: f64,
}

impl Default for VifConfig {
    fn default() -> Self {
        let t = VifThresholds::default();
        Self {
            investigate: t.investigate,
            severe: t.severe,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TreeConfig {
    pub max_depth: Option<usize>,
    pub min_samples_leaf: usize,
}

impl Default for TreeConfig {
    fn default() -> Self {
        let t = TreeParams::default();
        Self {
            max_depth: t.max_depth,
            min_samples_leaf: t.min_samples_leaf,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ForestConfig {
    pub n_trees: usize,
    /// Unset means ⌈√p⌉.
    pub features_per_split: Option<usize>,
    pub bootstrap: bool,
}

impl Default for ForestConfig {
    fn default() -> Self {
        let f = ForestParams::default();
        Self {
            n_trees: f.n_trees,
            features_per_split: f.features_per_split,
            bootstrap: f.bootstrap,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    #[serde(rename = "project")]
    pub projects: Vec<ProjectConfig>,
    pub out: Option<PathBuf>,
    pub interval_months: u32,
    pub fix_patterns: FixPatternConfig,
    pub models: Vec<String>,
    pub suites: Vec<String>,
    pub k: usize,
    pub repeats: usize,
    pub seed: u64,
    pub alpha: f64,
    /// `auc_weighted` or `f_minority`.
    pub importance_score: String,
    pub importance_model: String,
    pub undersample: bool,
    pub vif: VifConfig,
    pub tree: TreeConfig,
    pub forest: ForestConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            projects: Vec::new(),
            out: None,
            interval_months: 6,
            fix_patterns: FixPatternConfig::default(),
            models: ModelKind::ALL.iter().map(|m| m.name().to_string()).collect(),
            suites: Suite::ALL.iter().map(|s| s.name().to_string()).collect(),
            k: 10,
            repeats: 10,
            seed: 42,
            alpha: 0.05,
            importance_score: "auc_weighted".into(),
            importance_model: "RF".into(),
            undersample: false,
            vif: VifConfig::default(),
            tree: TreeConfig::default(),
            forest: ForestConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        let mut cfg: RunConfig = toml::from_str(&text).map_err(|source| ConfigError::Parse {
            path: path.to_path_buf(),
            source,
        })?;
        let base = path.parent().unwrap_or(Path::new(""));
        for p in &mut cfg.projects {
            p.repo = base.join(&p.repo);
            p.issues = p.issues.as_ref().map(|i| base.join(i));
        }
        cfg.out = cfg.out.as_ref().map(|o| base.join(o));
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: String| Err(ConfigError::Invalid(m));
        if self.k < 2 {
            return bad(format!("k must be at least 2, got {}", self.k));
        }
        if self.interval_months < 1 {
            return bad("interval_months must be at least 1".into());
        }
        if self.repeats < 1 {
            return bad("repeats must be at least 1".into());
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad(format!("alpha must lie in (0, 1), got {}", self.alpha));
        }
        let v = &self.vif;
        if !(v.investigate > 1.0 && v.investigate < v.severe) {
            return bad(format!(
                "VIF thresholds must satisfy 1 < investigate < severe, got {} and {}",
                v.investigate, v.severe
            ));
        }
        if self.tree.min_samples_leaf < 1 {
            return bad("tree.min_samples_leaf must be at least 1".into());
        }
        if self.forest.n_trees < 1 {
            return bad("forest.n_trees must be at least 1".into());
        }
        if self.forest.features_per_split == Some(0) {
            return bad("forest.features_per_split must be at least 1".into());
        }
        if self.fix_patterns.keywords.is_empty() && !self.fix_patterns.issue_refs {
            return bad("fix_patterns matches nothing".into());
        }
        if self.models.is_empty() || self.suites.is_empty() {
            return bad("models and suites must be non-empty".into());
        }
        self.model_kinds()?;
        self.suite_list()?;
        self.importance()?;
        let mut names: Vec<&str> = self.projects.iter().map(|p| p.name.as_str()).collect();
        names.sort_unstable();
        if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
            return bad(format!("duplicate project name {}", w[0]));
        }
        if let Some(p) = self.projects.iter().find(|p| !valid_name(&p.name)) {
            return bad(format!("project name {:?} is not a plain directory name", p.name));
        }
        Ok(())
    }

    pub fn model_kinds(&self) -> Result<Vec<ModelKind>, ConfigError> {
        let mut kinds = Vec::new();
        for m in &self.models {
            let k: ModelKind = m
                .parse()
                .map_err(|_| ConfigError::Invalid(format!("unknown model {m:?}")))?;
            if !kinds.contains(&k) {
                kinds.push(k);
            }
        }
        Ok(kinds)
    }

    pub fn suite_list(&self) -> Result<Vec<Suite>, ConfigError> {
        let mut suites = Vec::new();
        for s in &self.suites {
            let x: Suite = s
                .parse()
                .map_err(|_| ConfigError::Invalid(format!("unknown suite {s:?}")))?;
            if !suites.contains(&x) {
                suites.push(x);
            }
        }
        Ok(suites)
    }

    pub fn importance(&self) -> Result<(ModelKind, ImportanceScore), ConfigError> {
        let kind = self
            .importance_model
            .parse()
            .map_err(|_| ConfigError::Invalid(format!("unknown model {:?}", self.importance_model)))?;
        let score = match self.importance_score.as_str() {
            "auc_weighted" | "auc" => ImportanceScore::AucWeighted,
            "f_minority" | "f" => ImportanceScore::FMinority,
            other => {
                return Err(ConfigError::Invalid(format!(
                    "unknown importance score {other:?}"
                )))
            }
        };
        Ok((kind, score))
    }

    pub fn spec(&self, kind: ModelKind) -> ModelSpec {
        let mut spec = ModelSpec::new(kind, self.seed);
        spec.tree = TreeParams {
            max_depth: self.tree.max_depth,
            min_samples_leaf: self.tree.min_samples_leaf,
        };
        spec.forest = ForestParams {
            n_trees: self.forest.n_trees,
            features_per_split: self.forest.features_per_split,
            bootstrap: self.forest.bootstrap,
        };
        spec
    }

    pub fn thresholds(&self) -> VifThresholds {
        VifThresholds {
            investigate: self.vif.investigate,
            severe: self.vif.severe,
        }
    }

    pub fn mine_config(&self) -> MineConfig {
        MineConfig {
            interval_months: self.interval_months,
            patterns: FixPatterns {
                keywords: self.fix_patterns.keywords.clone(),
                issue_refs: self.fix_patterns.issue_refs,
            },
        }
    }

    /// Output root: the command-line value, then the environment, then the
    /// config file, then the default.
    pub fn out_root(&self, cli: Option<&Path>) -> PathBuf {
        if let Some(p) = cli {
            return p.to_path_buf();
        }
        if let Some(v) = std::env::var_os(OUT_ENV).filter(|v| !v.is_empty()) {
            return PathBuf::from(v);
        }
        self.out.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUT))
    }
}

/// Project names become directory names.
pub fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && name != "."
        && name != ".."
        && name != "report"
        && !name.contains(['/', '\\', '\0'])
}
