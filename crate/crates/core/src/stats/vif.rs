use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::ols::ols_fit;
use super::StatsError;
use crate::dataset::{Dataset, Metric};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VifThresholds {
    pub investigate: f64,
    pub severe: f64,
}

impl Default for VifThresholds {
    fn default() -> Self {
        Self {
            investigate: 2.5,
            severe: 10.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VifFlag {
    Ok,
    Investigate,
    Severe,
    /// Zero-variance feature; no VIF is defined.
    Degenerate,
}

impl VifFlag {
    pub fn classify(vif: f64, t: &VifThresholds) -> Self {
        if vif < t.investigate {
            VifFlag::Ok
        } else if vif < t.severe {
            VifFlag::Investigate
        } else {
            VifFlag::Severe
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            VifFlag::Ok => "ok",
            VifFlag::Investigate => "investigate",
            VifFlag::Severe => "severe",
            VifFlag::Degenerate => "degenerate",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VifEntry {
    pub feature: String,
    /// `None` for degenerate features; may be `+inf`.
    pub vif: Option<f64>,
    pub flag: VifFlag,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct VifReport {
    pub entries: Vec<VifEntry>,
}

impl VifReport {
    pub fn get(&self, feature: &str) -> Option<&VifEntry> {
        self.entries.iter().find(|e| e.feature == feature)
    }
}

/// VIF of every column of the row-major matrix `x`, each regressed on all
/// other non-degenerate columns.
pub fn vif_table(
    x: &[Vec<f64>],
    names: &[&str],
    thresholds: &VifThresholds,
) -> Result<VifReport, StatsError> {
    let p = names.len();
    if p < 2 {
        return Err(StatsError::TooFew(2));
    }
    if x.len() < p + 2 {
        return Err(StatsError::InsufficientRows {
            rows: x.len(),
            cols: p,
        });
    }
    for (i, row) in x.iter().enumerate() {
        if row.len() != p {
            return Err(StatsError::DimensionMismatch {
                row: i,
                expected: p,
                found: row.len(),
            });
        }
    }
    let live: Vec<usize> = (0..p)
        .filter(|&j| x.iter().any(|r| r[j] != x[0][j]))
        .collect();
    let mut entries = Vec::with_capacity(p);
    for (j, name) in names.iter().enumerate() {
        if !live.contains(&j) {
            entries.push(VifEntry {
                feature: name.to_string(),
                vif: None,
                flag: VifFlag::Degenerate,
            });
            continue;
        }
        let others: Vec<usize> = live.iter().copied().filter(|&k| k != j).collect();
        let vif = if others.is_empty() {
            1.0
        } else {
            let design: Vec<Vec<f64>> = x
                .iter()
                .map(|r| others.iter().map(|&k| r[k]).collect())
                .collect();
            let y: Vec<f64> = x.iter().map(|r| r[j]).collect();
            let r2 = ols_fit(&design, &y)?.r_squared;
            if 1.0 - r2 <= 1e-10 {
                f64::INFINITY
            } else {
                1.0 / (1.0 - r2)
            }
        };
        entries.push(VifEntry {
            feature: name.to_string(),
            vif: Some(vif),
            flag: VifFlag::classify(vif, thresholds),
        });
    }
    Ok(VifReport { entries })
}

/// VIF over a subset of a dataset's features.
pub fn dataset_vif(
    dataset: &Dataset,
    features: &[Metric],
    thresholds: &VifThresholds,
) -> Result<VifReport, StatsError> {
    let projected = dataset
        .select(features)
        .map_err(|_| StatsError::TooFew(features.len()))?;
    let names: Vec<&str> = features.iter().map(|m| m.name()).collect();
    vif_table(&projected.matrix(), &names, thresholds)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Screening {
    pub kept: Vec<String>,
    pub excluded: Vec<String>,
    /// Some kept feature has a severe VIF; the whole project is left out of
    /// the importance analysis.
    pub project_excluded: bool,
}

/// Keeps the report features that are among `candidates`. Degenerate
/// features are kept: they carry no collinearity.
pub fn screen_features(report: &VifReport, candidates: &[&str]) -> Screening {
    let mut kept = Vec::new();
    let mut excluded = Vec::new();
    let mut project_excluded = false;
    for e in &report.entries {
        if candidates.contains(&e.feature.as_str()) {
            project_excluded |= e.flag == VifFlag::Severe;
            kept.push(e.feature.clone());
        } else {
            excluded.push(e.feature.clone());
        }
    }
    Screening {
        kept,
        excluded,
        project_excluded,
    }
}
