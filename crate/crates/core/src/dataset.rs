//! Learning-ready rows: metric vectors joined with defect labels.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::metrics::MetricVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Metric {
    Loc,
    Wmc,
    Dit,
    Noc,
    Cbo,
    Rfc,
    Lcom5,
    Npa,
    Npm,
    Nle,
    Cboi,
    Cd,
}

impl Metric {
    /// Canonical feature order.
    pub const ALL: [Metric; 12] = [
        Metric::Loc,
        Metric::Wmc,
        Metric::Dit,
        Metric::Noc,
        Metric::Cbo,
        Metric::Rfc,
        Metric::Lcom5,
        Metric::Npa,
        Metric::Npm,
        Metric::Nle,
        Metric::Cboi,
        Metric::Cd,
    ];

    /// Metrics considered for importance ranking; RFC and WMC are left out
    /// up front because of their collinearity with the rest.
    pub const IMPORTANCE_CANDIDATES: [Metric; 9] = [
        Metric::Lcom5,
        Metric::Nle,
        Metric::Cbo,
        Metric::Cboi,
        Metric::Cd,
        Metric::Dit,
        Metric::Noc,
        Metric::Npa,
        Metric::Npm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Loc => "LOC",
            Metric::Wmc => "WMC",
            Metric::Dit => "DIT",
            Metric::Noc => "NOC",
            Metric::Cbo => "CBO",
            Metric::Rfc => "RFC",
            Metric::Lcom5 => "LCOM5",
            Metric::Npa => "NPA",
            Metric::Npm => "NPM",
            Metric::Nle => "NLE",
            Metric::Cboi => "CBOI",
            Metric::Cd => "CD",
        }
    }

    /// Position in the canonical order.
    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = DatasetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Metric::ALL
            .iter()
            .copied()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| DatasetError::UnknownFeature(s.to_string()))
    }
}

/// Named metric suites compared against each other.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Loc,
    Ck,
    Other,
    CkOther,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Loc, Suite::Ck, Suite::Other, Suite::CkOther];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Loc => "LOC",
            Suite::Ck => "CK",
            Suite::Other => "OTHER",
            Suite::CkOther => "CK+OTHER",
        }
    }

    /// Members in canonical order.
    pub fn metrics(self) -> Vec<Metric> {
        use Metric::*;
        let ck = [Wmc, Dit, Noc, Rfc, Lcom5, Cbo];
        let other = [Npa, Npm, Nle, Cboi, Cd];
        let members: &[Metric] = match self {
            Suite::Loc => &[Loc],
            Suite::Ck => &ck,
            Suite::Other => &other,
            Suite::CkOther => &[Wmc, Dit, Noc, Rfc, Lcom5, Cbo, Npa, Npm, Nle, Cboi, Cd],
        };
        Metric::ALL
            .iter()
            .copied()
            .filter(|m| members.contains(m))
            .collect()
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = DatasetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .iter()
            .copied()
            .find(|x| x.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| DatasetError::UnknownSuite(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DatasetError {
    #[error("row has {found} features, dataset has {expected}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("feature {feature} of {fqn} is out of range: {value}")]
    InvalidValue {
        fqn: String,
        feature: Metric,
        value: String,
    },
    #[error("duplicate feature {0}")]
    DuplicateFeature(Metric),
    #[error("unknown feature {0}")]
    UnknownFeature(String),
    #[error("unknown metric suite {0}")]
    UnknownSuite(String),
    #[error("feature {0} is not part of the dataset")]
    MissingFeature(Metric),
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetRow {
    pub project: String,
    pub release: u32,
    pub fqn: String,
    /// Aligned with the owning dataset's feature list.
    pub features: Vec<f64>,
    pub defective: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    features: Vec<Metric>,
    rows: Vec<DatasetRow>,
}

impl Default for Dataset {
    fn default() -> Self {
        Self {
            features: Metric::ALL.to_vec(),
            rows: Vec::new(),
        }
    }
}

impl Dataset {
    pub fn new(features: Vec<Metric>) -> Result<Self, DatasetError> {
        let mut seen = BTreeSet::new();
        for f in &features {
            if !seen.insert(*f) {
                return Err(DatasetError::DuplicateFeature(*f));
            }
        }
        Ok(Self {
            features,
            rows: Vec::new(),
        })
    }

    pub fn features(&self) -> &[Metric] {
        &self.features
    }

    pub fn rows(&self) -> &[DatasetRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn push(&mut self, row: DatasetRow) -> Result<(), DatasetError> {
        if row.features.len() != self.features.len() {
            return Err(DatasetError::ArityMismatch {
                expected: self.features.len(),
                found: row.features.len(),
            });
        }
        for (metric, value) in self.features.iter().zip(&row.features) {
            let upper = if *metric == Metric::Cd { 1.0 } else { f64::INFINITY };
            if !value.is_finite() || *value < 0.0 || *value > upper {
                return Err(DatasetError::InvalidValue {
                    fqn: row.fqn.clone(),
                    feature: *metric,
                    value: alloc::format!("{value}"),
                });
            }
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn extend(&mut self, other: Dataset) -> Result<(), DatasetError> {
        for row in other.rows {
            self.push(row)?;
        }
        Ok(())
    }

    /// Row-major feature matrix.
    pub fn matrix(&self) -> Vec<Vec<f64>> {
        self.rows.iter().map(|r| r.features.clone()).collect()
    }

    pub fn labels(&self) -> Vec<bool> {
        self.rows.iter().map(|r| r.defective).collect()
    }

    pub fn column(&self, metric: Metric) -> Option<Vec<f64>> {
        let j = self.features.iter().position(|m| *m == metric)?;
        Some(self.rows.iter().map(|r| r.features[j]).collect())
    }

    /// Projection onto `features` (in the given order).
    pub fn select(&self, features: &[Metric]) -> Result<Dataset, DatasetError> {
        let positions = features
            .iter()
            .map(|f| {
                self.features
                    .iter()
                    .position(|m| m == f)
                    .ok_or(DatasetError::MissingFeature(*f))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut out = Dataset::new(features.to_vec())?;
        out.rows = self
            .rows
            .iter()
            .map(|r| DatasetRow {
                features: positions.iter().map(|&j| r.features[j]).collect(),
                ..r.clone()
            })
            .collect();
        Ok(out)
    }

    pub fn positives(&self) -> usize {
        self.rows.iter().filter(|r| r.defective).count()
    }
}

/// Result of joining one release's metrics and labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Assembled {
    pub dataset: Dataset,
    /// Labels naming a class without metrics; such labels are dropped.
    pub orphan_labels: Vec<String>,
}

/// One row per class with metrics; classes without a label entry are
/// treated as not defective.
pub fn assemble(
    vectors: &[MetricVector],
    labels: &[(String, bool)],
    project: &str,
    release: u32,
) -> Result<Assembled, DatasetError> {
    let known: BTreeSet<&str> = vectors.iter().map(|v| v.fqn.as_str()).collect();
    let defective: BTreeSet<&str> = labels
        .iter()
        .filter(|(_, d)| *d)
        .map(|(f, _)| f.as_str())
        .collect();
    let orphan_labels = labels
        .iter()
        .filter(|(f, _)| !known.contains(f.as_str()))
        .map(|(f, _)| f.clone())
        .collect();
    let mut dataset = Dataset::default();
    for v in vectors {
        dataset.push(DatasetRow {
            project: project.to_string(),
            release,
            fqn: v.fqn.clone(),
            features: v.features().to_vec(),
            defective: defective.contains(v.fqn.as_str()),
        })?;
    }
    Ok(Assembled {
        dataset,
        orphan_labels,
    })
}

fn row_key(row: &DatasetRow) -> (Vec<u64>, bool) {
    // +0.0 and -0.0 compare equal.
    let bits = row.features.iter().map(|v| (v + 0.0).to_bits()).collect();
    (bits, row.defective)
}

/// Keeps the first of every group of rows with identical features and label.
pub fn deduplicate(dataset: &Dataset) -> Dataset {
    let mut seen = BTreeSet::new();
    Dataset {
        features: dataset.features.clone(),
        rows: dataset
            .rows
            .iter()
            .filter(|r| seen.insert(row_key(r)))
            .cloned()
            .collect(),
    }
}

/// Random under-sampling of the majority class down to the minority count.
/// Not part of the default pipeline.
pub fn undersample(dataset: &Dataset, seed: u64) -> Dataset {
    let pos: Vec<usize> = (0..dataset.len()).filter(|&i| dataset.rows[i].defective).collect();
    let neg: Vec<usize> = (0..dataset.len()).filter(|&i| !dataset.rows[i].defective).collect();
    let (minority, mut majority) = if pos.len() <= neg.len() { (pos, neg) } else { (neg, pos) };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    majority.shuffle(&mut rng);
    majority.truncate(minority.len());
    let mut keep: Vec<usize> = minority.into_iter().chain(majority).collect();
    keep.sort_unstable();
    Dataset {
        features: dataset.features.clone(),
        rows: keep.into_iter().map(|i| dataset.rows[i].clone()).collect(),
    }
}
