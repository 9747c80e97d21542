//! Algorithmic core of the defectlens toolchain.
//!
//! Everything in this crate is pure computation over in-memory values and
//! builds with `no_std` + `alloc`: the class model and its name resolution,
//! the twelve class-level metrics, diff-to-class defect labeling, dataset
//! assembly, the statistics layer (OLS, VIF, rank tests) and the learners
//! (Gaussian naive Bayes, CART, random forest) with cross-validation and
//! permutation importance.
//!
//! Source parsing, git access, file formats and the CLI live in the
//! `defectlens` crate.

#![no_std]

extern crate alloc;

pub mod dataset;
pub mod learn;
pub mod metrics;
pub mod miner;
pub mod model;
pub mod resolve;
pub mod stats;

pub use dataset::{Dataset, DatasetRow, Metric, Suite};
pub use metrics::MetricVector;
pub use model::{ClassEntity, ClassKind, Nesting};
pub use resolve::{build_project_model, ProjectModel};
