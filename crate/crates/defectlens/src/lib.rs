//! Java source parsing, git-based defect mining, file formats and the CLI
//! driver around `defectlens-core`.

pub mod java;
pub mod snapshot;
pub mod git;
pub mod mine;
pub mod formats;
pub mod config;
pub mod pipeline;
pub mod report;
