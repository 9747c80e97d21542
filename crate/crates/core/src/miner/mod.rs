//! Defect mining over a first-parent commit history.
//!
//! The pieces here are independent of how the history is obtained: the
//! `defectlens` crate feeds them commit metadata and unified diffs read from
//! git.

mod diff;
mod fixmsg;
mod label;
mod windows;

pub use diff::{changed_lines, parse_unified_diff, FileChange};
pub use fixmsg::{classify_fix_commit, FixClassification, FixPatterns};
pub use label::{label_defective_classes, DefectLabel, FixChanges, LabelOutcome, Provenance, Unmatched};
pub use windows::{assign_window, enumerate_release_windows, HistoryCommit, ReleaseWindow, WindowError};
