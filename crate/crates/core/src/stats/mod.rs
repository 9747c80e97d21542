//! Least squares, multicollinearity screening and rank-based tests.

mod ols;
mod ranks;
mod special;
mod rank_tests;
mod vif;

pub use ols::{ols_fit, OlsFit};
pub use ranks::{average_ranks, five_number_summary, quantile, FiveNumber};
pub use special::{chi_squared_sf, normal_sf, regularized_gamma_q};
pub use rank_tests::{kruskal_wallis, mann_whitney, TestResult, EXACT_MAX_GROUP};
pub use vif::{dataset_vif, screen_features, vif_table, Screening, VifEntry, VifFlag, VifReport, VifThresholds};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StatsError {
    #[error("response has zero variance")]
    DegenerateResponse,
    #[error("design has {rows} rows and {cols} columns; need more rows")]
    InsufficientRows { rows: usize, cols: usize },
    #[error("row {row} has {found} values, expected {expected}")]
    DimensionMismatch {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("non-finite value in input")]
    NonFinite,
    #[error("empty sample")]
    EmptySample,
    #[error("need at least {0} groups or features")]
    TooFew(usize),
}
