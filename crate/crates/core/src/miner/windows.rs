use alloc::string::String;
use alloc::vec::Vec;

use chrono::{DateTime, Months, Utc};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HistoryCommit {
    pub id: String,
    pub time: DateTime<Utc>,
}

/// A release: the code at `snapshot_commit` together with the defects whose
/// assignment instant falls in `[start, end)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReleaseWindow {
    pub index: usize,
    pub snapshot_commit: String,
    pub start: DateTime<Utc>,
    pub end: DateTime<Utc>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WindowError {
    #[error("repository has no commits")]
    EmptyRepository,
    #[error("release interval must be at least one month")]
    InvalidInterval,
    #[error("window boundary out of the representable date range")]
    DateOverflow,
}

fn boundary(first: DateTime<Utc>, interval: u32, i: usize) -> Result<DateTime<Utc>, WindowError> {
    let months = u32::try_from(i)
        .ok()
        .and_then(|i| i.checked_mul(interval))
        .ok_or(WindowError::DateOverflow)?;
    first
        .checked_add_months(Months::new(months))
        .ok_or(WindowError::DateOverflow)
}

/// Tiles `[first commit, last commit]` with windows of `interval_months`
/// calendar months anchored at the first commit.
///
/// `history` is the first-parent history, oldest first. A trailing window
/// that covers less than a full interval of history is kept only if one of
/// `fix_instants` falls in it (a sole window is always kept).
pub fn enumerate_release_windows(
    history: &[HistoryCommit],
    interval_months: u32,
    fix_instants: &[DateTime<Utc>],
) -> Result<Vec<ReleaseWindow>, WindowError> {
    let first_commit = history.first().ok_or(WindowError::EmptyRepository)?;
    if interval_months == 0 {
        return Err(WindowError::InvalidInterval);
    }
    let first = first_commit.time;
    let last = history.iter().map(|c| c.time).max().unwrap_or(first);

    let mut bounds = alloc::vec![first];
    loop {
        let next = boundary(first, interval_months, bounds.len())?;
        bounds.push(next);
        if next >= last {
            break;
        }
    }
    let mut windows = Vec::with_capacity(bounds.len() - 1);
    for i in 0..bounds.len() - 1 {
        let (start, end) = (bounds[i], bounds[i + 1]);
        let snapshot = if i == 0 {
            first_commit
        } else {
            history
                .iter()
                .rev()
                .find(|c| c.time < start)
                .unwrap_or(first_commit)
        };
        windows.push(ReleaseWindow {
            index: i,
            snapshot_commit: snapshot.id.clone(),
            start,
            end,
        });
    }
    if windows.len() > 1 {
        let tail = windows.last().expect("non-empty");
        let short = last < tail.end;
        let has_fix = fix_instants
            .iter()
            .any(|t| tail.start <= *t && *t <= tail.end);
        if short && !has_fix {
            windows.pop();
        }
    }
    Ok(windows)
}

/// Window containing `instant`. Windows are half-open except that the last
/// one also holds its end instant.
pub fn assign_window(windows: &[ReleaseWindow], instant: DateTime<Utc>) -> Option<usize> {
    let last = windows.len().checked_sub(1)?;
    windows.iter().position(|w| {
        w.start <= instant && (instant < w.end || (w.index == last && instant == w.end))
    })
}
