//! Daily indicator construction from labeled posts.

mod audit;
mod build;
mod grid;
mod series;
mod voting;

pub use audit::{reclassification_audit, AuditReport};
pub use build::{build_signal, build_signals, relabel_all, SubmissionVotes, Vote};
pub use grid::{spec_grid, CommentSet, GridConfig, SignalSpec};
pub use series::{daily_sum, ma_smooth, rebuild_daily, DailySeries};
pub use voting::{threshold_relabel, vote_score};
