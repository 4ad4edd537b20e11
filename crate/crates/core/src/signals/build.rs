use chrono::NaiveDate;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::grid::{CommentSet, SignalSpec};
use super::series::{daily_sum, ma_smooth, DailySeries};
use super::voting::{threshold_relabel, vote_score};
use crate::classifier::SignalLabel;
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vote {
    pub label: SignalLabel,
    pub net_score: i64,
}

/// A labeled submission with the labeled comments of both comment sets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubmissionVotes {
    pub id: String,
    pub date: NaiveDate,
    pub label: SignalLabel,
    pub first_level: Vec<Vote>,
    pub keyword_all: Vec<Vote>,
}

impl SubmissionVotes {
    fn votes(&self, set: CommentSet) -> &[Vote] {
        match set {
            CommentSet::SubmissionsOnly => &[],
            CommentSet::FirstLevel => &self.first_level,
            CommentSet::KeywordAll => &self.keyword_all,
        }
    }

    /// Label after comment voting under `spec`.
    pub fn relabel(&self, spec: &SignalSpec) -> SignalLabel {
        if spec.is_submissions_only() {
            return self.label;
        }
        let votes: Vec<(SignalLabel, i64)> = self
            .votes(spec.comment_set)
            .iter()
            .map(|v| (v.label, v.net_score))
            .collect();
        threshold_relabel(vote_score(self.label, &votes, spec.vote_weighting), spec.threshold)
    }
}

pub fn relabel_all(subs: &[SubmissionVotes], spec: &SignalSpec) -> Vec<SignalLabel> {
    subs.iter().map(|s| s.relabel(spec)).collect()
}

/// Daily sum of (re-)labeled submissions over `[start, end]`, MA-smoothed
/// with the spec's window and named by the spec string.
pub fn build_signal(
    subs: &[SubmissionVotes],
    spec: &SignalSpec,
    start: NaiveDate,
    end: NaiveDate,
) -> Result<DailySeries> {
    spec.validate()?;
    let raw = daily_sum(
        subs.iter().map(|s| (s.date, s.relabel(spec))),
        start,
        end,
    )?;
    let mut smooth = ma_smooth(&raw, spec.ma_window as usize)?;
    smooth.name = spec.to_string();
    Ok(smooth)
}

/// [`build_signal`] for many specs in parallel; output order follows `specs`.
pub fn build_signals(
    subs: &[SubmissionVotes],
    specs: &[SignalSpec],
    start: NaiveDate,
    end: NaiveDate,
) -> Result<Vec<DailySeries>> {
    specs
        .par_iter()
        .map(|spec| build_signal(subs, spec, start, end))
        .collect()
}
