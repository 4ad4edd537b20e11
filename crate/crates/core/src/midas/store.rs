use std::sync::Mutex;

use chrono::{Duration, NaiveDate};

use super::MonthlySeries;
use crate::calendar::YearMonth;
use crate::error::{Error, Result};
use crate::signals::DailySeries;

/// Read access to the data a nowcaster may use.
pub trait InformationSet: Sync {
    /// `len` daily values ending at `end`, most recent first.
    fn daily_window(&self, end: NaiveDate, len: usize) -> Result<Vec<f64>>;

    /// Target values for `[from, through]`.
    fn target_through(&self, from: YearMonth, through: YearMonth) -> Result<MonthlySeries>;

    /// Realized target for `month`, read only to score a finished nowcast.
    fn realized(&self, month: YearMonth) -> Option<f64>;

    /// Marks the start of the nowcast for `month` with its daily cutoff.
    fn begin_nowcast(&self, _month: YearMonth, _daily_cutoff: NaiveDate) {}
}

/// A target series and one daily indicator.
pub struct SeriesStore<'a> {
    pub target: &'a MonthlySeries,
    pub daily: &'a DailySeries,
}

pub(crate) fn daily_window(daily: &DailySeries, end: NaiveDate, len: usize) -> Result<Vec<f64>> {
    let begin = end - Duration::days(len as i64 - 1);
    match (daily.index_of(begin), daily.index_of(end)) {
        (Some(lo), Some(hi)) if len > 0 => Ok(daily.values[lo..=hi].iter().rev().copied().collect()),
        _ if len == 0 => Ok(Vec::new()),
        _ => Err(Error::Coverage(format!(
            "daily series {} covers {}..{} but {begin}..{end} is required",
            daily.name,
            daily.start,
            daily.end()
        ))),
    }
}

impl InformationSet for SeriesStore<'_> {
    fn daily_window(&self, end: NaiveDate, len: usize) -> Result<Vec<f64>> {
        daily_window(self.daily, end, len)
    }

    fn target_through(&self, from: YearMonth, through: YearMonth) -> Result<MonthlySeries> {
        self.target.slice(from, through)
    }

    fn realized(&self, month: YearMonth) -> Option<f64> {
        self.target.get(month)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AccessKind {
    /// Latest daily date read.
    Daily(NaiveDate),
    /// Latest target month read for estimation.
    Target(YearMonth),
    /// Realized value read for scoring.
    Realized(YearMonth),
}

/// One logged read, tagged with the nowcast in progress.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Access {
    pub nowcast: Option<(YearMonth, NaiveDate)>,
    pub kind: AccessKind,
}

/// Wraps an information set and records every read.
pub struct LoggedStore<S> {
    inner: S,
    current: Mutex<Option<(YearMonth, NaiveDate)>>,
    log: Mutex<Vec<Access>>,
}

impl<S: InformationSet> LoggedStore<S> {
    pub fn new(inner: S) -> Self {
        Self {
            inner,
            current: Mutex::new(None),
            log: Mutex::new(Vec::new()),
        }
    }

    pub fn accesses(&self) -> Vec<Access> {
        self.log.lock().expect("log lock").clone()
    }

    fn record(&self, kind: AccessKind) {
        let nowcast = *self.current.lock().expect("current lock");
        self.log.lock().expect("log lock").push(Access { nowcast, kind });
    }

    /// Reads that went past the information cutoff of the nowcast in progress:
    /// daily data after the cutoff date, or target months at or after the
    /// nowcast month.
    pub fn violations(&self) -> Vec<Access> {
        self.accesses()
            .into_iter()
            .filter(|a| match (a.nowcast, a.kind) {
                (Some((_, cutoff)), AccessKind::Daily(d)) => d > cutoff,
                (Some((month, _)), AccessKind::Target(m)) => m >= month,
                _ => false,
            })
            .collect()
    }
}

impl<S: InformationSet> InformationSet for LoggedStore<S> {
    fn daily_window(&self, end: NaiveDate, len: usize) -> Result<Vec<f64>> {
        self.record(AccessKind::Daily(end));
        self.inner.daily_window(end, len)
    }

    fn target_through(&self, from: YearMonth, through: YearMonth) -> Result<MonthlySeries> {
        self.record(AccessKind::Target(through));
        self.inner.target_through(from, through)
    }

    fn realized(&self, month: YearMonth) -> Option<f64> {
        self.record(AccessKind::Realized(month));
        self.inner.realized(month)
    }

    fn begin_nowcast(&self, month: YearMonth, daily_cutoff: NaiveDate) {
        *self.current.lock().expect("current lock") = Some((month, daily_cutoff));
        self.inner.begin_nowcast(month, daily_cutoff);
    }
}
