//! Calendar helpers: UTC day bucketing and a year-month newtype.

use std::fmt;
use std::str::FromStr;

use chrono::{DateTime, Datelike, Duration, NaiveDate};

use crate::error::{Error, Result};

/// UTC calendar date of an epoch timestamp in seconds.
pub fn utc_date(epoch_secs: i64) -> NaiveDate {
    DateTime::from_timestamp(epoch_secs, 0)
        .map(|dt| dt.date_naive())
        .unwrap_or(NaiveDate::MIN)
}

/// Epoch seconds of 00:00:00 UTC on `date`.
pub fn day_start(date: NaiveDate) -> i64 {
    date.and_hms_opt(0, 0, 0)
        .expect("midnight exists")
        .and_utc()
        .timestamp()
}

/// Inclusive range of calendar days.
pub fn days_between(start: NaiveDate, end: NaiveDate) -> i64 {
    (end - start).num_days() + 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct YearMonth {
    pub year: i32,
    pub month: u32,
}

impl YearMonth {
    pub fn new(year: i32, month: u32) -> Result<Self> {
        if !(1..=12).contains(&month) {
            return Err(Error::invalid(format!("month {month} out of range")));
        }
        Ok(Self { year, month })
    }

    pub fn of(date: NaiveDate) -> Self {
        Self {
            year: date.year(),
            month: date.month(),
        }
    }

    pub fn first_day(self) -> NaiveDate {
        NaiveDate::from_ymd_opt(self.year, self.month, 1).expect("valid month")
    }

    pub fn last_day(self) -> NaiveDate {
        self.succ().first_day() - Duration::days(1)
    }

    pub fn succ(self) -> Self {
        self.add(1)
    }

    pub fn pred(self) -> Self {
        self.add(-1)
    }

    pub fn add(self, months: i32) -> Self {
        let idx = self.index() + months;
        Self::from_index(idx)
    }

    /// Number of months from `other` to `self` (positive when `self` is later).
    pub fn diff(self, other: Self) -> i32 {
        self.index() - other.index()
    }

    fn index(self) -> i32 {
        self.year * 12 + self.month as i32 - 1
    }

    fn from_index(idx: i32) -> Self {
        Self {
            year: idx.div_euclid(12),
            month: (idx.rem_euclid(12) + 1) as u32,
        }
    }

    /// Inclusive iterator `self..=end`.
    pub fn through(self, end: Self) -> impl Iterator<Item = YearMonth> {
        let n = (end.diff(self) + 1).max(0);
        (0..n).map(move |i| self.add(i))
    }
}

impl fmt::Display for YearMonth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}", self.year, self.month)
    }
}

impl FromStr for YearMonth {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (y, m) = s
            .split_once('-')
            .ok_or_else(|| Error::Parse(format!("expected YYYY-MM, got {s:?}")))?;
        let year = y
            .parse()
            .map_err(|_| Error::Parse(format!("bad year in {s:?}")))?;
        let month = m
            .parse()
            .map_err(|_| Error::Parse(format!("bad month in {s:?}")))?;
        YearMonth::new(year, month)
    }
}

impl serde::Serialize for YearMonth {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for YearMonth {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
