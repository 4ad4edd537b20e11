use std::io::{Read, Write};

use chrono::{Duration, NaiveDate};

use crate::calendar::days_between;
use crate::classifier::SignalLabel;
use crate::error::{Error, Result};

/// One real value per calendar day, without gaps.
#[derive(Debug, Clone, PartialEq)]
pub struct DailySeries {
    pub name: String,
    pub start: NaiveDate,
    pub values: Vec<f64>,
}

impl DailySeries {
    pub fn new(name: impl Into<String>, start: NaiveDate, values: Vec<f64>) -> Self {
        Self {
            name: name.into(),
            start,
            values,
        }
    }

    pub fn zeros(name: impl Into<String>, start: NaiveDate, end: NaiveDate) -> Result<Self> {
        if end < start {
            return Err(Error::invalid(format!("date range {start}..{end} is empty")));
        }
        let n = days_between(start, end) as usize;
        Ok(Self::new(name, start, vec![0.0; n]))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Last covered day. Undefined for an empty series.
    pub fn end(&self) -> NaiveDate {
        self.start + Duration::days(self.values.len() as i64 - 1)
    }

    pub fn index_of(&self, date: NaiveDate) -> Option<usize> {
        let off = (date - self.start).num_days();
        (off >= 0 && (off as usize) < self.values.len()).then_some(off as usize)
    }

    pub fn get(&self, date: NaiveDate) -> Option<f64> {
        self.index_of(date).map(|i| self.values[i])
    }

    pub fn dates(&self) -> impl Iterator<Item = NaiveDate> + '_ {
        (0..self.values.len()).map(move |i| self.start + Duration::days(i as i64))
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self::new(self.name.clone(), self.start, self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["date", "value"])?;
        for (d, v) in self.dates().zip(&self.values) {
            wtr.write_record([d.to_string(), v.to_string()])?;
        }
        wtr.flush()?;
        Ok(())
    }

    /// Reads a `date,value` CSV. Dates must be consecutive.
    pub fn read_csv<R: Read>(name: impl Into<String>, r: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(r);
        let mut start = None;
        let mut values = Vec::new();
        for row in rdr.records() {
            let row = row?;
            let date: NaiveDate = row
                .get(0)
                .unwrap_or_default()
                .parse()
                .map_err(|e| Error::Parse(format!("bad date in daily CSV: {e}")))?;
            let value: f64 = row
                .get(1)
                .unwrap_or_default()
                .parse()
                .map_err(|e| Error::Parse(format!("bad value in daily CSV: {e}")))?;
            let s = *start.get_or_insert(date);
            if date != s + Duration::days(values.len() as i64) {
                return Err(Error::Parse(format!("daily CSV has a gap or disorder at {date}")));
            }
            values.push(value);
        }
        let start = start.ok_or_else(|| Error::Parse("daily CSV is empty".into()))?;
        Ok(Self::new(name, start, values))
    }
}

/// Sum of label values per UTC day over `[start, end]`; empty days are 0.
pub fn daily_sum(
    items: impl IntoIterator<Item = (NaiveDate, SignalLabel)>,
    start: NaiveDate,
    end: NaiveDate,
) -> Result<DailySeries> {
    let mut out = DailySeries::zeros("daily_sum", start, end)?;
    for (date, label) in items {
        let i = out
            .index_of(date)
            .ok_or_else(|| Error::invalid(format!("item dated {date} outside {start}..{end}")))?;
        out.values[i] += f64::from(label.value());
    }
    Ok(out)
}

/// [`daily_sum`] over re-labeled submissions.
pub fn rebuild_daily(
    relabeled: impl IntoIterator<Item = (NaiveDate, SignalLabel)>,
    start: NaiveDate,
    end: NaiveDate,
) -> Result<DailySeries> {
    daily_sum(relabeled, start, end)
}

/// Backward-looking moving average over `window` days; the first days use
/// the truncated window of available values.
pub fn ma_smooth(series: &DailySeries, window: usize) -> Result<DailySeries> {
    if window == 0 {
        return Err(Error::invalid("moving-average window must be at least 1"));
    }
    let v = &series.values;
    let values = (0..v.len())
        .map(|t| {
            let lo = (t + 1).saturating_sub(window);
            let slice = &v[lo..=t];
            slice.iter().sum::<f64>() / slice.len() as f64
        })
        .collect();
    Ok(DailySeries::new(series.name.clone(), series.start, values))
}
