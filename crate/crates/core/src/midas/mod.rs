//! Mixed-frequency regressions of a monthly target on a daily indicator.

mod almon;
mod fit;
mod nowcast;
mod ols;
mod simplex;
mod store;

use std::io::{Read, Write};

pub use almon::almon_weights;
pub use fit::{align_daily, fit_ar1, fit_midas, select_q, Ar1Fit, MidasFit, MidasOptions};
pub use nowcast::{nowcast_recursive, read_nowcasts, write_nowcasts, NowcastConfig, NowcastRecord, NowcastRun, BENCHMARK_SPEC};
pub use ols::{least_squares, LeastSquares};
pub use simplex::{nelder_mead, SimplexOptions, SimplexResult};
pub use store::{Access, AccessKind, InformationSet, LoggedStore, SeriesStore};

use crate::calendar::YearMonth;
use crate::error::{Error, Result};

/// Contiguous monthly observations.
#[derive(Debug, Clone, PartialEq)]
pub struct MonthlySeries {
    pub first: YearMonth,
    pub values: Vec<f64>,
}

impl MonthlySeries {
    pub fn new(first: YearMonth, values: Vec<f64>) -> Self {
        Self { first, values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn last(&self) -> YearMonth {
        self.first.add(self.values.len() as i32 - 1)
    }

    pub fn get(&self, m: YearMonth) -> Option<f64> {
        let i = m.diff(self.first);
        (i >= 0).then(|| self.values.get(i as usize).copied()).flatten()
    }

    pub fn months(&self) -> impl Iterator<Item = YearMonth> + '_ {
        (0..self.values.len()).map(move |i| self.first.add(i as i32))
    }

    /// Sub-series over `[from, to]`.
    pub fn slice(&self, from: YearMonth, to: YearMonth) -> Result<MonthlySeries> {
        let lo = from.diff(self.first);
        let hi = to.diff(self.first);
        if lo < 0 || hi < lo || hi as usize >= self.values.len() {
            return Err(Error::Coverage(format!(
                "monthly series {}..{} does not cover {from}..{to}",
                self.first,
                self.last()
            )));
        }
        Ok(MonthlySeries::new(from, self.values[lo as usize..=hi as usize].to_vec()))
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["month", "value"])?;
        for (m, v) in self.months().zip(&self.values) {
            wtr.write_record([m.to_string(), v.to_string()])?;
        }
        wtr.flush()?;
        Ok(())
    }

    /// Reads a `month,value` CSV with consecutive `YYYY-MM` months.
    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(r);
        let mut first: Option<YearMonth> = None;
        let mut values = Vec::new();
        for row in rdr.records() {
            let row = row?;
            let m: YearMonth = row.get(0).unwrap_or_default().parse()?;
            let v: f64 = row
                .get(1)
                .unwrap_or_default()
                .parse()
                .map_err(|e| Error::Parse(format!("bad value for {m}: {e}")))?;
            let f = *first.get_or_insert(m);
            if m != f.add(values.len() as i32) {
                return Err(Error::Parse(format!("monthly CSV has a gap or disorder at {m}")));
            }
            values.push(v);
        }
        let first = first.ok_or_else(|| Error::Parse("monthly CSV is empty".into()))?;
        Ok(Self::new(first, values))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monthly_csv_and_slice() {
        let s = MonthlySeries::new("2019-11".parse().unwrap(), vec![1.0, 2.0, 3.5]);
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        assert_eq!(MonthlySeries::read_csv(buf.as_slice()).unwrap(), s);
        let sl = s.slice("2019-12".parse().unwrap(), "2020-01".parse().unwrap()).unwrap();
        assert_eq!(sl.values, vec![2.0, 3.5]);
        assert!(s.slice("2019-10".parse().unwrap(), "2020-01".parse().unwrap()).is_err());
        assert_eq!(s.get("2020-01".parse().unwrap()), Some(3.5));
        assert!(MonthlySeries::read_csv("month,value\n2020-01,1\n2020-03,2\n".as_bytes()).is_err());
    }
}
