use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::fit::{align_with, anchor, fit_ar1, MidasData, MidasOptions};
use super::store::InformationSet;
use crate::calendar::YearMonth;
use crate::error::{Error, Result};

/// Spec name used for the AR(1) benchmark records.
pub const BENCHMARK_SPEC: &str = "AR1";

const SIGMA_FLOOR: f64 = 1e-12;

/// Recursive expanding-window nowcast settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NowcastConfig {
    /// Target name written to every record.
    pub target: String,
    /// Signal spec name written to MIDAS records.
    pub spec: String,
    /// First month of every estimation window.
    pub estimation_start: YearMonth,
    pub eval_start: YearMonth,
    pub eval_end: YearMonth,
    /// Days before month end after which daily data is not used.
    pub cutoff_days: u32,
    pub options: MidasOptions,
}

impl NowcastConfig {
    pub fn validate(&self) -> Result<()> {
        self.options.validate()?;
        if self.eval_end < self.eval_start {
            return Err(Error::invalid(format!(
                "evaluation window {}..{} is empty",
                self.eval_start, self.eval_end
            )));
        }
        if self.eval_start.diff(self.estimation_start) < 3 {
            return Err(Error::invalid(format!(
                "estimation start {} leaves too few months before {}",
                self.estimation_start, self.eval_start
            )));
        }
        if self.cutoff_days > 28 {
            return Err(Error::invalid("cutoff_days must be at most 28"));
        }
        Ok(())
    }
}

/// One point nowcast with its predictive standard deviation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NowcastRecord {
    pub target: String,
    pub spec: String,
    pub month: YearMonth,
    pub cutoff: u32,
    pub point: f64,
    pub sigma: f64,
    /// Realized value, NaN when not yet observed.
    pub realized: f64,
    /// The MIDAS fit failed and the benchmark value was used instead.
    pub fallback: bool,
    /// Selected number of blocks, 0 for the benchmark or a fallback; not
    /// part of the CSV.
    #[serde(skip_serializing, default)]
    pub q: usize,
}

impl NowcastRecord {
    pub fn error(&self) -> f64 {
        self.realized - self.point
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct NowcastRun {
    pub midas: Vec<NowcastRecord>,
    pub benchmark: Vec<NowcastRecord>,
}

impl NowcastRun {
    pub fn fallbacks(&self) -> usize {
        self.midas.iter().filter(|r| r.fallback).count()
    }
}

/// Produces one MIDAS-AR and one AR(1) nowcast per evaluation month, each
/// estimated on data from `estimation_start` through the previous month and
/// daily values up to the month's cutoff.
pub fn nowcast_recursive<S: InformationSet + ?Sized>(info: &S, config: &NowcastConfig) -> Result<NowcastRun> {
    config.validate()?;
    let opts = &config.options;
    let q_max = opts.q_max;
    let window = |end, len| info.daily_window(end, len);
    let mut data = MidasData::default();
    // Next month whose regression row has not been added yet.
    let mut next_row = config.estimation_start.succ();
    let mut run = NowcastRun::default();

    for month in config.eval_start.through(config.eval_end) {
        let cutoff = anchor(month, config.cutoff_days);
        info.begin_nowcast(month, cutoff);
        let prev = month.pred();
        let y = info.target_through(config.estimation_start, prev)?;
        while next_row <= prev {
            let i = next_row.diff(config.estimation_start) as usize;
            let blocks = align_with(window, next_row, config.cutoff_days, opts.k, q_max, opts.block_offset)?;
            data.push(y.values[i], y.values[i - 1], blocks);
            next_row = next_row.succ();
        }
        let y_lag = *y.values.last().expect("non-empty estimation sample");
        let realized = info.realized(month).unwrap_or(f64::NAN);

        let ar = fit_ar1(&y.values)?;
        let bench = NowcastRecord {
            target: config.target.clone(),
            spec: BENCHMARK_SPEC.to_string(),
            month,
            cutoff: config.cutoff_days,
            point: ar.predict(y_lag),
            sigma: ar.sigma.max(SIGMA_FLOOR),
            realized,
            fallback: false,
            q: 0,
        };

        let midas = align_with(window, month, config.cutoff_days, opts.k, q_max, opts.block_offset)
            .and_then(|blocks| {
                let fit = data.select(q_max, opts)?;
                Ok((fit.predict(y_lag, &blocks)?, fit.sigma, fit.q))
            });
        let record = match midas {
            Ok((point, sigma, q)) if point.is_finite() => NowcastRecord {
                spec: config.spec.clone(),
                point,
                sigma: sigma.max(SIGMA_FLOOR),
                q,
                ..bench.clone()
            },
            other => {
                if let Err(e) = other {
                    log::warn!("{} {month}: MIDAS fit failed, using AR(1): {e}", config.spec);
                }
                NowcastRecord {
                    spec: config.spec.clone(),
                    fallback: true,
                    ..bench.clone()
                }
            }
        };
        run.midas.push(record);
        run.benchmark.push(bench);
    }
    Ok(run)
}

/// Writes records as `target,spec,month,cutoff,point,sigma,realized,fallback`.
pub fn write_nowcasts<W: Write>(w: W, records: &[NowcastRecord]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in records {
        out.serialize(r)?;
    }
    out.flush().map_err(Error::Stream)?;
    Ok(())
}

pub fn read_nowcasts<R: Read>(r: R) -> Result<Vec<NowcastRecord>> {
    let mut rdr = csv::Reader::from_reader(r);
    let mut out = Vec::new();
    for rec in rdr.deserialize() {
        out.push(rec?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::midas::{LoggedStore, MonthlySeries, SeriesStore};
    use crate::rng::rng_from;
    use crate::signals::DailySeries;
    use chrono::Duration;
    use rand_distr::{Distribution, StandardNormal};

    fn fixture() -> (MonthlySeries, DailySeries) {
        let mut rng = rng_from(7);
        let first: YearMonth = "2015-01".parse().unwrap();
        let start = first.first_day() - Duration::days(120);
        let end: YearMonth = "2020-12".parse().unwrap();
        let n = (end.last_day() - start).num_days() as usize + 1;
        let xs: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        let daily = DailySeries::new("x", start, xs);
        let months = end.diff(first) as usize + 1;
        let mut y = vec![0.0];
        for i in 1..months {
            let m = first.add(i as i32);
            let b = super::super::align_daily(&daily, m, 0, 30, 1, 30).unwrap();
            let mean: f64 = b[0].iter().sum::<f64>() / 30.0;
            let e: f64 = StandardNormal.sample(&mut rng);
            y.push(0.5 * y[i - 1] + 3.0 * mean + 0.2 * e);
        }
        (MonthlySeries::new(first, y), daily)
    }

    fn config() -> NowcastConfig {
        NowcastConfig {
            target: "y".into(),
            spec: "test".into(),
            estimation_start: "2015-01".parse().unwrap(),
            eval_start: "2019-01".parse().unwrap(),
            eval_end: "2020-12".parse().unwrap(),
            cutoff_days: 0,
            options: MidasOptions { q_max: 2, ..MidasOptions::default() },
        }
    }

    #[test]
    fn no_look_ahead_and_beats_benchmark() {
        let (y, daily) = fixture();
        let store = LoggedStore::new(SeriesStore { target: &y, daily: &daily });
        let run = nowcast_recursive(&store, &config()).unwrap();
        assert_eq!(run.midas.len(), 24);
        assert!(store.violations().is_empty(), "{:?}", store.violations());
        assert_eq!(run.fallbacks(), 0);
        let mse = |r: &[NowcastRecord]| r.iter().map(|x| x.error().powi(2)).sum::<f64>();
        assert!(mse(&run.midas) < mse(&run.benchmark));
    }

    #[test]
    fn csv_round_trip() {
        let (y, daily) = fixture();
        let mut cfg = config();
        cfg.eval_start = "2020-10".parse().unwrap();
        let run = nowcast_recursive(&SeriesStore { target: &y, daily: &daily }, &cfg).unwrap();
        let mut buf = Vec::new();
        write_nowcasts(&mut buf, &run.midas).unwrap();
        let header = String::from_utf8(buf.clone()).unwrap();
        assert!(header.starts_with("target,spec,month,cutoff,point,sigma,realized,fallback\n"));
        let back = read_nowcasts(&buf[..]).unwrap();
        let strip = |r: &NowcastRecord| NowcastRecord { q: 0, ..r.clone() };
        assert_eq!(back, run.midas.iter().map(strip).collect::<Vec<_>>());
    }

    #[test]
    fn constant_indicator_falls_back() {
        let (y, daily) = fixture();
        let flat = daily.map(|_| 1.0);
        let mut cfg = config();
        cfg.eval_start = "2020-11".parse().unwrap();
        let run = nowcast_recursive(&SeriesStore { target: &y, daily: &flat }, &cfg).unwrap();
        assert!(run.midas.iter().all(|r| r.fallback));
        assert_eq!(run.midas[0].point, run.benchmark[0].point);
    }
}
