use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::fluctuation::FluctuationPath;
use super::metrics::stars;
use super::Evaluation;
use crate::calendar::YearMonth;
use crate::error::{Error, Result};

/// One row of the per-target ranking table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub target: String,
    pub indicator: String,
    pub metric: String,
    pub ratio: f64,
    pub stars: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Correlation {
    pub a: String,
    pub b: String,
    pub correlation: f64,
}

fn by_ratio(a: &Evaluation, b: &Evaluation) -> std::cmp::Ordering {
    a.target
        .cmp(&b.target)
        .then(a.cutoff.cmp(&b.cutoff))
        .then(a.ratio_rmsfe.total_cmp(&b.ratio_rmsfe))
        .then(a.spec.cmp(&b.spec))
}

/// Evaluations grouped by target and cutoff, each group ascending in RMSFE
/// ratio.
pub fn rank_specs(evals: &[Evaluation]) -> Vec<Evaluation> {
    let mut v = evals.to_vec();
    v.sort_by(by_ratio);
    v
}

/// Lowest-RMSFE-ratio spec per target and cutoff.
pub fn best_by_target(evals: &[Evaluation]) -> Vec<Evaluation> {
    let mut best: BTreeMap<(&str, u32), &Evaluation> = BTreeMap::new();
    for e in evals {
        let slot = best.entry((&e.target, e.cutoff)).or_insert(e);
        if by_ratio(e, slot).is_lt() {
            *slot = e;
        }
    }
    best.into_values().cloned().collect()
}

/// RMSFE, MAFE and CRPS ratio rows for the best spec of every target.
pub fn table_rows(evals: &[Evaluation]) -> Vec<TableRow> {
    let star = |p: f64| if p.is_finite() { stars(p) } else { "" }.to_string();
    best_by_target(evals)
        .into_iter()
        .flat_map(|e| {
            [
                ("RMSFE", e.ratio_rmsfe, e.p_rmsfe),
                ("MAFE", e.ratio_mafe, e.p_mafe),
                ("CRPS", e.ratio_crps, e.p_crps),
            ]
            .map(|(metric, ratio, p)| TableRow {
                target: e.target.clone(),
                indicator: e.spec.clone(),
                metric: metric.into(),
                ratio,
                stars: star(p),
            })
        })
        .collect()
}

fn write_rows<W: Write, T: Serialize>(w: W, rows: &[T]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in rows {
        out.serialize(r)?;
    }
    out.flush().map_err(Error::Stream)?;
    Ok(())
}

/// `target,indicator,metric,ratio,stars`.
pub fn write_table<W: Write>(w: W, rows: &[TableRow]) -> Result<()> {
    write_rows(w, rows)
}

pub fn write_evaluations<W: Write>(w: W, evals: &[Evaluation]) -> Result<()> {
    write_rows(w, evals)
}

pub fn read_evaluations<R: Read>(r: R) -> Result<Vec<Evaluation>> {
    let mut rdr = csv::Reader::from_reader(r);
    rdr.deserialize().map(|r| r.map_err(Error::from)).collect()
}

/// `month,value` cumulative loss path.
pub fn write_cum_loss<W: Write>(w: W, months: &[YearMonth], path: &[f64]) -> Result<()> {
    if months.len() != path.len() {
        return Err(Error::invalid("months and cumulative loss path differ in length"));
    }
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["month", "value"])?;
    for (m, v) in months.iter().zip(path) {
        out.write_record([m.to_string(), v.to_string()])?;
    }
    out.flush().map_err(Error::Stream)?;
    Ok(())
}

/// `month,statistic,upper,lower,class`, one row per window labeled by its
/// last month.
pub fn write_fluctuation<W: Write>(w: W, months: &[YearMonth], path: &FluctuationPath) -> Result<()> {
    if months.len() != path.statistics.len() + path.m - 1 {
        return Err(Error::invalid("months do not match the fluctuation path"));
    }
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["month", "statistic", "upper", "lower", "class"])?;
    for (i, (s, c)) in path.statistics.iter().zip(&path.classes).enumerate() {
        out.write_record([
            months[path.window_end(i)].to_string(),
            s.to_string(),
            path.upper.to_string(),
            path.lower.to_string(),
            c.as_str().to_string(),
        ])?;
    }
    out.flush().map_err(Error::Stream)?;
    Ok(())
}

/// `a,b,correlation`.
pub fn write_correlations<W: Write>(w: W, rows: &[Correlation]) -> Result<()> {
    write_rows(w, rows)
}
