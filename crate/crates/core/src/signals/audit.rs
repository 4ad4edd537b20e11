use std::collections::BTreeMap;
use std::io::Write;

use crate::calendar::YearMonth;
use crate::classifier::SignalLabel;
use crate::error::{Error, Result};

/// Label transitions between submission-only and comment-voted labels.
#[derive(Debug, Clone, PartialEq)]
pub struct AuditReport {
    /// `transitions[from][to]`, indexed by label value + 1 (DOWN, NEUTRAL, UP).
    pub transitions: [[u64; 3]; 3],
    pub total_items: u64,
    pub changed: u64,
    /// `changed / total_items`.
    pub share: f64,
    /// Upward moves, a DOWN -> UP jump counting twice.
    pub upgrades: u64,
    pub downgrades: u64,
    /// `upgrades / downgrades`; NaN without downgrades.
    pub ratio: f64,
    /// Share of re-labeled submissions per calendar month.
    pub monthly: Vec<(YearMonth, f64)>,
}

fn idx(l: SignalLabel) -> usize {
    (l.value() + 1) as usize
}

impl AuditReport {
    /// Summary from transition counts alone.
    pub fn from_transitions(transitions: [[u64; 3]; 3], total_items: u64) -> Self {
        let (down, neutral, up) = (0, 1, 2);
        let t = &transitions;
        let changed = (0..3)
            .flat_map(|f| (0..3).map(move |to| (f, to)))
            .filter(|(f, to)| f != to)
            .map(|(f, to)| t[f][to])
            .sum();
        let upgrades = t[down][neutral] + t[neutral][up] + 2 * t[down][up];
        let downgrades = t[up][neutral] + t[neutral][down] + 2 * t[up][down];
        let share = if total_items == 0 {
            f64::NAN
        } else {
            changed as f64 / total_items as f64
        };
        let ratio = if downgrades == 0 {
            f64::NAN
        } else {
            upgrades as f64 / downgrades as f64
        };
        Self {
            transitions,
            total_items,
            changed,
            share,
            upgrades,
            downgrades,
            ratio,
            monthly: Vec::new(),
        }
    }

    pub fn count(&self, from: SignalLabel, to: SignalLabel) -> u64 {
        self.transitions[idx(from)][idx(to)]
    }

    /// Off-diagonal transitions as `from,to,count` rows.
    pub fn write_transitions_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["from", "to", "count"])?;
        for from in [SignalLabel::Down, SignalLabel::Neutral, SignalLabel::Up] {
            for to in [SignalLabel::Down, SignalLabel::Neutral, SignalLabel::Up] {
                if from != to {
                    wtr.write_record([
                        from.value().to_string(),
                        to.value().to_string(),
                        self.count(from, to).to_string(),
                    ])?;
                }
            }
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn write_monthly_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["month", "fraction"])?;
        for (m, f) in &self.monthly {
            wtr.write_record([m.to_string(), f.to_string()])?;
        }
        wtr.flush()?;
        Ok(())
    }
}

/// Compares original and re-labeled submission labels; `months` (same
/// length, optional) gives each submission's calendar month.
pub fn reclassification_audit(
    original: &[SignalLabel],
    relabeled: &[SignalLabel],
    months: Option<&[YearMonth]>,
) -> Result<AuditReport> {
    if original.len() != relabeled.len() {
        return Err(Error::invalid(format!(
            "{} original labels but {} re-labeled",
            original.len(),
            relabeled.len()
        )));
    }
    let mut t = [[0u64; 3]; 3];
    for (a, b) in original.iter().zip(relabeled) {
        t[idx(*a)][idx(*b)] += 1;
    }
    let mut report = AuditReport::from_transitions(t, original.len() as u64);
    if let Some(months) = months {
        if months.len() != original.len() {
            return Err(Error::invalid("months length differs from labels"));
        }
        let mut per: BTreeMap<YearMonth, (u64, u64)> = BTreeMap::new();
        for ((m, a), b) in months.iter().zip(original).zip(relabeled) {
            let e = per.entry(*m).or_default();
            e.1 += 1;
            if a != b {
                e.0 += 1;
            }
        }
        report.monthly = per
            .into_iter()
            .map(|(m, (c, n))| (m, c as f64 / n as f64))
            .collect();
    }
    Ok(report)
}
