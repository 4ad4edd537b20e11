use serde::Serialize;

use super::SignalLabel;
use crate::error::{Error, Result};

/// 3x3 counts indexed `(truth, prediction)` in UP, NEUTRAL, DOWN order.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ConfusionCounts {
    pub counts: [[u64; 3]; 3],
}

impl ConfusionCounts {
    pub fn from_pairs(pred: &[SignalLabel], truth: &[SignalLabel]) -> Result<Self> {
        if pred.len() != truth.len() {
            return Err(Error::invalid(format!(
                "prediction length {} differs from truth length {}",
                pred.len(),
                truth.len()
            )));
        }
        let mut c = Self::default();
        for (p, t) in pred.iter().zip(truth) {
            c.add(*t, *p);
        }
        Ok(c)
    }

    pub fn add(&mut self, truth: SignalLabel, pred: SignalLabel) {
        self.counts[truth.index()][pred.index()] += 1;
    }

    /// Sums per-worker counts.
    pub fn merge(&mut self, other: &ConfusionCounts) {
        for (row, orow) in self.counts.iter_mut().zip(&other.counts) {
            for (c, o) in row.iter_mut().zip(orow) {
                *c += o;
            }
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    fn tp_fp_fn(&self, class: SignalLabel) -> (u64, u64, u64) {
        let k = class.index();
        let tp = self.counts[k][k];
        let predicted: u64 = (0..3).map(|t| self.counts[t][k]).sum();
        let actual: u64 = self.counts[k].iter().sum();
        (tp, predicted - tp, actual - tp)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassScore {
    pub label: SignalLabel,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// False when the class occurs in neither predictions nor truth.
    pub present: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct F1Report {
    pub macro_f1: f64,
    pub per_class: Vec<ClassScore>,
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Macro-averaged F1 over the three labels.
///
/// Precision or recall with a zero denominator is 0, and so is F1 when
/// `P + R = 0`. A class absent from both predictions and truth is left out
/// of the average, so identical sequences always score 1.
pub fn f1_macro(pred: &[SignalLabel], truth: &[SignalLabel]) -> Result<F1Report> {
    if pred.is_empty() {
        return Err(Error::invalid("f1_macro needs at least one label"));
    }
    let cm = ConfusionCounts::from_pairs(pred, truth)?;
    Ok(report_from_counts(&cm))
}

pub fn report_from_counts(cm: &ConfusionCounts) -> F1Report {
    let per_class: Vec<ClassScore> = SignalLabel::ALL
        .iter()
        .map(|&label| {
            let (tp, fp, fn_) = cm.tp_fp_fn(label);
            let precision = ratio(tp, tp + fp);
            let recall = ratio(tp, tp + fn_);
            let f1 = if precision + recall > 0.0 {
                2.0 * precision * recall / (precision + recall)
            } else {
                0.0
            };
            ClassScore {
                label,
                precision,
                recall,
                f1,
                present: tp + fp + fn_ > 0,
            }
        })
        .collect();
    let present: Vec<f64> = per_class.iter().filter(|c| c.present).map(|c| c.f1).collect();
    let macro_f1 = if present.is_empty() {
        0.0
    } else {
        present.iter().sum::<f64>() / present.len() as f64
    };
    F1Report {
        macro_f1,
        per_class,
    }
}
