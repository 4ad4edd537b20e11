use std::collections::HashMap;
use std::io::Read;

use serde::Serialize;

use super::{f1_macro, SignalLabel};
use crate::error::{Error, Result};

/// Macro-F1 distribution across repetitions at one temperature.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub temperature: f64,
    pub repetitions: usize,
    pub min: f64,
    pub q25: f64,
    pub median: f64,
    pub q75: f64,
    pub max: f64,
    pub mean: f64,
}

/// Reads a `post_id,label` truth file.
pub fn read_truth_file<R: Read>(reader: R) -> Result<Vec<(String, SignalLabel)>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row?;
        let id = row.get(0).unwrap_or_default().to_string();
        let label: SignalLabel = row.get(1).unwrap_or_default().parse()?;
        out.push((id, label));
    }
    Ok(out)
}

/// Linear-interpolation quantile of sorted data.
pub(crate) fn quantile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// Repeats `classify(temperature, repetition)` and scores each run against
/// `truth`. `classify` returns labels keyed by post id.
pub fn accuracy_sweep<F>(
    truth: &[(String, SignalLabel)],
    temperatures: &[f64],
    repetitions: usize,
    mut classify: F,
) -> Result<Vec<SweepRow>>
where
    F: FnMut(f64, usize) -> Result<HashMap<String, SignalLabel>>,
{
    if repetitions == 0 {
        return Err(Error::invalid("repetitions must be positive"));
    }
    let truth_labels: Vec<SignalLabel> = truth.iter().map(|(_, l)| *l).collect();
    let mut rows = Vec::with_capacity(temperatures.len());
    for &t in temperatures {
        let mut scores = Vec::with_capacity(repetitions);
        for rep in 0..repetitions {
            let labels = classify(t, rep)?;
            let pred = truth
                .iter()
                .map(|(id, _)| {
                    labels
                        .get(id)
                        .copied()
                        .ok_or_else(|| Error::invalid(format!("no prediction for post {id}")))
                })
                .collect::<Result<Vec<_>>>()?;
            scores.push(f1_macro(&pred, &truth_labels)?.macro_f1);
        }
        scores.sort_by(f64::total_cmp);
        rows.push(SweepRow {
            temperature: t,
            repetitions,
            min: scores[0],
            q25: quantile(&scores, 0.25),
            median: quantile(&scores, 0.5),
            q75: quantile(&scores, 0.75),
            max: scores[scores.len() - 1],
            mean: scores.iter().sum::<f64>() / scores.len() as f64,
        });
    }
    Ok(rows)
}
