use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointMetrics {
    pub rmsfe: f64,
    pub mafe: f64,
}

/// Root mean squared and mean absolute forecast error.
pub fn point_metrics(errors: &[f64]) -> Result<PointMetrics> {
    if errors.is_empty() {
        return Err(Error::invalid("no forecast errors"));
    }
    check_finite(errors)?;
    let n = errors.len() as f64;
    Ok(PointMetrics {
        rmsfe: (errors.iter().map(|e| e * e).sum::<f64>() / n).sqrt(),
        mafe: errors.iter().map(|e| e.abs()).sum::<f64>() / n,
    })
}

/// Model over benchmark; values below 1 favor the model.
pub fn ratio(model: f64, benchmark: f64) -> f64 {
    if model == benchmark {
        1.0
    } else {
        model / benchmark
    }
}

/// Significance marker at the 0.10, 0.05 and 0.01 levels.
pub fn stars(p: f64) -> &'static str {
    if p < 0.01 {
        "***"
    } else if p < 0.05 {
        "**"
    } else if p < 0.10 {
        "*"
    } else {
        ""
    }
}

pub(crate) fn check_finite(xs: &[f64]) -> Result<()> {
    match xs.iter().position(|x| !x.is_finite()) {
        Some(i) => Err(Error::invalid(format!("non-finite value at position {i}"))),
        None => Ok(()),
    }
}

pub(crate) fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Running sum of `e_model² - e_bench²`.
pub fn cum_loss_diff(e_model: &[f64], e_bench: &[f64]) -> Result<Vec<f64>> {
    if e_model.len() != e_bench.len() {
        return Err(Error::invalid("error series have different lengths"));
    }
    check_finite(e_model)?;
    check_finite(e_bench)?;
    let mut acc = 0.0;
    Ok(e_model
        .iter()
        .zip(e_bench)
        .map(|(m, b)| {
            acc += m * m - b * b;
            acc
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_examples() {
        let m = point_metrics(&[3.0, -4.0]).unwrap();
        assert!((m.rmsfe - 12.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(m.mafe, 3.5);
        assert_eq!(point_metrics(&[0.0; 4]).unwrap(), PointMetrics { rmsfe: 0.0, mafe: 0.0 });
        assert_eq!(ratio(0.0, 0.0), 1.0);
        assert_eq!(ratio(2.5, 2.5), 1.0);
        assert!(point_metrics(&[]).is_err());
        assert!(point_metrics(&[f64::NAN]).is_err());
    }

    #[test]
    fn star_levels() {
        assert_eq!(stars(0.005), "***");
        assert_eq!(stars(0.01), "**");
        assert_eq!(stars(0.07), "*");
        assert_eq!(stars(0.10), "");
    }

    #[test]
    fn cumulative_loss() {
        assert!(cum_loss_diff(&[1.0, -2.0], &[1.0, -2.0]).unwrap().iter().all(|&v| v == 0.0));
        let path = cum_loss_diff(&[1.0, 1.0, 1.0, 1.0], &[1.0, 1.0, 4.0, 1.0]).unwrap();
        assert_eq!(path, vec![0.0, 0.0, -15.0, -15.0]);
        let m = [0.3, -1.2, 0.8, 2.0, -0.1];
        let b = [0.5, -1.0, 1.5, 1.0, 0.4];
        let last = *cum_loss_diff(&m, &b).unwrap().last().unwrap();
        let (pm, pb) = (point_metrics(&m).unwrap(), point_metrics(&b).unwrap());
        assert!((last - 5.0 * (pm.rmsfe.powi(2) - pb.rmsfe.powi(2))).abs() < 1e-12);
        assert_eq!(last < 0.0, pm.rmsfe < pb.rmsfe);
    }
}
