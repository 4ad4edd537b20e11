use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use super::metrics::{check_finite, mean};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Loss {
    Squared,
    Absolute,
}

impl Loss {
    pub fn apply(self, e: f64) -> f64 {
        match self {
            Loss::Squared => e * e,
            Loss::Absolute => e.abs(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sided {
    /// Alternative: model loss below benchmark loss.
    One,
    Two,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub statistic: f64,
    pub p_value: f64,
    pub n: usize,
    pub sided: Sided,
    /// The loss differential had zero variance and a nonzero mean.
    pub degenerate: bool,
}

/// Small-sample correction factor for horizon `h`.
pub fn harvey_factor(n: usize, h: usize) -> f64 {
    let (n, h) = (n as f64, h as f64);
    ((n + 1.0 - 2.0 * h + h * (h - 1.0) / n) / n).sqrt()
}

/// Diebold-Mariano test on forecast errors under `loss`.
pub fn dm_test(e_model: &[f64], e_bench: &[f64], loss: Loss, h: usize, sided: Sided) -> Result<TestResult> {
    if e_model.len() != e_bench.len() {
        return Err(Error::invalid("error series have different lengths"));
    }
    let lm: Vec<f64> = e_model.iter().map(|&e| loss.apply(e)).collect();
    let lb: Vec<f64> = e_bench.iter().map(|&e| loss.apply(e)).collect();
    dm_test_losses(&lm, &lb, h, sided)
}

/// Diebold-Mariano test with the Harvey correction on per-period losses,
/// `d_t = model_t - bench_t`, Student-t reference with `n - 1` degrees of
/// freedom.
pub fn dm_test_losses(model: &[f64], bench: &[f64], h: usize, sided: Sided) -> Result<TestResult> {
    if model.len() != bench.len() {
        return Err(Error::invalid("loss series have different lengths"));
    }
    let n = model.len();
    if n < 10 {
        return Err(Error::invalid(format!("Diebold-Mariano test needs at least 10 periods, got {n}")));
    }
    if h == 0 || h >= n {
        return Err(Error::invalid(format!("horizon {h} out of range")));
    }
    check_finite(model)?;
    check_finite(bench)?;
    let d: Vec<f64> = model.iter().zip(bench).map(|(m, b)| m - b).collect();
    let dbar = mean(&d);
    let mut lrv = autocov(&d, dbar, 0);
    for lag in 1..h {
        lrv += 2.0 * autocov(&d, dbar, lag);
    }
    let result = |statistic: f64, p_value: f64, degenerate: bool| TestResult {
        statistic,
        p_value,
        n,
        sided,
        degenerate,
    };
    if d.iter().all(|&x| x == d[0]) || lrv <= 0.0 {
        if dbar == 0.0 {
            let p = if sided == Sided::Two { 1.0 } else { 0.5 };
            return Ok(result(0.0, p, false));
        }
        let statistic = if dbar < 0.0 { f64::NEG_INFINITY } else { f64::INFINITY };
        let p = match sided {
            Sided::One if dbar < 0.0 => 0.0,
            Sided::One => 1.0,
            Sided::Two => 0.0,
        };
        return Ok(result(statistic, p, true));
    }
    let statistic = harvey_factor(n, h) * dbar / (lrv / n as f64).sqrt();
    let t = StudentsT::new(0.0, 1.0, (n - 1) as f64).expect("positive degrees of freedom");
    let p = match sided {
        Sided::One => t.cdf(statistic),
        Sided::Two => 2.0 * t.cdf(-statistic.abs()),
    };
    Ok(result(statistic, p.clamp(0.0, 1.0), false))
}

fn autocov(d: &[f64], dbar: f64, lag: usize) -> f64 {
    let n = d.len();
    (lag..n).map(|t| (d[t] - dbar) * (d[t - lag] - dbar)).sum::<f64>() / n as f64
}
