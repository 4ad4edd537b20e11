use serde::{Deserialize, Serialize};

use super::metrics::{check_finite, mean};
use crate::error::{Error, Result};

/// Window shares with tabulated two-sided critical values.
pub const GR_MU: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];
/// Two-sided critical values of the fluctuation test at the 5% level.
pub const GR_CRIT_05: [f64; 9] = [3.393, 3.179, 3.012, 2.890, 2.779, 2.634, 2.560, 2.433, 2.248];
/// Two-sided critical values of the fluctuation test at the 10% level.
pub const GR_CRIT_10: [f64; 9] = [3.170, 2.948, 2.766, 2.626, 2.500, 2.356, 2.252, 2.130, 1.950];

/// Tabulated critical value for window share `mu` and level `alpha`.
pub fn gr_critical_value(mu: f64, alpha: f64) -> Result<f64> {
    let table = if (alpha - 0.05).abs() < 1e-12 {
        &GR_CRIT_05
    } else if (alpha - 0.10).abs() < 1e-12 {
        &GR_CRIT_10
    } else {
        return Err(Error::invalid(format!("no fluctuation critical values for alpha = {alpha}")));
    };
    GR_MU
        .iter()
        .position(|m| (m - mu).abs() < 1e-9)
        .map(|i| table[i])
        .ok_or_else(|| Error::invalid(format!("no fluctuation critical values for mu = {mu}")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowClass {
    Outperform,
    Inconclusive,
    Underperform,
}

impl WindowClass {
    pub fn as_str(self) -> &'static str {
        match self {
            WindowClass::Outperform => "outperform",
            WindowClass::Inconclusive => "inconclusive",
            WindowClass::Underperform => "underperform",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FluctuationPath {
    pub mu: f64,
    /// Window length in periods.
    pub m: usize,
    /// Full-sample HAC standard deviation of the differential.
    pub sigma: f64,
    /// Statistic for the window ending at period `m - 1 + i`.
    pub statistics: Vec<f64>,
    pub upper: f64,
    pub lower: f64,
    pub classes: Vec<WindowClass>,
}

impl FluctuationPath {
    /// Index in the input series of the last period of window `i`.
    pub fn window_end(&self, i: usize) -> usize {
        self.m - 1 + i
    }
}

/// Bartlett lag truncation `floor(4 (n/100)^(2/9))`.
pub fn bartlett_lags(n: usize) -> usize {
    (4.0 * (n as f64 / 100.0).powf(2.0 / 9.0)).floor() as usize
}

/// Bartlett-kernel long-run standard deviation of `d`.
pub fn hac_sd(d: &[f64]) -> f64 {
    let n = d.len();
    let dbar = mean(d);
    let gamma = |lag: usize| (lag..n).map(|t| (d[t] - dbar) * (d[t - lag] - dbar)).sum::<f64>() / n as f64;
    let lags = bartlett_lags(n).min(n.saturating_sub(1));
    let mut v = gamma(0);
    for l in 1..=lags {
        v += 2.0 * (1.0 - l as f64 / (lags + 1) as f64) * gamma(l);
    }
    v.max(0.0).sqrt()
}

/// Rolling-window fluctuation test on the loss differential `d_t = model -
/// benchmark`: window statistic `sqrt(m) * mean(window) / sigma_hac` against
/// two-sided bands. Below the lower band the model outperforms.
pub fn gr_fluctuation(d: &[f64], mu: f64, alpha: f64) -> Result<FluctuationPath> {
    let p = d.len();
    if p < 20 {
        return Err(Error::invalid(format!("fluctuation test needs at least 20 periods, got {p}")));
    }
    if !(mu > 0.0 && mu < 1.0) {
        return Err(Error::invalid(format!("window share must be in (0, 1), got {mu}")));
    }
    check_finite(d)?;
    let crit = gr_critical_value(mu, alpha)?;
    let m = ((mu * p as f64).round() as usize).max(1);
    let sigma = hac_sd(d);
    let scale = (m as f64).sqrt();
    let statistics: Vec<f64> = d
        .windows(m)
        .map(|w| {
            let s: f64 = w.iter().sum::<f64>() / m as f64;
            if s == 0.0 {
                0.0
            } else if sigma == 0.0 {
                s.signum() * f64::INFINITY
            } else {
                scale * s / sigma
            }
        })
        .collect();
    let classes = statistics
        .iter()
        .map(|&s| {
            if s < -crit {
                WindowClass::Outperform
            } else if s > crit {
                WindowClass::Underperform
            } else {
                WindowClass::Inconclusive
            }
        })
        .collect();
    Ok(FluctuationPath {
        mu,
        m,
        sigma,
        statistics,
        upper: crit,
        lower: -crit,
        classes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lag_rule() {
        assert_eq!(bartlett_lags(100), 4);
        assert_eq!(bartlett_lags(72), 3);
    }

    #[test]
    fn zero_differential() {
        let r = gr_fluctuation(&[0.0; 72], 0.1, 0.05).unwrap();
        assert_eq!(r.m, 7);
        assert_eq!(r.statistics.len(), 66);
        assert!(r.statistics.iter().all(|&s| s == 0.0));
        assert!(r.classes.iter().all(|&c| c == WindowClass::Inconclusive));
    }

    #[test]
    fn unknown_mu_rejected() {
        assert!(gr_fluctuation(&[0.0; 72], 0.15, 0.05).is_err());
        assert!(gr_fluctuation(&[0.0; 10], 0.1, 0.05).is_err());
        assert_eq!(gr_critical_value(0.1, 0.10).unwrap(), 3.170);
    }
}
