use rand::Rng as _;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use statrs::distribution::{Continuous, ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::rng::Rng;

/// Number of predictive draws per nowcast in simulate mode.
pub const DEFAULT_DRAWS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CrpsMode {
    Simulate,
    Closed,
}

/// Closed-form CRPS of `N(mu, sigma²)` at `y`.
pub fn crps_closed(mu: f64, sigma: f64, y: f64) -> Result<f64> {
    check(sigma)?;
    if sigma == 0.0 {
        return Ok((y - mu).abs());
    }
    let n = Normal::new(0.0, 1.0).expect("standard normal");
    let z = (y - mu) / sigma;
    let v = sigma * (z * (2.0 * n.cdf(z) - 1.0) + 2.0 * n.pdf(z) - 1.0 / std::f64::consts::PI.sqrt());
    Ok(v.max(0.0))
}

/// Sample CRPS: `mean|x_i - y| - mean_{i,j}|x_i - x_j| / 2`.
pub fn crps_from_samples(samples: &[f64], y: f64) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::invalid("no samples"));
    }
    let n = samples.len() as f64;
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let first = sorted.iter().map(|x| (x - y).abs()).sum::<f64>() / n;
    // sum_{i,j} |x_i - x_j| = 2 * sum_i (2i - n - 1) x_(i) for 1-based ranks
    let spread: f64 = sorted
        .iter()
        .enumerate()
        .map(|(i, x)| (2.0 * (i + 1) as f64 - n - 1.0) * x)
        .sum();
    Ok((first - spread / (n * n)).max(0.0))
}

/// CRPS of `N(mu, sigma²)` at `y` from `draws` simulated nowcasts.
pub fn crps_simulated(mu: f64, sigma: f64, y: f64, draws: usize, rng: &mut Rng) -> Result<f64> {
    check(sigma)?;
    if sigma == 0.0 {
        return Ok((y - mu).abs());
    }
    let xs: Vec<f64> = (0..draws)
        .map(|_| mu + sigma * rng.sample::<f64, _>(StandardNormal))
        .collect();
    crps_from_samples(&xs, y)
}

pub fn crps_normal(mu: f64, sigma: f64, y: f64, mode: CrpsMode, rng: &mut Rng) -> Result<f64> {
    match mode {
        CrpsMode::Closed => crps_closed(mu, sigma, y),
        CrpsMode::Simulate => crps_simulated(mu, sigma, y, DEFAULT_DRAWS, rng),
    }
}

fn check(sigma: f64) -> Result<()> {
    if sigma >= 0.0 && sigma.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("predictive sigma must be finite and non-negative, got {sigma}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from;

    #[test]
    fn point_mass() {
        assert_eq!(crps_closed(1.5, 0.0, 1.5).unwrap(), 0.0);
        assert_eq!(crps_closed(1.0, 0.0, -2.0).unwrap(), 3.0);
        let mut rng = rng_from(0);
        assert_eq!(crps_simulated(1.0, 0.0, -2.0, 10, &mut rng).unwrap(), 3.0);
        assert!(crps_closed(0.0, -1.0, 0.0).is_err());
    }

    #[test]
    fn sorted_formula_matches_pairs() {
        let xs: [f64; 5] = [0.3, -1.0, 2.2, 0.9, -0.4];
        let y: f64 = 0.5;
        let n = xs.len() as f64;
        let a: f64 = xs.iter().map(|x| (x - y).abs()).sum::<f64>() / n;
        let b: f64 = xs.iter().flat_map(|x| xs.iter().map(move |z| (x - z).abs())).sum::<f64>() / (n * n);
        assert!((crps_from_samples(&xs, y).unwrap() - (a - b / 2.0)).abs() < 1e-14);
    }

    #[test]
    fn small_sigma_limit_and_minimum() {
        assert!((crps_closed(0.0, 1e-9, 2.0).unwrap() - 2.0).abs() < 1e-8);
        let at = crps_closed(1.0, 0.7, 1.0).unwrap();
        for d in [-0.5, -0.1, 0.05, 0.3] {
            assert!(crps_closed(1.0 + d, 0.7, 1.0).unwrap() > at);
        }
    }
}
