use serde::Serialize;

use super::metrics::{check_finite, mean};
use crate::error::{Error, Result};

const MAX_ITER: usize = 100_000;
const TOL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrincipalComponent {
    pub scores: Vec<f64>,
    /// Unit-norm loadings, first nonzero entry positive.
    pub loadings: Vec<f64>,
    /// Largest eigenvalue of the correlation matrix.
    pub eigenvalue: f64,
    pub iterations: usize,
}

fn standardize(x: &[f64]) -> Result<Vec<f64>> {
    let m = mean(x);
    let sd = (x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (x.len() - 1) as f64).sqrt();
    if sd == 0.0 {
        return Err(Error::invalid("constant series in principal component panel"));
    }
    Ok(x.iter().map(|v| (v - m) / sd).collect())
}

/// First principal component of a panel of equal-length series, each
/// standardized to zero mean and unit variance, by power iteration on the
/// correlation matrix.
pub fn first_pc(panel: &[Vec<f64>]) -> Result<PrincipalComponent> {
    if panel.len() < 2 {
        return Err(Error::invalid("principal component needs at least two series"));
    }
    let n = panel[0].len();
    if n < 3 || panel.iter().any(|s| s.len() != n) {
        return Err(Error::invalid("principal component series must share a length of at least 3"));
    }
    for s in panel {
        check_finite(s)?;
    }
    let z: Vec<Vec<f64>> = panel.iter().map(|s| standardize(s)).collect::<Result<_>>()?;
    let p = z.len();
    let mut c = vec![vec![0.0; p]; p];
    for i in 0..p {
        for j in i..p {
            let v = z[i].iter().zip(&z[j]).map(|(a, b)| a * b).sum::<f64>() / (n - 1) as f64;
            c[i][j] = v;
            c[j][i] = v;
        }
    }
    // Start from the row of largest norm, which is never orthogonal to a
    // dominant eigenvector of a correlation matrix with a positive eigenvalue.
    let mut v = c
        .iter()
        .max_by(|a, b| norm(a).total_cmp(&norm(b)))
        .cloned()
        .expect("non-empty");
    normalize(&mut v);
    let mut iterations = 0;
    let mut converged = false;
    while iterations < MAX_ITER {
        iterations += 1;
        let mut w: Vec<f64> = c.iter().map(|row| row.iter().zip(&v).map(|(a, b)| a * b).sum()).collect();
        normalize(&mut w);
        let delta = w.iter().zip(&v).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        v = w;
        if delta < TOL {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence("power iteration did not converge".into()));
    }
    let eigenvalue: f64 = (0..p).map(|i| v[i] * (0..p).map(|j| c[i][j] * v[j]).sum::<f64>()).sum();
    if let Some(first) = v.iter().find(|x| x.abs() > 1e-12) {
        if *first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
    let scores = (0..n).map(|t| (0..p).map(|i| v[i] * z[i][t]).sum()).collect();
    Ok(PrincipalComponent {
        scores,
        loadings: v,
        eigenvalue,
        iterations,
    })
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn normalize(v: &mut [f64]) {
    let s = norm(v);
    v.iter_mut().for_each(|x| *x /= s);
}

/// Pearson correlation coefficient.
pub fn pearson_corr(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::invalid("correlation needs two series of equal length >= 2"));
    }
    check_finite(x)?;
    check_finite(y)?;
    let (mx, my) = (mean(x), mean(y));
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::invalid("correlation of a constant series"));
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn correlation_examples() {
        let x = [1.0, 3.0, 2.0, 5.0];
        assert_eq!(pearson_corr(&x, &x).unwrap(), 1.0);
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        assert_eq!(pearson_corr(&x, &neg).unwrap(), -1.0);
        assert!(pearson_corr(&[1.0, -1.0, 1.0, -1.0], &[1.0, 1.0, -1.0, -1.0]).unwrap().abs() < 1e-12);
        assert!(pearson_corr(&x, &[1.0; 4]).is_err());
    }

    #[test]
    fn identical_and_negated() {
        let s = vec![0.5, 1.5, -0.2, 3.0, 2.2];
        let pc = first_pc(&[s.clone(), s.clone()]).unwrap();
        assert!(pearson_corr(&pc.scores, &s).unwrap() > 1.0 - 1e-12);
        let neg: Vec<f64> = s.iter().map(|v| -v).collect();
        let pc = first_pc(&[s.clone(), neg]).unwrap();
        assert!(pc.loadings[0] > 0.0);
        assert!((pc.loadings[0] + pc.loadings[1]).abs() < 1e-12);
    }
}
