//! Dense least squares by Householder QR.

use crate::error::{Error, Result};

/// Relative diagonal size of R below which a column counts as collinear.
const RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct LeastSquares {
    pub coef: Vec<f64>,
    pub ssr: f64,
    pub fitted: Vec<f64>,
}

/// Minimizes `||y - X b||²` where `columns[j]` is column `j` of `X`.
///
/// Columns are scaled to unit norm before factorization; a column that is
/// zero or a linear combination of earlier ones yields [`Error::Singular`].
pub fn least_squares(columns: &[Vec<f64>], y: &[f64]) -> Result<LeastSquares> {
    let n = y.len();
    let p = columns.len();
    if p == 0 {
        return Ok(LeastSquares {
            coef: Vec::new(),
            ssr: y.iter().map(|v| v * v).sum(),
            fitted: vec![0.0; n],
        });
    }
    if n < p {
        return Err(Error::Singular(format!("{n} observations for {p} coefficients")));
    }
    if columns.iter().any(|c| c.len() != n) {
        return Err(Error::invalid("design columns differ in length from y"));
    }

    let mut scale = Vec::with_capacity(p);
    let mut a: Vec<Vec<f64>> = Vec::with_capacity(p);
    for (j, col) in columns.iter().enumerate() {
        let norm = col.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::Singular(format!("design column {j} is zero or non-finite")));
        }
        scale.push(norm);
        a.push(col.iter().map(|v| v / norm).collect());
    }
    let mut qty = y.to_vec();

    for j in 0..p {
        let (head, tail) = a.split_at_mut(j + 1);
        let col = &mut head[j];
        let alpha = col[j..].iter().map(|v| v * v).sum::<f64>().sqrt();
        if alpha < RANK_TOL {
            return Err(Error::Singular(format!(
                "design column {j} is collinear with earlier columns"
            )));
        }
        let alpha = if col[j] > 0.0 { -alpha } else { alpha };
        // Householder vector v = x - alpha e1, stored in col[j..].
        col[j] -= alpha;
        let vnorm2: f64 = col[j..].iter().map(|v| v * v).sum();
        let reflect = |x: &mut [f64], v: &[f64]| {
            let dot: f64 = x.iter().zip(v).map(|(a, b)| a * b).sum();
            let f = 2.0 * dot / vnorm2;
            for (xi, vi) in x.iter_mut().zip(v) {
                *xi -= f * vi;
            }
        };
        let v = col[j..].to_vec();
        for other in tail.iter_mut() {
            reflect(&mut other[j..], &v);
        }
        reflect(&mut qty[j..], &v);
        col[j] = alpha;
    }

    // back substitution on the upper triangle R[i][j] = a[j][i]
    let mut coef = vec![0.0; p];
    for i in (0..p).rev() {
        let mut s = qty[i];
        for j in i + 1..p {
            s -= a[j][i] * coef[j];
        }
        coef[i] = s / a[i][i];
    }
    for (c, s) in coef.iter_mut().zip(&scale) {
        *c /= s;
    }

    let fitted: Vec<f64> = (0..n)
        .map(|t| columns.iter().zip(&coef).map(|(col, b)| col[t] * b).sum())
        .collect();
    let ssr = y.iter().zip(&fitted).map(|(a, b)| (a - b) * (a - b)).sum();
    Ok(LeastSquares { coef, ssr, fitted })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let x: Vec<f64> = (0..10).map(f64::from).collect();
        let y: Vec<f64> = x.iter().map(|v| 2.0 - 0.5 * v).collect();
        let fit = least_squares(&[vec![1.0; 10], x], &y).unwrap();
        assert!((fit.coef[0] - 2.0).abs() < 1e-12);
        assert!((fit.coef[1] + 0.5).abs() < 1e-12);
        assert!(fit.ssr < 1e-20);
    }

    #[test]
    fn normal_equations_agree() {
        // 3-column problem, compared against a hand-solved normal system.
        let c0 = vec![1.0; 6];
        let c1 = vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let c2 = vec![0.5, -1.0, 2.0, 0.0, 1.5, -0.5];
        let y = vec![1.0, 0.0, 4.0, 2.0, 5.0, 1.0];
        let fit = least_squares(&[c0.clone(), c1.clone(), c2.clone()], &y).unwrap();
        let cols = [c0, c1, c2];
        // residual orthogonal to every column
        let resid: Vec<f64> = y.iter().zip(&fit.fitted).map(|(a, b)| a - b).collect();
        for c in &cols {
            let dot: f64 = c.iter().zip(&resid).map(|(a, b)| a * b).sum();
            assert!(dot.abs() < 1e-10);
        }
    }

    #[test]
    fn collinear_is_singular() {
        let c1 = vec![3.0; 5];
        assert!(matches!(
            least_squares(&[vec![1.0; 5], c1], &[1.0, 2.0, 3.0, 4.0, 5.0]),
            Err(Error::Singular(_))
        ));
        assert!(least_squares(&[vec![0.0; 3]], &[1.0, 2.0, 3.0]).is_err());
        assert!(least_squares(&[vec![1.0; 1], vec![2.0; 1]], &[1.0]).is_err());
    }
}
