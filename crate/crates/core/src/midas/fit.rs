use chrono::{Duration, NaiveDate};
use serde::{Deserialize, Serialize};

use super::almon::almon_weights_into;
use super::ols::least_squares;
use super::simplex::{nelder_mead, SimplexOptions};
use super::store::daily_window;
use super::MonthlySeries;
use crate::calendar::YearMonth;
use crate::error::{Error, Result};
use crate::signals::DailySeries;

/// Estimation settings for the MIDAS-AR model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MidasOptions {
    /// Daily lags per block.
    pub k: usize,
    /// Days between the ends of consecutive blocks.
    pub block_offset: usize,
    /// Largest number of blocks tried by AIC selection.
    pub q_max: usize,
    /// Starting points `(gamma1, gamma2)` of the simplex search.
    pub starts: Vec<[f64; 2]>,
    /// Largest admissible `|gamma1|` and `|gamma2|`.
    pub gamma_bounds: [f64; 2],
    pub max_iter: usize,
    pub ftol: f64,
}

impl Default for MidasOptions {
    fn default() -> Self {
        Self {
            k: 30,
            block_offset: 30,
            q_max: 3,
            starts: vec![[0.0, 0.0], [-0.1, 0.0], [0.1, 0.0], [0.0, -0.01]],
            gamma_bounds: [0.3, 0.01],
            max_iter: 500,
            ftol: 1e-10,
        }
    }
}

impl MidasOptions {
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 || self.block_offset == 0 || self.q_max == 0 {
            return Err(Error::invalid("k, block_offset and q_max must be positive"));
        }
        if self.starts.is_empty() {
            return Err(Error::invalid("at least one simplex start is required"));
        }
        if !self.gamma_bounds.iter().all(|b| b.is_finite() && *b > 0.0) {
            return Err(Error::invalid("gamma bounds must be positive and finite"));
        }
        if let Some(s) = self.starts.iter().find(|s| !self.admissible(**s)) {
            return Err(Error::invalid(format!("simplex start {s:?} lies outside the gamma bounds")));
        }
        Ok(())
    }

    /// Whether `gamma` lies inside the admissible box.
    pub fn admissible(&self, gamma: [f64; 2]) -> bool {
        gamma[0].abs() <= self.gamma_bounds[0] && gamma[1].abs() <= self.gamma_bounds[1]
    }

    fn simplex(&self) -> SimplexOptions {
        SimplexOptions {
            max_iter: self.max_iter,
            ftol: self.ftol,
            ..SimplexOptions::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MidasFit {
    pub c: f64,
    pub alpha: f64,
    pub beta: Vec<f64>,
    pub gamma: [f64; 2],
    pub q: usize,
    pub k: usize,
    pub ssr: f64,
    pub n_obs: usize,
    pub sigma: f64,
    pub iterations: usize,
    /// Best objective value per accepted simplex iteration of the winning start.
    #[serde(skip)]
    pub trace: Vec<f64>,
}

impl MidasFit {
    /// Number of estimated parameters: c, alpha, q slopes and two exponents.
    pub fn n_params(&self) -> usize {
        param_count(self.q)
    }

    pub fn aic(&self) -> f64 {
        aic(self.ssr, self.n_obs, self.n_params())
    }

    /// Conditional mean given the lagged target and the aligned blocks
    /// (block `j` most recent first).
    pub fn predict(&self, y_lag: f64, blocks: &[Vec<f64>]) -> Result<f64> {
        if blocks.len() < self.q {
            return Err(Error::invalid(format!("{} blocks given, {} needed", blocks.len(), self.q)));
        }
        let w = super::almon_weights(self.gamma[0], self.gamma[1], self.k - 1)?;
        let mut v = self.c + self.alpha * y_lag;
        for (b, block) in self.beta.iter().zip(blocks) {
            v += b * dot(&w, block);
        }
        Ok(v)
    }
}

fn param_count(q: usize) -> usize {
    4 + q
}

fn aic(ssr: f64, n: usize, params: usize) -> f64 {
    let n = n as f64;
    n * (ssr / n).ln() + 2.0 * params as f64
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ar1Fit {
    pub c: f64,
    pub alpha: f64,
    pub sigma: f64,
    pub ssr: f64,
    pub n_obs: usize,
}

impl Ar1Fit {
    pub fn predict(&self, y_lag: f64) -> f64 {
        self.c + self.alpha * y_lag
    }
}

/// OLS of `y_t` on `(1, y_{t-1})`, with `sigma² = SSR / (n - 2)`.
pub fn fit_ar1(y: &[f64]) -> Result<Ar1Fit> {
    if y.len() < 3 {
        return Err(Error::invalid(format!("AR(1) needs at least 3 values, got {}", y.len())));
    }
    let n = y.len() - 1;
    let fit = least_squares(&[vec![1.0; n], y[..n].to_vec()], &y[1..])?;
    let sigma = if n > 2 { (fit.ssr / (n - 2) as f64).sqrt() } else { 0.0 };
    Ok(Ar1Fit {
        c: fit.coef[0],
        alpha: fit.coef[1],
        sigma,
        ssr: fit.ssr,
        n_obs: n,
    })
}

/// Anchor day of month `month`: its last day minus `cutoff_days`.
pub(crate) fn anchor(month: YearMonth, cutoff_days: u32) -> NaiveDate {
    month.last_day() - Duration::days(i64::from(cutoff_days))
}

pub(crate) fn align_with<F>(
    mut window: F,
    month: YearMonth,
    cutoff_days: u32,
    k: usize,
    q: usize,
    offset: usize,
) -> Result<Vec<Vec<f64>>>
where
    F: FnMut(NaiveDate, usize) -> Result<Vec<f64>>,
{
    let s = anchor(month, cutoff_days);
    (0..q)
        .map(|j| window(s - Duration::days((j * offset) as i64), k))
        .collect()
}

/// Regressor blocks for `month`: block `j` (1-based) holds the `k` daily
/// values ending `(j-1) * offset` days before the anchor day, most recent
/// first.
pub fn align_daily(
    daily: &DailySeries,
    month: YearMonth,
    cutoff_days: u32,
    k: usize,
    q: usize,
    offset: usize,
) -> Result<Vec<Vec<f64>>> {
    align_with(|end, len| daily_window(daily, end, len), month, cutoff_days, k, q, offset)
}

/// Regression sample: target, its lag and the aligned blocks per month.
#[derive(Debug, Clone, Default)]
pub(crate) struct MidasData {
    pub y: Vec<f64>,
    pub y_lag: Vec<f64>,
    /// `blocks[t][j]` is block `j` of observation `t`.
    pub blocks: Vec<Vec<Vec<f64>>>,
}

impl MidasData {
    pub fn push(&mut self, y: f64, y_lag: f64, blocks: Vec<Vec<f64>>) {
        self.y.push(y);
        self.y_lag.push(y_lag);
        self.blocks.push(blocks);
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn from_series(
        y: &MonthlySeries,
        daily: &DailySeries,
        q: usize,
        cutoff_days: u32,
        opts: &MidasOptions,
    ) -> Result<Self> {
        let mut data = MidasData::default();
        for (i, m) in y.months().enumerate().skip(1) {
            let blocks = align_daily(daily, m, cutoff_days, opts.k, q, opts.block_offset)?;
            data.push(y.values[i], y.values[i - 1], blocks);
        }
        Ok(data)
    }

    /// Least-squares fit of `(c, alpha, beta_1..beta_q)` for fixed weights.
    fn profile(&self, gamma: [f64; 2], q: usize, k: usize, w: &mut Vec<f64>) -> Result<(Vec<f64>, f64)> {
        almon_weights_into(gamma[0], gamma[1], k - 1, w)?;
        let n = self.len();
        let mut cols = Vec::with_capacity(2 + q);
        cols.push(vec![1.0; n]);
        cols.push(self.y_lag.clone());
        for j in 0..q {
            cols.push(self.blocks.iter().map(|b| dot(w, &b[j])).collect());
        }
        let fit = least_squares(&cols, &self.y)?;
        Ok((fit.coef, fit.ssr))
    }

    /// SSR of the AR(1) part alone (all slopes zero).
    #[cfg(test)]
    pub fn ar_only_ssr(&self) -> Result<f64> {
        let n = self.len();
        Ok(least_squares(&[vec![1.0; n], self.y_lag.clone()], &self.y)?.ssr)
    }

    fn check(&self, q: usize, opts: &MidasOptions) -> Result<()> {
        opts.validate()?;
        if q == 0 || self.blocks.iter().any(|b| b.len() < q) {
            return Err(Error::invalid(format!("q = {q} blocks not available in the design")));
        }
        let n = self.len();
        if n <= param_count(q) {
            return Err(Error::invalid(format!(
                "{n} observations for {} parameters",
                param_count(q)
            )));
        }
        Ok(())
    }

    pub fn fit(&self, q: usize, opts: &MidasOptions) -> Result<MidasFit> {
        self.check(q, opts)?;
        let conc = Concentrated::new(self, q, opts.k)?;
        self.fit_with(&conc, q, opts)
    }

    /// Multi-start search on the concentrated objective, then a restart on
    /// the exact QR objective from the best point.
    fn fit_with(&self, conc: &Concentrated, q: usize, opts: &MidasOptions) -> Result<MidasFit> {
        let k = opts.k;
        let n = self.len();
        let mut w = Vec::with_capacity(k);
        // Collinearity that does not depend on the weights shows up at any start.
        self.profile(opts.starts[0], q, k, &mut w)?;

        let simplex = opts.simplex();
        let mut scratch = Vec::new();
        let mut best: Option<super::SimplexResult> = None;
        let mut any_converged = false;
        let mut iterations = 0;
        for &start in &opts.starts {
            let mut objective = |g: [f64; 2]| {
                if !opts.admissible(g) || almon_weights_into(g[0], g[1], k - 1, &mut w).is_err() {
                    return f64::INFINITY;
                }
                conc.ssr(&w, q, &mut scratch)
            };
            let mut run = nelder_mead(&mut objective, start, &simplex);
            iterations += run.iterations;
            // Restart once from the optimum to guard against a collapsed simplex.
            if run.converged {
                let again = nelder_mead(&mut objective, run.x, &simplex);
                iterations += again.iterations;
                if again.f < run.f {
                    run = again;
                }
            }
            any_converged |= run.converged;
            if best.as_ref().map_or(true, |b| run.f < b.f) {
                best = Some(run);
            }
        }
        let best = best.expect("at least one start");
        let mut exact = |g: [f64; 2]| {
            if !opts.admissible(g) {
                return f64::INFINITY;
            }
            self.profile(g, q, k, &mut w).map(|r| r.1).unwrap_or(f64::INFINITY)
        };
        let at_best = exact(best.x);
        let polish = nelder_mead(&mut exact, best.x, &simplex);
        iterations += polish.iterations;
        any_converged |= polish.converged;
        let (gamma, f) = if polish.f <= at_best { (polish.x, polish.f) } else { (best.x, at_best) };
        if !any_converged || !f.is_finite() {
            return Err(Error::NoConvergence(format!(
                "no simplex start converged for q = {q}; best SSR {f:.6e} at gamma = ({:.6}, {:.6}) after {iterations} iterations",
                gamma[0], gamma[1]
            )));
        }
        let (coef, ssr) = self.profile(gamma, q, k, &mut w)?;
        let dof = (n - param_count(q)) as f64;
        Ok(MidasFit {
            c: coef[0],
            alpha: coef[1],
            beta: coef[2..].to_vec(),
            gamma,
            q,
            k,
            ssr,
            n_obs: n,
            sigma: (ssr / dof).sqrt(),
            iterations,
            trace: polish.trace,
        })
    }

    /// Fits `q = 1..=q_max` and keeps the smallest AIC (ties to smaller q).
    pub fn select(&self, q_max: usize, opts: &MidasOptions) -> Result<MidasFit> {
        self.check(1, opts)?;
        let q_avail = q_max.min(self.blocks.iter().map(Vec::len).min().unwrap_or(0));
        let conc = Concentrated::new(self, q_avail.max(1), opts.k)?;
        let mut best: Option<MidasFit> = None;
        let mut first_err = None;
        for q in 1..=q_max {
            let fit = self.check(q, opts).and_then(|()| self.fit_with(&conc, q, opts));
            match fit {
                Ok(fit) => {
                    if best.as_ref().map_or(true, |b| fit.aic() < b.aic()) {
                        best = Some(fit);
                    }
                }
                Err(e) => {
                    log::debug!("q = {q} fit failed: {e}");
                    first_err.get_or_insert(e);
                }
            }
        }
        best.ok_or_else(|| first_err.expect("q_max >= 1"))
    }
}

/// Cross products of the daily lag columns and the target after partialling
/// out `[1, y_lag]`, so the profiled SSR for any weights costs `O((q k)^2)`
/// instead of a regression over all observations.
pub(crate) struct Concentrated {
    q: usize,
    k: usize,
    /// Row-major `(q k) x (q k)` cross-product matrix.
    a: Vec<f64>,
    c: Vec<f64>,
    yy: f64,
}

impl Concentrated {
    fn new(data: &MidasData, q: usize, k: usize) -> Result<Self> {
        let n = data.len();
        let mean = |v: &[f64]| v.iter().sum::<f64>() / n as f64;
        let ml = mean(&data.y_lag);
        let mut e2: Vec<f64> = data.y_lag.iter().map(|v| v - ml).collect();
        let norm = e2.iter().map(|v| v * v).sum::<f64>().sqrt();
        let scale = data.y_lag.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(norm > 1e-10 * scale.max(f64::MIN_POSITIVE)) {
            return Err(Error::Singular("lagged target is constant".into()));
        }
        e2.iter_mut().for_each(|v| *v /= norm);
        let resid = |x: &mut Vec<f64>| {
            for _ in 0..2 {
                let m = mean(x);
                x.iter_mut().for_each(|v| *v -= m);
                let p = dot(&e2, x);
                x.iter_mut().zip(&e2).for_each(|(v, e)| *v -= p * e);
            }
        };
        let dim = q * k;
        let mut cols: Vec<Vec<f64>> = Vec::with_capacity(dim);
        for j in 0..q {
            for i in 0..k {
                let mut col: Vec<f64> = data.blocks.iter().map(|b| b[j][i]).collect();
                resid(&mut col);
                cols.push(col);
            }
        }
        let mut y = data.y.clone();
        resid(&mut y);
        let mut a = vec![0.0; dim * dim];
        for r in 0..dim {
            for s in r..dim {
                let v = dot(&cols[r], &cols[s]);
                a[r * dim + s] = v;
                a[s * dim + r] = v;
            }
        }
        let c = cols.iter().map(|col| dot(col, &y)).collect();
        Ok(Self { q, k, a, c, yy: dot(&y, &y) })
    }

    /// Profiled SSR for weights `w` using the first `q` blocks; infinite when
    /// the aggregated regressors are collinear.
    fn ssr(&self, w: &[f64], q: usize, scratch: &mut Vec<f64>) -> f64 {
        let (k, dim) = (self.k, self.q * self.k);
        debug_assert!(q <= self.q && w.len() == k);
        // g[j][l] = w' A_{jl} w, h[j] = w' c_j
        scratch.clear();
        scratch.resize(q * q + q, 0.0);
        let (g, h) = scratch.split_at_mut(q * q);
        for j in 0..q {
            for l in j..q {
                let mut acc = 0.0;
                for i in 0..k {
                    let row = &self.a[(j * k + i) * dim + l * k..(j * k + i) * dim + l * k + k];
                    acc += w[i] * dot(row, w);
                }
                g[j * q + l] = acc;
                g[l * q + j] = acc;
            }
            h[j] = dot(w, &self.c[j * k..j * k + k]);
        }
        // Cholesky solve of g b = h, accumulating h' g^{-1} h.
        let max_diag = (0..q).map(|j| g[j * q + j]).fold(0.0, f64::max);
        for j in 0..q {
            for l in 0..j {
                let s: f64 = (0..l).map(|m| g[j * q + m] * g[l * q + m]).sum();
                g[j * q + l] = (g[j * q + l] - s) / g[l * q + l];
            }
            let d = g[j * q + j] - (0..j).map(|m| g[j * q + m].powi(2)).sum::<f64>();
            if !(d > 1e-12 * max_diag) {
                return f64::INFINITY;
            }
            g[j * q + j] = d.sqrt();
        }
        let mut explained = 0.0;
        for j in 0..q {
            let s: f64 = (0..j).map(|m| g[j * q + m] * h[m]).sum();
            h[j] = (h[j] - s) / g[j * q + j];
            explained += h[j] * h[j];
        }
        (self.yy - explained).max(0.0)
    }
}

/// Profiled nonlinear least squares fit of the MIDAS-AR regression
/// `y_t = c + alpha*y_{t-1} + sum_j beta_j * sum_i w_i(gamma) x_{j,i} + e_t`,
/// with one shared exponential Almon weight function across the `q` blocks.
pub fn fit_midas(
    y: &MonthlySeries,
    daily: &DailySeries,
    q: usize,
    cutoff_days: u32,
    opts: &MidasOptions,
) -> Result<MidasFit> {
    MidasData::from_series(y, daily, q, cutoff_days, opts)?.fit(q, opts)
}

/// Number of blocks chosen by AIC among `1..=q_max`.
pub fn select_q(
    y: &MonthlySeries,
    daily: &DailySeries,
    q_max: usize,
    cutoff_days: u32,
    opts: &MidasOptions,
) -> Result<usize> {
    Ok(MidasData::from_series(y, daily, q_max, cutoff_days, opts)?
        .select(q_max, opts)?
        .q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from;
    use rand_distr::{Distribution, StandardNormal};

    fn ym(s: &str) -> YearMonth {
        s.parse().unwrap()
    }

    #[test]
    fn ar1_exact_recurrence() {
        let mut y = vec![3.0];
        for _ in 0..20 {
            y.push(0.5 * y.last().unwrap() + 1.0);
        }
        let f = fit_ar1(&y).unwrap();
        assert!((f.c - 1.0).abs() < 1e-9, "{f:?}");
        assert!((f.alpha - 0.5).abs() < 1e-9);
        assert!(f.sigma < 1e-9);
    }

    #[test]
    fn ar1_constant_is_singular() {
        assert!(matches!(fit_ar1(&[2.0; 10]), Err(Error::Singular(_))));
        assert!(fit_ar1(&[1.0, 2.0]).is_err());
    }

    #[test]
    fn alignment_blocks() {
        let start = NaiveDate::from_ymd_opt(2023, 1, 1).unwrap();
        let values: Vec<f64> = (0..365).map(f64::from).collect();
        let daily = DailySeries::new("x", start, values);
        let idx = |d: NaiveDate| (d - start).num_days() as f64;
        let june_end = NaiveDate::from_ymd_opt(2023, 6, 30).unwrap();
        let b = align_daily(&daily, ym("2023-06"), 0, 30, 1, 30).unwrap();
        let expect: Vec<f64> = (0..30).map(|i| idx(june_end) - i as f64).collect();
        assert_eq!(b[0], expect);
        assert_eq!(b[0][29], idx(NaiveDate::from_ymd_opt(2023, 6, 1).unwrap()));

        let b7 = align_daily(&daily, ym("2023-06"), 7, 30, 1, 30).unwrap();
        assert_eq!(b7[0][0], idx(NaiveDate::from_ymd_opt(2023, 6, 23).unwrap()));

        let b2 = align_daily(&daily, ym("2023-06"), 0, 30, 2, 30).unwrap();
        assert_eq!(b2[1][0], b2[0][0] - 30.0);

        let err = align_daily(&daily, ym("2023-01"), 0, 60, 1, 30).unwrap_err();
        assert!(matches!(err, Error::Coverage(_)), "{err}");
    }

    fn simulated(n_months: usize, beta: &[f64], gamma: [f64; 2], noise: f64, seed: u64) -> (MonthlySeries, DailySeries) {
        let mut rng = rng_from(seed);
        let first = ym("2000-01");
        let start = first.first_day() - Duration::days(200);
        let end = first.add(n_months as i32).last_day();
        let n_days = (end - start).num_days() as usize + 1;
        let xs: Vec<f64> = (0..n_days).map(|_| StandardNormal.sample(&mut rng)).collect();
        let daily = DailySeries::new("x", start, xs);
        let w = super::super::almon_weights(gamma[0], gamma[1], 29).unwrap();
        let mut y = vec![1.0];
        for i in 1..n_months {
            let m = first.add(i as i32);
            let blocks = align_daily(&daily, m, 0, 30, beta.len(), 30).unwrap();
            let mut v = 0.3 + 0.6 * y[i - 1];
            for (b, blk) in beta.iter().zip(&blocks) {
                v += b * dot(&w, blk);
            }
            let e: f64 = StandardNormal.sample(&mut rng);
            y.push(v + noise * e);
        }
        (MonthlySeries::new(first, y), daily)
    }

    #[test]
    fn constant_daily_is_singular() {
        let (y, daily) = simulated(60, &[1.0], [0.0, 0.0], 0.1, 1);
        let flat = daily.map(|_| 2.0);
        let err = fit_midas(&y, &flat, 1, 0, &MidasOptions::default()).unwrap_err();
        assert!(matches!(err, Error::Singular(_)), "{err}");
    }

    #[test]
    fn objective_trace_is_monotone() {
        let (y, daily) = simulated(120, &[1.5], [-0.2, 0.0], 0.5, 3);
        let fit = fit_midas(&y, &daily, 1, 0, &MidasOptions::default()).unwrap();
        assert!(fit.trace.windows(2).all(|w| w[1] <= w[0]));
        assert!(fit.sigma > 0.0);
    }

    #[test]
    fn nested_ar_ssr() {
        let (y, daily) = simulated(100, &[0.0], [0.0, 0.0], 1.0, 5);
        let data = MidasData::from_series(&y, &daily, 1, 0, &MidasOptions::default()).unwrap();
        let ar = fit_ar1(&y.values).unwrap();
        assert!((data.ar_only_ssr().unwrap() - ar.ssr).abs() < 1e-9 * ar.ssr);
        let fit = data.fit(1, &MidasOptions::default()).unwrap();
        assert!(fit.ssr <= ar.ssr + 1e-9);
    }

    #[test]
    fn scale_equivariance() {
        let (y, daily) = simulated(120, &[1.0], [-0.1, 0.0], 0.5, 9);
        let opts = MidasOptions::default();
        let a = fit_midas(&y, &daily, 1, 0, &opts).unwrap();
        let b = fit_midas(&y, &daily.map(|v| 25.0 * v), 1, 0, &opts).unwrap();
        assert!((a.ssr - b.ssr).abs() < 1e-8 * a.ssr.max(1.0));
        assert!((a.beta[0] - 25.0 * b.beta[0]).abs() < 1e-5 * a.beta[0].abs().max(1.0));
        assert!((a.c - b.c).abs() < 1e-6);
    }

    #[test]
    fn concentrated_matches_regression() {
        let (y, daily) = simulated(150, &[1.0, 0.5, -0.3], [-0.05, 0.001], 0.7, 13);
        let data = MidasData::from_series(&y, &daily, 3, 0, &MidasOptions::default()).unwrap();
        let conc = Concentrated::new(&data, 3, 30).unwrap();
        let mut w = Vec::new();
        let mut scratch = Vec::new();
        for (g, q) in [([0.0, 0.0], 1), ([-0.2, 0.003], 2), ([0.1, -0.01], 3)] {
            let exact = data.profile(g, q, 30, &mut w).unwrap().1;
            almon_weights_into(g[0], g[1], 29, &mut w).unwrap();
            let fast = conc.ssr(&w, q, &mut scratch);
            assert!((exact - fast).abs() < 1e-9 * exact, "{exact} {fast}");
        }
    }

    #[test]
    fn singleton_q() {
        let (y, daily) = simulated(80, &[1.0], [0.0, 0.0], 0.5, 11);
        assert_eq!(select_q(&y, &daily, 1, 0, &MidasOptions::default()).unwrap(), 1);
    }

    #[test]
    fn gamma_stays_in_bounds() {
        let (y, daily) = simulated(150, &[1.0], [0.0, 0.0], 1.0, 9);
        let opts = MidasOptions { gamma_bounds: [0.05, 0.001], ..MidasOptions::default() };
        let bad = MidasOptions { starts: vec![[0.0, 0.0], [-0.1, 0.0]], ..opts.clone() };
        assert!(bad.validate().is_err());
        let opts = MidasOptions { starts: vec![[0.0, 0.0], [0.04, 0.0]], ..opts };
        let fit = fit_midas(&y, &daily, 2, 0, &opts).unwrap();
        assert!(opts.admissible(fit.gamma), "{:?}", fit.gamma);
    }

    #[test]
    fn noiseless_recovery() {
        let (y, daily) = simulated(300, &[1.2, -0.7], [-0.15, 0.002], 0.0, 21);
        let fit = fit_midas(&y, &daily, 2, 0, &MidasOptions::default()).unwrap();
        assert!(fit.ssr < 1e-8, "{fit:?}");
        assert!((fit.c - 0.3).abs() < 1e-4);
        assert!((fit.alpha - 0.6).abs() < 1e-4);
        assert!((fit.beta[0] - 1.2).abs() < 1e-4);
        assert!((fit.beta[1] + 0.7).abs() < 1e-4);
        assert!((fit.gamma[0] + 0.15).abs() < 1e-4, "{:?}", fit.gamma);
        assert!((fit.gamma[1] - 0.002).abs() < 1e-4);
    }
}
