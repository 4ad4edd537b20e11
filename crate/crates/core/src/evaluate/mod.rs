//! Forecast evaluation against the AR(1) benchmark: point errors, CRPS,
//! Diebold-Mariano, the fluctuation test and cumulative loss paths, plus
//! first-principal-component and correlation utilities for competitor series.

mod crps;
mod dm;
mod fluctuation;
mod metrics;
mod pca;
mod report;

pub use crps::{crps_closed, crps_from_samples, crps_normal, crps_simulated, CrpsMode, DEFAULT_DRAWS};
pub use dm::{dm_test, dm_test_losses, harvey_factor, Loss, Sided, TestResult};
pub use fluctuation::{
    bartlett_lags, gr_critical_value, gr_fluctuation, hac_sd, FluctuationPath, WindowClass, GR_CRIT_05,
    GR_CRIT_10, GR_MU,
};
pub use metrics::{cum_loss_diff, point_metrics, ratio, stars, PointMetrics};
pub use pca::{first_pc, pearson_corr, PrincipalComponent};
pub use report::{
    best_by_target, rank_specs, read_evaluations, table_rows, write_correlations, write_cum_loss,
    write_evaluations, write_fluctuation, write_table, Correlation, TableRow,
};

use serde::{Deserialize, Serialize};

use crate::calendar::YearMonth;
use crate::error::{Error, Result};
use crate::midas::NowcastRecord;
use crate::rng::rng_for;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EvalOptions {
    pub crps_mode: CrpsMode,
    pub draws: usize,
    pub seed: u64,
    /// Fluctuation-test window share.
    pub mu: f64,
    /// Fluctuation-test level.
    pub alpha: f64,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            crps_mode: CrpsMode::Simulate,
            draws: DEFAULT_DRAWS,
            seed: 0,
            mu: 0.1,
            alpha: 0.05,
        }
    }
}

/// Scores of one (target, spec) nowcast path against the benchmark.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub target: String,
    pub spec: String,
    pub cutoff: u32,
    pub n: usize,
    pub fallbacks: usize,
    pub rmsfe: f64,
    pub mafe: f64,
    pub crps: f64,
    pub bench_rmsfe: f64,
    pub bench_mafe: f64,
    pub bench_crps: f64,
    pub ratio_rmsfe: f64,
    pub ratio_mafe: f64,
    pub ratio_crps: f64,
    /// One-sided Diebold-Mariano p-values, NaN below 10 periods.
    pub p_rmsfe: f64,
    pub p_mafe: f64,
    pub p_crps: f64,
}

/// Month-aligned errors and CRPS values behind an [`Evaluation`].
#[derive(Debug, Clone, PartialEq)]
pub struct EvalDetail {
    pub evaluation: Evaluation,
    pub months: Vec<YearMonth>,
    pub e_model: Vec<f64>,
    pub e_bench: Vec<f64>,
    pub crps_model: Vec<f64>,
    pub crps_bench: Vec<f64>,
}

impl EvalDetail {
    /// Squared-error loss differential, model minus benchmark.
    pub fn squared_differential(&self) -> Vec<f64> {
        self.e_model.iter().zip(&self.e_bench).map(|(m, b)| m * m - b * b).collect()
    }
}

fn crps_of(r: &NowcastRecord, opts: &EvalOptions) -> Result<f64> {
    let label = format!("crps/{}/{}/{}/{}", r.target, r.spec, r.cutoff, r.month);
    let mut rng = rng_for(opts.seed, &label);
    match opts.crps_mode {
        CrpsMode::Closed => crps_closed(r.point, r.sigma, r.realized),
        CrpsMode::Simulate => crps_simulated(r.point, r.sigma, r.realized, opts.draws, &mut rng),
    }
}

fn dm_p(model: &[f64], bench: &[f64]) -> Result<f64> {
    if model.len() < 10 {
        return Ok(f64::NAN);
    }
    Ok(dm_test_losses(model, bench, 1, Sided::One)?.p_value)
}

/// Scores `model` against `bench` over the months both cover with a
/// realized value.
pub fn evaluate_pair(model: &[NowcastRecord], bench: &[NowcastRecord], opts: &EvalOptions) -> Result<EvalDetail> {
    let first = model.first().ok_or_else(|| Error::invalid("no model nowcasts"))?;
    let bench_by_month: std::collections::HashMap<YearMonth, &NowcastRecord> =
        bench.iter().map(|r| (r.month, r)).collect();
    let mut detail = EvalDetail {
        evaluation: Evaluation {
            target: first.target.clone(),
            spec: first.spec.clone(),
            cutoff: first.cutoff,
            n: 0,
            fallbacks: 0,
            rmsfe: f64::NAN,
            mafe: f64::NAN,
            crps: f64::NAN,
            bench_rmsfe: f64::NAN,
            bench_mafe: f64::NAN,
            bench_crps: f64::NAN,
            ratio_rmsfe: f64::NAN,
            ratio_mafe: f64::NAN,
            ratio_crps: f64::NAN,
            p_rmsfe: f64::NAN,
            p_mafe: f64::NAN,
            p_crps: f64::NAN,
        },
        months: Vec::new(),
        e_model: Vec::new(),
        e_bench: Vec::new(),
        crps_model: Vec::new(),
        crps_bench: Vec::new(),
    };
    let mut sorted: Vec<&NowcastRecord> = model.iter().collect();
    sorted.sort_by_key(|r| r.month);
    for r in sorted {
        let Some(b) = bench_by_month.get(&r.month) else { continue };
        if !r.realized.is_finite() {
            continue;
        }
        detail.months.push(r.month);
        detail.e_model.push(r.error());
        detail.e_bench.push(b.error());
        detail.crps_model.push(crps_of(r, opts)?);
        detail.crps_bench.push(crps_of(b, opts)?);
        detail.evaluation.fallbacks += usize::from(r.fallback);
    }
    let n = detail.months.len();
    if n == 0 {
        return Err(Error::invalid(format!(
            "{}/{}: no months with both nowcasts and a realized value",
            first.target, first.spec
        )));
    }
    let pm = point_metrics(&detail.e_model)?;
    let pb = point_metrics(&detail.e_bench)?;
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let loss = |e: &[f64], l: Loss| e.iter().map(|&x| l.apply(x)).collect::<Vec<_>>();
    let ev = &mut detail.evaluation;
    ev.n = n;
    ev.rmsfe = pm.rmsfe;
    ev.mafe = pm.mafe;
    ev.crps = mean(&detail.crps_model);
    ev.bench_rmsfe = pb.rmsfe;
    ev.bench_mafe = pb.mafe;
    ev.bench_crps = mean(&detail.crps_bench);
    ev.ratio_rmsfe = ratio(ev.rmsfe, ev.bench_rmsfe);
    ev.ratio_mafe = ratio(ev.mafe, ev.bench_mafe);
    ev.ratio_crps = ratio(ev.crps, ev.bench_crps);
    ev.p_rmsfe = dm_p(&loss(&detail.e_model, Loss::Squared), &loss(&detail.e_bench, Loss::Squared))?;
    ev.p_mafe = dm_p(&loss(&detail.e_model, Loss::Absolute), &loss(&detail.e_bench, Loss::Absolute))?;
    ev.p_crps = dm_p(&detail.crps_model, &detail.crps_bench)?;
    Ok(detail)
}
