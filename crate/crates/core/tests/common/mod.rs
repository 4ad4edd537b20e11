//! Fixtures shared by the integration tests.
#![allow(dead_code)]

use std::path::Path;

use chrono::{Duration, NaiveDate};
use rand_distr::{Distribution, StandardNormal};
use sentiment_nowcast::calendar::YearMonth;
use sentiment_nowcast::cli::config::{RunConfig, TargetConfig};
use sentiment_nowcast::corpus::ConceptName;
use sentiment_nowcast::midas::{align_daily, almon_weights, MonthlySeries};
use sentiment_nowcast::rng::rng_from;
use sentiment_nowcast::signals::DailySeries;

pub fn ym(s: &str) -> YearMonth {
    s.parse().unwrap()
}

pub fn date(s: &str) -> NaiveDate {
    s.parse().unwrap()
}

/// Monthly target from the MIDAS-AR data-generating process
/// `y_t = 0.3 + 0.6 y_{t-1} + sum_j beta_j B_j(gamma) x + noise e_t`
/// with i.i.d. normal daily regressors.
pub fn midas_dgp(n_months: usize, beta: &[f64], gamma: [f64; 2], noise: f64, seed: u64) -> (MonthlySeries, DailySeries) {
    let mut rng = rng_from(seed);
    let first = ym("2000-01");
    let start = first.first_day() - Duration::days(200);
    let end = first.add(n_months as i32).last_day();
    let n_days = (end - start).num_days() as usize + 1;
    let xs: Vec<f64> = (0..n_days).map(|_| StandardNormal.sample(&mut rng)).collect();
    let daily = DailySeries::new("x", start, xs);
    let w = almon_weights(gamma[0], gamma[1], 29).unwrap();
    let mut y = vec![1.0];
    for i in 1..n_months {
        let m = first.add(i as i32);
        let blocks = align_daily(&daily, m, 0, 30, beta.len().max(1), 30).unwrap();
        let mut v = 0.3 + 0.6 * y[i - 1];
        for (b, blk) in beta.iter().zip(&blocks) {
            v += b * w.iter().zip(blk).map(|(a, x)| a * x).sum::<f64>();
        }
        let e: f64 = StandardNormal.sample(&mut rng);
        y.push(v + noise * e);
    }
    (MonthlySeries::new(first, y), daily)
}

/// Eight years of synthetic inflation chatter written to `<out>/synth`, with
/// the pipeline pointed at it.
pub fn synthetic_config(out: &Path, seed: u64, loading: Option<f64>) -> RunConfig {
    let mut cfg = RunConfig {
        seed,
        out: out.to_path_buf(),
        ..RunConfig::default()
    };
    cfg.synth.corpus.start = date("2016-01-01");
    cfg.synth.corpus.n_days = 2922;
    cfg.synth.loading = loading;
    cfg.synth.variance_share = 0.5;
    cfg.corpus.concepts = vec![ConceptName::Inflation];
    cfg.corpus.submissions = vec![out.join("synth/submissions.ndjson")];
    cfg.corpus.comments = vec![out.join("synth/comments.ndjson")];
    cfg.targets = vec![TargetConfig {
        name: "synthetic".into(),
        path: out.join("synth/target.csv"),
        concept: ConceptName::Inflation,
    }];
    cfg.sample.estimation_start = ym("2016-07");
    cfg.sample.eval_start = ym("2019-01");
    cfg.sample.eval_end = ym("2023-12");
    cfg
}
