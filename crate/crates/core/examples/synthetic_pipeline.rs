//! End to end on synthetic data: generate a corpus with a planted signal,
//! then ingest, classify, build signals, nowcast, evaluate and report.
//! Pass an output directory as the first argument to keep the artifacts.

use sentiment_nowcast::cli::config::{RunConfig, TargetConfig};
use sentiment_nowcast::cli::stages::{
    cmd_classify, cmd_evaluate, cmd_ingest, cmd_nowcast, cmd_report, cmd_signals, cmd_synth,
};
use sentiment_nowcast::corpus::ConceptName;
use sentiment_nowcast::evaluate::best_by_target;
use sentiment_nowcast::signals::GridConfig;

fn main() -> sentiment_nowcast::error::Result<()> {
    let tmp = tempfile::tempdir().map_err(|e| sentiment_nowcast::error::Error::io("tempdir", e))?;
    let out = std::env::args().nth(1).map(Into::into).unwrap_or_else(|| tmp.path().to_path_buf());
    let mut cfg = RunConfig { out: out.clone(), ..RunConfig::default() };
    cfg.synth.corpus.start = "2016-01-01".parse().expect("valid date");
    cfg.synth.corpus.n_days = 2922;
    cfg.corpus.concepts = vec![ConceptName::Inflation];
    cfg.corpus.submissions = vec![out.join("synth/submissions.ndjson")];
    cfg.corpus.comments = vec![out.join("synth/comments.ndjson")];
    cfg.targets = vec![TargetConfig {
        name: "synthetic".into(),
        path: out.join("synth/target.csv"),
        concept: ConceptName::Inflation,
    }];
    cfg.grid = GridConfig { thresholds: vec![0.3, 0.7], windows: vec![30, 90], ..GridConfig::default() };
    cfg.sample.estimation_start = "2016-07".parse()?;
    cfg.sample.eval_start = "2019-01".parse()?;
    cfg.validate()?;

    cmd_synth(&cfg)?;
    for c in cmd_ingest(&cfg)?.0 {
        println!("ingested {} submissions and {} comments about {}", c.submissions, c.comments, c.concept);
    }
    cmd_classify(&cfg)?;
    cmd_signals(&cfg)?;
    cmd_nowcast(&cfg)?;
    let (evals, _) = cmd_evaluate(&cfg)?;
    cmd_report(&cfg)?;
    for e in best_by_target(&evals) {
        println!(
            "best spec {}: RMSFE ratio {:.3} (p {:.4}), CRPS ratio {:.3} over {} months",
            e.spec, e.ratio_rmsfe, e.p_rmsfe, e.ratio_crps, e.n
        );
    }
    println!("artifacts in {}", out.display());
    Ok(())
}
