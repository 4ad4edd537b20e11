//! Turns labeled submissions and their comment votes into smoothed daily
//! indicators for a small spec grid, then audits the comment re-labeling.

use chrono::{Duration, NaiveDate};
use rand::Rng;
use sentiment_nowcast::calendar::YearMonth;
use sentiment_nowcast::classifier::SignalLabel;
use sentiment_nowcast::rng::rng_for;
use sentiment_nowcast::signals::{
    build_signals, reclassification_audit, relabel_all, spec_grid, CommentSet, GridConfig, SignalSpec,
    SubmissionVotes, Vote,
};

fn label(x: u32) -> SignalLabel {
    [SignalLabel::Down, SignalLabel::Neutral, SignalLabel::Up][x as usize]
}

fn main() -> sentiment_nowcast::error::Result<()> {
    let mut rng = rng_for(42, "example/signals");
    let start = NaiveDate::from_ymd_opt(2023, 1, 1).expect("valid date");
    let end = NaiveDate::from_ymd_opt(2023, 6, 30).expect("valid date");
    let mut votes = Vec::new();
    for day in 0..=(end - start).num_days() {
        for i in 0..3 {
            let comments: Vec<Vote> = (0..rng.gen_range(0..5))
                .map(|_| Vote { label: label(rng.gen_range(0..3)), net_score: rng.gen_range(-2..20) })
                .collect();
            votes.push(SubmissionVotes {
                id: format!("s{day}x{i}"),
                date: start + Duration::days(day),
                label: label(rng.gen_range(0..3)),
                first_level: comments.clone(),
                keyword_all: comments.into_iter().take(2).collect(),
            });
        }
    }

    let grid = GridConfig {
        thresholds: vec![0.3, 0.7],
        windows: vec![30, 60],
        ..GridConfig::default()
    };
    let specs = spec_grid(&grid)?;
    let series = build_signals(&votes, &specs, start, end)?;
    for s in &series {
        println!("{:<18} last value {:+.3}", s.name, s.values.last().copied().unwrap_or(f64::NAN));
    }

    let spec = SignalSpec::comments(CommentSet::FirstLevel, false, 0.3, 60)?;
    let original: Vec<_> = votes.iter().map(|v| v.label).collect();
    let months: Vec<_> = votes.iter().map(|v| YearMonth::of(v.date)).collect();
    let audit = reclassification_audit(&original, &relabel_all(&votes, &spec), Some(&months))?;
    println!(
        "\n{spec}: {} of {} labels changed ({:.1}%), {} upgrades vs {} downgrades",
        audit.changed,
        audit.total_items,
        100.0 * audit.share,
        audit.upgrades,
        audit.downgrades
    );
    audit.write_transitions_csv(std::io::stdout())?;
    Ok(())
}
