//! Recursive out-of-sample nowcasts against the AR(1) benchmark at several
//! information cutoffs, with every data access logged and checked.

use chrono::Duration;
use rand_distr::{Distribution, StandardNormal};
use sentiment_nowcast::calendar::YearMonth;
use sentiment_nowcast::midas::{
    align_daily, nowcast_recursive, LoggedStore, MidasOptions, MonthlySeries, NowcastConfig, NowcastRecord,
    SeriesStore,
};
use sentiment_nowcast::rng::rng_from;
use sentiment_nowcast::signals::DailySeries;

fn rmse(r: &[NowcastRecord]) -> f64 {
    (r.iter().map(|x| x.error().powi(2)).sum::<f64>() / r.len() as f64).sqrt()
}

fn main() -> sentiment_nowcast::error::Result<()> {
    let mut rng = rng_from(7);
    let first = YearMonth::new(2012, 1)?;
    let last = YearMonth::new(2023, 12)?;
    let start = first.first_day() - Duration::days(120);
    let xs = (0..=(last.last_day() - start).num_days()).map(|_| StandardNormal.sample(&mut rng)).collect();
    let daily = DailySeries::new("sentiment", start, xs);
    let mut y = vec![0.0];
    for i in 1..=last.diff(first) as usize {
        let block = &align_daily(&daily, first.add(i as i32), 0, 30, 1, 30)?[0];
        // Only the last three weeks of each month carry signal.
        let late: f64 = block[..21].iter().sum::<f64>() / 21.0;
        let e: f64 = StandardNormal.sample(&mut rng);
        y.push(0.5 * y[i - 1] + 2.0 * late + 0.3 * e);
    }
    let target = MonthlySeries::new(first, y);

    for cutoff in [0, 7, 14, 21, 28] {
        let store = LoggedStore::new(SeriesStore { target: &target, daily: &daily });
        let config = NowcastConfig {
            target: "y".into(),
            spec: "sentiment".into(),
            estimation_start: first,
            eval_start: YearMonth::new(2018, 1)?,
            eval_end: last,
            cutoff_days: cutoff,
            options: MidasOptions::default(),
        };
        let run = nowcast_recursive(&store, &config)?;
        println!(
            "cutoff {cutoff:>2}: {} nowcasts, RMSFE ratio {:.3}, {} fallbacks, {} reads, {} beyond cutoff",
            run.midas.len(),
            rmse(&run.midas) / rmse(&run.benchmark),
            run.fallbacks(),
            store.accesses().len(),
            store.violations().len()
        );
    }
    Ok(())
}
