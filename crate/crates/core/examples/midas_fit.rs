//! Simulates a MIDAS-AR process with two informative monthly blocks of daily
//! data, then fits it for q = 1..3 and selects q by AIC.

use chrono::Duration;
use rand_distr::{Distribution, StandardNormal};
use sentiment_nowcast::calendar::YearMonth;
use sentiment_nowcast::midas::{align_daily, almon_weights, fit_ar1, fit_midas, select_q, MidasOptions, MonthlySeries};
use sentiment_nowcast::rng::rng_from;
use sentiment_nowcast::signals::DailySeries;

fn main() -> sentiment_nowcast::error::Result<()> {
    let mut rng = rng_from(2024);
    let first = YearMonth::new(2000, 1)?;
    let months = 240;
    let start = first.first_day() - Duration::days(120);
    let end = first.add(months).last_day();
    let xs = (0..=(end - start).num_days()).map(|_| StandardNormal.sample(&mut rng)).collect();
    let daily = DailySeries::new("x", start, xs);

    let w = almon_weights(-0.08, 0.0, 29)?;
    let mut y = vec![0.0];
    for i in 1..months as usize {
        let blocks = align_daily(&daily, first.add(i as i32), 0, 30, 2, 30)?;
        let signal: f64 = [1.5, -0.8]
            .iter()
            .zip(&blocks)
            .map(|(b, blk)| b * w.iter().zip(blk).map(|(a, x)| a * x).sum::<f64>())
            .sum();
        let e: f64 = StandardNormal.sample(&mut rng);
        y.push(0.2 + 0.5 * y[i - 1] + signal + 0.3 * e);
    }
    let y = MonthlySeries::new(first, y);

    let opts = MidasOptions::default();
    let ar = fit_ar1(&y.values)?;
    println!("AR(1): c {:.3} alpha {:.3} sigma {:.3}", ar.c, ar.alpha, ar.sigma);
    for q in 1..=3 {
        let fit = fit_midas(&y, &daily, q, 0, &opts)?;
        println!(
            "q = {q}: alpha {:.3} beta {:?} gamma ({:.3}, {:.4}) sigma {:.3} AIC {:.2}",
            fit.alpha,
            fit.beta.iter().map(|b| (b * 1000.0).round() / 1000.0).collect::<Vec<_>>(),
            fit.gamma[0],
            fit.gamma[1],
            fit.sigma,
            fit.aic()
        );
    }
    println!("AIC selects q = {}", select_q(&y, &daily, 3, 0, &opts)?);
    Ok(())
}
