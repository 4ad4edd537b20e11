//! Forecast comparison: CRPS of normal predictive densities, the
//! Diebold-Mariano test with the small-sample correction and the rolling
//! fluctuation test.

use rand::Rng;
use rand_distr::StandardNormal;
use sentiment_nowcast::evaluate::{
    crps_closed, crps_simulated, dm_test, gr_fluctuation, point_metrics, Loss, Sided, WindowClass,
};
use sentiment_nowcast::rng::rng_for;

fn main() -> sentiment_nowcast::error::Result<()> {
    let mut rng = rng_for(1, "example/tests");
    for (mu, sigma, y) in [(0.0, 1.0, 0.0), (0.5, 0.8, 1.7), (-1.0, 2.0, 0.3)] {
        let closed = crps_closed(mu, sigma, y)?;
        let sim = crps_simulated(mu, sigma, y, 1000, &mut rng)?;
        println!("CRPS N({mu}, {sigma}^2) at {y}: closed {closed:.4}, 1000 draws {sim:.4}");
    }

    let n = 72;
    let bench: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
    // The model is better only in the middle third of the sample.
    let model: Vec<f64> = bench
        .iter()
        .enumerate()
        .map(|(t, e)| if (24..48).contains(&t) { 0.3 * e } else { e + 0.1 * rng.sample::<f64, _>(StandardNormal) })
        .collect();
    let (m, b) = (point_metrics(&model)?, point_metrics(&bench)?);
    println!("\nRMSFE {:.3} vs {:.3}, MAFE {:.3} vs {:.3}", m.rmsfe, b.rmsfe, m.mafe, b.mafe);
    for loss in [Loss::Squared, Loss::Absolute] {
        let t = dm_test(&model, &bench, loss, 1, Sided::One)?;
        println!("DM {loss:?}: statistic {:.3}, one-sided p {:.4}", t.statistic, t.p_value);
    }

    let d: Vec<f64> = model.iter().zip(&bench).map(|(m, b)| m * m - b * b).collect();
    let path = gr_fluctuation(&d, 0.1, 0.05)?;
    println!("\nfluctuation test, window {} months, bands ±{:.3}", path.m, path.upper);
    for (i, (s, c)) in path.statistics.iter().zip(&path.classes).enumerate() {
        if *c != WindowClass::Inconclusive {
            println!("window ending t={:>2}: {s:+.3} {}", path.window_end(i), c.as_str());
        }
    }
    Ok(())
}
