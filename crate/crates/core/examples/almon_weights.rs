//! Exponential Almon lag weights for a few exponent pairs.

use sentiment_nowcast::midas::almon_weights;

fn main() -> sentiment_nowcast::error::Result<()> {
    let k = 29;
    for (g1, g2) in [(0.0, 0.0), (-0.1, 0.0), (0.1, -0.005), (-0.3, 0.005)] {
        let w = almon_weights(g1, g2, k)?;
        let peak = (0..w.len()).fold(0, |best, i| if w[i] > w[best] { i } else { best });
        let head: Vec<String> = w.iter().take(6).map(|x| format!("{x:.4}")).collect();
        println!(
            "gamma = ({g1:+.3}, {g2:+.4}): peak at lag {peak:>2}, sum {:.12}, first lags [{}]",
            w.iter().sum::<f64>(),
            head.join(", ")
        );
    }
    Ok(())
}
