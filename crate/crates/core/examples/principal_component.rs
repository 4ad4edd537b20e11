//! First principal component of a panel of monthly indicators and its
//! correlation with each member.

use rand::Rng;
use rand_distr::StandardNormal;
use sentiment_nowcast::evaluate::{first_pc, pearson_corr};
use sentiment_nowcast::rng::rng_for;

fn main() -> sentiment_nowcast::error::Result<()> {
    let mut rng = rng_for(3, "example/pca");
    let months = 120;
    let factor: Vec<f64> = (0..months).map(|_| rng.sample(StandardNormal)).collect();
    let names = ["survey", "news", "markets", "reddit"];
    let panel: Vec<Vec<f64>> = [0.9, 0.7, 0.5, 0.3]
        .iter()
        .enumerate()
        .map(|(i, load)| {
            factor
                .iter()
                .map(|f| 10.0 * i as f64 + load * f + (1.0 - load * load).sqrt() * rng.sample::<f64, _>(StandardNormal))
                .collect()
        })
        .collect();
    let pc = first_pc(&panel)?;
    println!("eigenvalue {:.3} after {} iterations", pc.eigenvalue, pc.iterations);
    for (name, (series, load)) in names.iter().zip(panel.iter().zip(&pc.loadings)) {
        println!("{name:<8} loading {load:+.3} corr with PC {:+.3}", pearson_corr(series, &pc.scores)?);
    }
    println!("PC vs latent factor: {:+.3}", pearson_corr(&pc.scores, &factor)?);
    Ok(())
}
