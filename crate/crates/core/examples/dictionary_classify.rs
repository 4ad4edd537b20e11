//! Labels short texts with the bundled economic-direction dictionary and
//! scores them against hand labels with macro-F1.

use sentiment_nowcast::classifier::{dict_classify, f1_macro, Dictionary, SignalLabel};

fn main() -> sentiment_nowcast::error::Result<()> {
    let dictionary = Dictionary::bundled();
    let (pos, neg) = dictionary.len();
    println!("dictionary: {pos} positive, {neg} negative terms");

    let labeled = [
        ("Inflation is expected to rise sharply", SignalLabel::Up),
        ("Energy prices look set to decline", SignalLabel::Down),
        ("The central bank meets on Thursday", SignalLabel::Neutral),
        ("Unemployment could surge after the layoffs", SignalLabel::Up),
        ("Price growth will fall and stay weak", SignalLabel::Down),
        ("What do you think about rents?", SignalLabel::Neutral),
    ];
    let mut predicted = Vec::new();
    for (text, truth) in &labeled {
        let label = dict_classify(text, &dictionary);
        println!("{:>8} (truth {:>7})  net {:+}  {text}", label.as_str(), truth.as_str(), dictionary.net_count(text));
        predicted.push(label);
    }
    let truth: Vec<_> = labeled.iter().map(|l| l.1).collect();
    let report = f1_macro(&predicted, &truth)?;
    for c in &report.per_class {
        println!("{:>7}: precision {:.2} recall {:.2} f1 {:.2}", c.label.as_str(), c.precision, c.recall, c.f1);
    }
    println!("macro-F1 {:.3}", report.macro_f1);
    Ok(())
}
