use crate::classifier::SignalLabel;

/// Combined score of a submission and the votes cast by its comments.
///
/// Unweighted: `L = (S + sum C_j) / (J + 1)`. Weighted: each comment votes
/// with weight `max(1, net_score)`, the submission with weight 1. With no
/// comments `L = S`. Always in `[-1, 1]`.
pub fn vote_score(submission: SignalLabel, comments: &[(SignalLabel, i64)], use_weights: bool) -> f64 {
    let mut num = i64::from(submission.value());
    let mut den = 1i64;
    for &(label, net) in comments {
        let w = if use_weights { net.max(1) } else { 1 };
        num += w * i64::from(label.value());
        den += w;
    }
    num as f64 / den as f64
}

/// UP above `tau`, DOWN below `-tau`, NEUTRAL on `[-tau, tau]`.
pub fn threshold_relabel(score: f64, tau: f64) -> SignalLabel {
    if score > tau {
        SignalLabel::Up
    } else if score < -tau {
        SignalLabel::Down
    } else {
        SignalLabel::Neutral
    }
}
