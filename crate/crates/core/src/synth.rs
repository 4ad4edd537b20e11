//! Seeded synthetic corpora and targets with a planted latent signal.
//!
//! A daily latent AR(1) `z_t` drives submission labels: the true label is the
//! tercile bucket of `z_t` under its stationary distribution, kept with
//! probability `rho` and otherwise replaced by one of the two other labels at
//! random. Comments repeat their submission's label with probability
//! `1 - delta` and oppose it otherwise. Post text is a template carrying the
//! label through dictionary terms plus a concept keyword. Every day draws
//! from its own stream `rng_for(seed, "synth/day/<index>")`, so generation is
//! parallel and reproducible.

use std::io::Write;
use std::path::Path;

use chrono::{Duration, NaiveDate};
use rand::seq::SliceRandom;
use rand::Rng as _;
use rand_distr::{Distribution, Geometric, Poisson, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::calendar::{day_start, YearMonth};
use crate::classifier::SignalLabel;
use crate::corpus::{write_dump_record, Concept, ConceptName, Post, PostKind};
use crate::error::{Error, Result};
use crate::midas::MonthlySeries;
use crate::rng::{rng_for, Rng};
use crate::signals::DailySeries;

const DAY: i64 = 86_400;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthConfig {
    pub seed: u64,
    pub start: NaiveDate,
    pub n_days: usize,
    pub concept: ConceptName,
    /// Poisson mean of on-topic submissions per day.
    pub submissions_per_day: f64,
    /// Poisson mean of comments per submission.
    pub comments_per_submission: f64,
    /// Poisson mean of off-topic submissions per day (removed by the keyword filter).
    pub off_topic_per_day: f64,
    /// Latent AR(1) coefficient.
    pub phi: f64,
    /// Latent innovation standard deviation.
    pub sigma_latent: f64,
    /// Probability a submission label matches the latent bucket.
    pub rho: f64,
    /// Probability a comment opposes its submission.
    pub delta: f64,
    /// Probability a comment replies to an earlier comment instead of the submission.
    pub reply_share: f64,
    /// Probability a comment mentions a concept keyword.
    pub keyword_share: f64,
    /// Success probability of the geometric net-score draw (score = draw - 1).
    pub score_p: f64,
    /// Largest comment delay after its submission, in days.
    pub comment_lag_days: u32,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            start: NaiveDate::from_ymd_opt(2016, 1, 1).expect("valid date"),
            n_days: 365,
            concept: ConceptName::Inflation,
            submissions_per_day: 4.0,
            comments_per_submission: 3.0,
            off_topic_per_day: 1.0,
            phi: 0.98,
            sigma_latent: 0.2,
            rho: 0.9,
            delta: 0.2,
            reply_share: 0.3,
            keyword_share: 0.5,
            score_p: 0.3,
            comment_lag_days: 2,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        let unit = |v: f64| (0.0..=1.0).contains(&v);
        if !(unit(self.rho) && unit(self.delta) && unit(self.reply_share) && unit(self.keyword_share)) {
            return Err(Error::invalid("rho, delta, reply_share and keyword_share must lie in [0, 1]"));
        }
        if !(self.phi > -1.0 && self.phi < 1.0) {
            return Err(Error::invalid(format!("phi must lie in (-1, 1), got {}", self.phi)));
        }
        if !(self.sigma_latent > 0.0) || !(self.score_p > 0.0 && self.score_p <= 1.0) {
            return Err(Error::invalid("sigma_latent must be positive and score_p in (0, 1]"));
        }
        if self.n_days == 0 {
            return Err(Error::invalid("n_days must be positive"));
        }
        for (name, v) in [
            ("submissions_per_day", self.submissions_per_day),
            ("comments_per_submission", self.comments_per_submission),
            ("off_topic_per_day", self.off_topic_per_day),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::invalid(format!("{name} must be finite and non-negative")));
            }
        }
        Ok(())
    }

    pub fn end(&self) -> NaiveDate {
        self.start + Duration::days(self.n_days as i64 - 1)
    }

    /// Bucket bound: `z` above it is UP, below its negative DOWN.
    pub fn tercile_bound(&self) -> f64 {
        let sd = self.sigma_latent / (1.0 - self.phi * self.phi).sqrt();
        let q = Normal::new(0.0, 1.0).expect("standard normal").inverse_cdf(2.0 / 3.0);
        sd * q
    }
}

/// Generator bookkeeping, compared against ingestion counts.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SynthLedger {
    pub submissions: usize,
    pub off_topic_submissions: usize,
    pub comments: usize,
    pub first_level_comments: usize,
    pub keyword_comments: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthCorpus {
    /// On-topic and off-topic submissions, in time order per day.
    pub submissions: Vec<Post>,
    pub comments: Vec<Post>,
    pub latent: DailySeries,
    /// Planted label of every on-topic post.
    pub truth: Vec<(String, SignalLabel)>,
    pub ledger: SynthLedger,
}

const UP_TEXT: [&str; 3] = ["expect {kw} to rise", "{kw} is strong", "{kw} could surge"];
const DOWN_TEXT: [&str; 3] = ["expect {kw} to fall", "{kw} looks weak", "{kw} will decline"];
const NEUTRAL_TEXT: [&str; 3] = ["what about {kw} today", "thoughts on {kw} news", "{kw} is the topic"];
const OFF_TOPIC_TEXT: [&str; 2] = ["nice weather today", "favourite football team"];

fn template(label: SignalLabel, rng: &mut Rng, keyword: Option<&str>) -> String {
    let pool = match label {
        SignalLabel::Up => &UP_TEXT,
        SignalLabel::Down => &DOWN_TEXT,
        SignalLabel::Neutral => &NEUTRAL_TEXT,
    };
    let t = pool.choose(rng).expect("non-empty pool");
    t.replace("{kw}", keyword.unwrap_or("it"))
}

fn bucket(z: f64, bound: f64) -> SignalLabel {
    if z > bound {
        SignalLabel::Up
    } else if z < -bound {
        SignalLabel::Down
    } else {
        SignalLabel::Neutral
    }
}

fn flip(label: SignalLabel, keep: f64, rng: &mut Rng) -> SignalLabel {
    if rng.gen::<f64>() < keep {
        return label;
    }
    let others: Vec<SignalLabel> = [SignalLabel::Up, SignalLabel::Neutral, SignalLabel::Down]
        .into_iter()
        .filter(|&l| l != label)
        .collect();
    *others.choose(rng).expect("two labels")
}

fn oppose(label: SignalLabel, rng: &mut Rng) -> SignalLabel {
    match label {
        SignalLabel::Up => SignalLabel::Down,
        SignalLabel::Down => SignalLabel::Up,
        SignalLabel::Neutral => *[SignalLabel::Up, SignalLabel::Down].choose(rng).expect("two labels"),
    }
}

/// Latent AR(1) path started from its stationary distribution.
pub fn gen_latent(config: &SynthConfig) -> Result<DailySeries> {
    config.validate()?;
    let mut rng = rng_for(config.seed, "synth/latent");
    let sd0 = config.sigma_latent / (1.0 - config.phi * config.phi).sqrt();
    let mut z = sd0 * rng.sample::<f64, _>(StandardNormal);
    let mut values = Vec::with_capacity(config.n_days);
    for _ in 0..config.n_days {
        values.push(z);
        z = config.phi * z + config.sigma_latent * rng.sample::<f64, _>(StandardNormal);
    }
    Ok(DailySeries::new("latent", config.start, values))
}

struct Day {
    submissions: Vec<Post>,
    comments: Vec<Post>,
    truth: Vec<(String, SignalLabel)>,
    ledger: SynthLedger,
}

fn gen_day(config: &SynthConfig, concept: &Concept, index: usize, z: f64, bound: f64) -> Result<Day> {
    let mut rng = rng_for(config.seed, &format!("synth/day/{index}"));
    let date = config.start + Duration::days(index as i64);
    let t0 = day_start(date);
    let draw_count = |mean: f64, rng: &mut Rng| -> Result<usize> {
        if mean == 0.0 {
            return Ok(0);
        }
        let p = Poisson::new(mean).map_err(|e| Error::invalid(e.to_string()))?;
        Ok(p.sample(rng) as usize)
    };
    let geo = Geometric::new(config.score_p).map_err(|e| Error::invalid(e.to_string()))?;
    let keywords = concept.keywords();
    let mut day = Day {
        submissions: Vec::new(),
        comments: Vec::new(),
        truth: Vec::new(),
        ledger: SynthLedger::default(),
    };
    let n_on = draw_count(config.submissions_per_day, &mut rng)?;
    let n_off = draw_count(config.off_topic_per_day, &mut rng)?;
    let mut times: Vec<(i64, bool)> = (0..n_on + n_off)
        .map(|i| (t0 + rng.gen_range(0..DAY), i < n_on))
        .collect();
    times.sort_unstable();
    for (i, (created_at, on_topic)) in times.into_iter().enumerate() {
        let id = format!("s{index}x{i}");
        let score = geo.sample(&mut rng) as i64;
        if !on_topic {
            day.ledger.off_topic_submissions += 1;
            day.submissions.push(Post {
                id,
                kind: PostKind::Submission,
                created_at,
                parent_id: None,
                root_id: None,
                text: OFF_TOPIC_TEXT.choose(&mut rng).expect("non-empty").to_string(),
                net_score: score,
            });
            continue;
        }
        let label = flip(bucket(z, bound), config.rho, &mut rng);
        let kw = keywords.choose(&mut rng).expect("non-empty keywords");
        day.ledger.submissions += 1;
        day.truth.push((id.clone(), label));
        day.submissions.push(Post {
            id: id.clone(),
            kind: PostKind::Submission,
            created_at,
            parent_id: None,
            root_id: None,
            text: template(label, &mut rng, Some(kw)),
            net_score: score,
        });
        let n_comments = draw_count(config.comments_per_submission, &mut rng)?;
        let mut thread: Vec<(String, i64)> = Vec::with_capacity(n_comments);
        for j in 0..n_comments {
            let cid = format!("c{index}x{i}x{j}");
            let lag = rng.gen_range(0..=i64::from(config.comment_lag_days) * DAY);
            let (parent, parent_time) = if !thread.is_empty() && rng.gen::<f64>() < config.reply_share {
                thread.choose(&mut rng).expect("non-empty thread").clone()
            } else {
                (id.clone(), created_at)
            };
            let c_time = (parent_time + 1).max(created_at + lag);
            let c_label = if rng.gen::<f64>() < config.delta { oppose(label, &mut rng) } else { label };
            let mention = rng.gen::<f64>() < config.keyword_share;
            let c_kw = mention.then(|| keywords.choose(&mut rng).expect("non-empty").as_str());
            day.ledger.comments += 1;
            day.ledger.first_level_comments += usize::from(parent == id);
            day.ledger.keyword_comments += usize::from(mention);
            day.truth.push((cid.clone(), c_label));
            day.comments.push(Post {
                id: cid.clone(),
                kind: PostKind::Comment,
                created_at: c_time,
                parent_id: Some(parent),
                root_id: Some(id.clone()),
                text: template(c_label, &mut rng, c_kw),
                net_score: geo.sample(&mut rng) as i64 - 1,
            });
            thread.push((cid, c_time));
        }
    }
    Ok(day)
}

/// Synthetic corpus with planted labels and its latent path.
pub fn gen_corpus(config: &SynthConfig) -> Result<SynthCorpus> {
    let latent = gen_latent(config)?;
    let concept = Concept::default_for(config.concept);
    let bound = config.tercile_bound();
    let days: Vec<Day> = latent
        .values
        .par_iter()
        .enumerate()
        .map(|(i, &z)| gen_day(config, &concept, i, z, bound))
        .collect::<Result<_>>()?;
    let mut out = SynthCorpus {
        submissions: Vec::new(),
        comments: Vec::new(),
        latent,
        truth: Vec::new(),
        ledger: SynthLedger::default(),
    };
    for d in days {
        out.submissions.extend(d.submissions);
        out.comments.extend(d.comments);
        out.truth.extend(d.truth);
        out.ledger.submissions += d.ledger.submissions;
        out.ledger.off_topic_submissions += d.ledger.off_topic_submissions;
        out.ledger.comments += d.ledger.comments;
        out.ledger.first_level_comments += d.ledger.first_level_comments;
        out.ledger.keyword_comments += d.ledger.keyword_comments;
    }
    Ok(out)
}

impl SynthCorpus {
    pub fn write_submissions<W: Write>(&self, mut w: W) -> Result<()> {
        for p in &self.submissions {
            write_dump_record(&mut w, p, None)?;
        }
        Ok(())
    }

    pub fn write_comments<W: Write>(&self, mut w: W) -> Result<()> {
        for p in &self.comments {
            write_dump_record(&mut w, p, None)?;
        }
        Ok(())
    }

    /// `id,label` rows of the planted labels.
    pub fn write_truth<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["id", "label"])?;
        for (id, label) in &self.truth {
            out.write_record([id.as_str(), label.as_str()])?;
        }
        out.flush().map_err(Error::Stream)?;
        Ok(())
    }

    /// Writes `submissions.ndjson`, `comments.ndjson`, `truth.csv`,
    /// `latent.csv` and `ledger.json` into `dir`.
    pub fn write_dir(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let create = |name: &str| -> Result<std::io::BufWriter<std::fs::File>> {
            let p = dir.join(name);
            Ok(std::io::BufWriter::new(std::fs::File::create(&p).map_err(|e| Error::io(&p, e))?))
        };
        self.write_submissions(create("submissions.ndjson")?)?;
        self.write_comments(create("comments.ndjson")?)?;
        self.write_truth(create("truth.csv")?)?;
        self.latent.write_csv(create("latent.csv")?)?;
        let mut ledger = create("ledger.json")?;
        serde_json::to_writer_pretty(&mut ledger, &self.ledger)?;
        ledger.write_all(b"\n").map_err(Error::Stream)?;
        ledger.flush().map_err(Error::Stream)?;
        Ok(())
    }
}

/// Mean of the latent path per calendar month, over months fully covered.
pub fn monthly_means(latent: &DailySeries) -> Result<MonthlySeries> {
    let mut first = YearMonth::of(latent.start);
    if first.first_day() != latent.start {
        first = first.succ();
    }
    let mut last = YearMonth::of(latent.end());
    if last.last_day() != latent.end() {
        last = last.pred();
    }
    if last < first {
        return Err(Error::Coverage("latent path covers no complete month".into()));
    }
    let values = first
        .through(last)
        .map(|m| {
            let lo = latent.index_of(m.first_day()).expect("covered");
            let hi = latent.index_of(m.last_day()).expect("covered");
            let s = &latent.values[lo..=hi];
            s.iter().sum::<f64>() / s.len() as f64
        })
        .collect();
    Ok(MonthlySeries::new(first, values))
}

/// `y_t = 0.5 y_{t-1} + b * mean(z in month t) + sigma_target * e_t`, with
/// `y` before the first month set to 0.
pub fn gen_target(latent: &DailySeries, b: f64, sigma_target: f64, seed: u64) -> Result<MonthlySeries> {
    if !(sigma_target >= 0.0) || !b.is_finite() {
        return Err(Error::invalid("sigma_target must be non-negative and b finite"));
    }
    let means = monthly_means(latent)?;
    let mut rng = rng_for(seed, "synth/target");
    let mut prev = 0.0;
    let values = means
        .values
        .iter()
        .map(|m| {
            let e: f64 = rng.sample(StandardNormal);
            prev = 0.5 * prev + b * m + sigma_target * e;
            prev
        })
        .collect();
    Ok(MonthlySeries::new(means.first, values))
}

/// Loading `b` under which the latent's monthly means carry `share` of the
/// combined latent and noise innovation variance of the target.
pub fn loading_for_share(latent: &DailySeries, sigma_target: f64, share: f64) -> Result<f64> {
    if !(share >= 0.0 && share < 1.0) {
        return Err(Error::invalid("share must lie in [0, 1)"));
    }
    let m = monthly_means(latent)?.values;
    let mean = m.iter().sum::<f64>() / m.len() as f64;
    let sd = (m.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / m.len() as f64).sqrt();
    if sd == 0.0 {
        return Err(Error::invalid("latent monthly means are constant"));
    }
    Ok(sigma_target * (share / (1.0 - share)).sqrt() / sd)
}
