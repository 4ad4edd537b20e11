use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::Write;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{require_inputs, ClassifierKind, RunConfig};
use crate::calendar::YearMonth;
use crate::classifier::{accuracy_sweep, read_truth_file, Classifier, Dictionary, DictionaryClassifier, SweepRow};
use crate::corpus::{
    build_comment_sets, build_forest, keyword_filter, matches_concept, write_dump_record, Concept, ConceptName,
    DumpReader, DumpStats, ParseOptions, Post, PostKind,
};
use crate::error::{Error, Result};
use crate::evaluate::{
    best_by_target, cum_loss_diff, evaluate_pair, first_pc, gr_fluctuation, pearson_corr, rank_specs,
    read_evaluations, table_rows, write_correlations, write_cum_loss, write_evaluations, write_fluctuation,
    write_table, Correlation, EvalOptions, Evaluation,
};
use crate::gateway::Gateway;
use crate::io::{self, ArtifactWriter, Manifest};
use crate::midas::{
    nowcast_recursive, read_nowcasts, write_nowcasts, MonthlySeries, NowcastConfig, NowcastRecord, SeriesStore,
    BENCHMARK_SPEC,
};
use crate::rng::split_seed;
use crate::signals::{
    build_signals, reclassification_audit, relabel_all, spec_grid, CommentSet, DailySeries, SignalSpec,
    SubmissionVotes, Vote,
};
use crate::synth::{gen_corpus, gen_target, loading_for_share};

/// Per-concept post counts after keyword filtering.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestCounts {
    pub concept: String,
    pub submissions: usize,
    pub comments: usize,
    pub first_level_comments: usize,
    pub keyword_comments: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct IngestStats {
    pub submissions: DumpStats,
    pub comments: DumpStats,
    /// Comments re-attached under their root because the parent was missing.
    pub dangling_attached: usize,
}

fn concept_dir(stage: &str, c: ConceptName) -> String {
    format!("{stage}/{}", c.as_str())
}

fn read_dumps(paths: &[PathBuf], kind: PostKind, opts: ParseOptions) -> Result<(Vec<Post>, DumpStats)> {
    let mut posts = Vec::new();
    let mut stats = DumpStats::default();
    for p in paths {
        let mut reader = DumpReader::new(io::open(p)?, kind, opts);
        for post in reader.by_ref() {
            posts.push(post.map_err(|e| match e {
                Error::Stream(s) => Error::io(p, s),
                other => other,
            })?);
        }
        stats.merge(reader.stats());
    }
    Ok((posts, stats))
}

fn read_store(path: &Path, kind: PostKind, stage: &'static str) -> Result<Vec<Post>> {
    io::require(path, stage)?;
    read_dumps(&[path.to_path_buf()], kind, ParseOptions::default()).map(|r| r.0)
}

/// Streams the dumps, keeps keyword-matching submissions per concept and the
/// comments under them, and writes the filtered store with counts.
pub fn cmd_ingest(cfg: &RunConfig) -> Result<(Vec<IngestCounts>, Manifest)> {
    if cfg.corpus.submissions.is_empty() {
        return Err(Error::Config("corpus.submissions lists no dump files".into()));
    }
    require_inputs("corpus", cfg.corpus.submissions.iter().chain(&cfg.corpus.comments))?;
    let opts = ParseOptions {
        include_selftext: cfg.corpus.include_selftext,
    };
    let (subs, sub_stats) = read_dumps(&cfg.corpus.submissions, PostKind::Submission, opts)?;
    let (comments, com_stats) = read_dumps(&cfg.corpus.comments, PostKind::Comment, opts)?;
    let mut out = ArtifactWriter::new(&cfg.out, "ingest");
    let mut counts = Vec::new();
    let mut dangling = 0;
    for &name in &cfg.corpus.concepts {
        let concept = Concept::default_for(name);
        let kept = keyword_filter(subs.iter(), &concept);
        let ids: HashSet<&str> = kept.iter().map(|p| p.id.as_str()).collect();
        let kept_comments: Vec<Post> = comments
            .iter()
            .filter(|c| c.root_id.as_deref().is_some_and(|r| ids.contains(r)))
            .cloned()
            .collect();
        let dir = concept_dir("ingest", name);
        out.write_with(&format!("{dir}/submissions.ndjson"), |w| {
            kept.iter().try_for_each(|p| write_dump_record(&mut *w, p, Some(name)))
        })?;
        out.write_with(&format!("{dir}/comments.ndjson"), |w| {
            kept_comments.iter().try_for_each(|p| write_dump_record(&mut *w, p, Some(name)))
        })?;
        let forest = build_forest(kept.clone(), kept_comments.clone());
        dangling += forest.dangling_attached;
        counts.push(IngestCounts {
            concept: name.as_str().into(),
            submissions: kept.len(),
            comments: kept_comments.len(),
            first_level_comments: forest.trees.iter().map(|t| t.first_level().len()).sum(),
            keyword_comments: kept_comments.iter().filter(|c| matches_concept(&c.text, &concept)).count(),
        });
    }
    out.write_with("ingest/counts.csv", |w| write_csv(w, &counts))?;
    let stats = IngestStats {
        submissions: sub_stats,
        comments: com_stats,
        dangling_attached: dangling,
    };
    out.write_with("ingest/stats.json", |w| write_json(w, &stats))?;
    Ok((counts, out.finish()?))
}

fn write_csv<W: Write, T: Serialize>(w: W, rows: &[T]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in rows {
        out.serialize(r)?;
    }
    out.flush().map_err(Error::Stream)?;
    Ok(())
}

fn write_json<W: Write, T: Serialize>(mut w: W, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n").map_err(Error::Stream)?;
    Ok(())
}

/// Builds the configured classifier; the gateway journal defaults to
/// `<out>/cache/llm.ndjson`.
pub fn make_classifier(cfg: &RunConfig) -> Result<Box<dyn Classifier>> {
    match cfg.classifier.kind()? {
        ClassifierKind::Dictionary => {
            let dict = match &cfg.classifier.dictionary {
                Some(p) => Dictionary::from_path(p)?,
                None => Dictionary::bundled(),
            };
            Ok(Box::new(DictionaryClassifier::new("dictionary", dict)))
        }
        ClassifierKind::Llm => Ok(Box::new(make_gateway(cfg)?)),
    }
}

fn make_gateway(cfg: &RunConfig) -> Result<Gateway> {
    let mut g = cfg.gateway.clone();
    if g.cache_path.is_none() {
        let dir = cfg.out.join("cache");
        io::create_dir(&dir)?;
        g.cache_path = Some(dir.join("llm.ndjson"));
    }
    Gateway::new(g)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct LabelRow {
    post_id: String,
    label: String,
    classifier_id: String,
    fallback: bool,
}

/// Labels each submission and the comments in its two comment sets, and
/// stores them as voting records.
pub fn cmd_classify(cfg: &RunConfig) -> Result<Manifest> {
    let classifier = make_classifier(cfg)?;
    let mut out = ArtifactWriter::new(&cfg.out, "classify");
    for &name in &cfg.corpus.concepts {
        let concept = Concept::default_for(name);
        let dir = cfg.out.join(concept_dir("ingest", name));
        let subs = read_store(&dir.join("submissions.ndjson"), PostKind::Submission, "ingest")?;
        let comments = read_store(&dir.join("comments.ndjson"), PostKind::Comment, "ingest")?;
        let forest = build_forest(subs, comments);
        let sets: Vec<_> = forest
            .trees
            .iter()
            .map(|t| build_comment_sets(t, &concept, cfg.corpus.max_comment_lag_days))
            .collect();
        let mut seen = HashSet::new();
        let mut batch: Vec<&Post> = Vec::new();
        for (tree, set) in forest.trees.iter().zip(&sets) {
            for p in std::iter::once(&tree.root).chain(&set.first_level).chain(&set.keyword_all) {
                if seen.insert(p.id.as_str()) {
                    batch.push(p);
                }
            }
        }
        let items = classifier.classify(&batch, &concept)?;
        let labels: HashMap<&str, crate::classifier::SignalLabel> =
            items.iter().map(|i| (i.post_id.as_str(), i.label)).collect();
        let votes = |ps: &[Post]| -> Vec<Vote> {
            ps.iter()
                .map(|p| Vote {
                    label: labels[p.id.as_str()],
                    net_score: p.net_score,
                })
                .collect()
        };
        let records: Vec<SubmissionVotes> = forest
            .trees
            .iter()
            .zip(&sets)
            .map(|(t, s)| SubmissionVotes {
                id: t.root.id.clone(),
                date: t.root.date(),
                label: labels[t.root.id.as_str()],
                first_level: votes(&s.first_level),
                keyword_all: votes(&s.keyword_all),
            })
            .collect();
        let rows: Vec<LabelRow> = items
            .iter()
            .map(|i| LabelRow {
                post_id: i.post_id.clone(),
                label: i.label.as_str().into(),
                classifier_id: i.classifier_id.clone(),
                fallback: i.fallback,
            })
            .collect();
        let cdir = concept_dir("classify", name);
        out.write_with(&format!("{cdir}/labels.csv"), |w| write_csv(w, &rows))?;
        out.write_with(&format!("{cdir}/votes.ndjson"), |w| {
            for r in &records {
                serde_json::to_writer(&mut *w, r)?;
                w.push(b'\n');
            }
            Ok(())
        })?;
        let fallbacks = items.iter().filter(|i| i.fallback).count();
        log::info!("{name}: labeled {} posts ({fallbacks} fallbacks)", items.len());
    }
    Ok(out.finish()?)
}

fn read_votes(cfg: &RunConfig, name: ConceptName) -> Result<Vec<SubmissionVotes>> {
    let path = cfg.out.join(concept_dir("classify", name)).join("votes.ndjson");
    let text = io::read_to_string(&{
        io::require(&path, "classify")?;
        path
    })?;
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| Ok(serde_json::from_str(l)?))
        .collect()
}

fn signal_range(cfg: &RunConfig, votes: &[SubmissionVotes]) -> Result<(NaiveDate, NaiveDate)> {
    let min = votes.iter().map(|v| v.date).min();
    let max = votes.iter().map(|v| v.date).max();
    let start = cfg.signals.start.or(min);
    let end = cfg.signals.end.or(max);
    match (start, end) {
        (Some(s), Some(e)) if s <= e => Ok((s, e)),
        (Some(s), Some(e)) => Err(Error::Config(format!("signal range {s}..{e} is empty"))),
        _ => Err(Error::Config("no submissions and no signals.start/end configured".into())),
    }
}

/// Builds every grid series per concept and the re-labeling audit.
pub fn cmd_signals(cfg: &RunConfig) -> Result<Manifest> {
    let specs = spec_grid(&cfg.grid)?;
    let audit_spec = cfg.audit_spec()?;
    let mut out = ArtifactWriter::new(&cfg.out, "signals");
    for &name in &cfg.corpus.concepts {
        let all = read_votes(cfg, name)?;
        let (start, end) = signal_range(cfg, &all)?;
        let votes: Vec<SubmissionVotes> = all.into_iter().filter(|v| v.date >= start && v.date <= end).collect();
        let series = build_signals(&votes, &specs, start, end)?;
        let dir = concept_dir("signals", name);
        for s in &series {
            out.write_with(&format!("{dir}/{}.csv", s.name), |w| s.write_csv(w))?;
        }
        let list: String = specs.iter().map(|s| format!("{s}\n")).collect();
        out.write(&format!("{dir}/specs.txt"), list.as_bytes())?;

        let original: Vec<_> = votes.iter().map(|v| v.label).collect();
        let relabeled = relabel_all(&votes, &audit_spec);
        let months: Vec<YearMonth> = votes.iter().map(|v| YearMonth::of(v.date)).collect();
        let audit = reclassification_audit(&original, &relabeled, Some(&months))?;
        out.write_with(&format!("{dir}/audit_transitions.csv"), |w| audit.write_transitions_csv(w))?;
        out.write_with(&format!("{dir}/audit_monthly.csv"), |w| audit.write_monthly_csv(w))?;
        out.write_with(&format!("{dir}/audit_summary.json"), |w| {
            write_json(
                w,
                &serde_json::json!({
                    "spec": audit_spec.to_string(),
                    "total_items": audit.total_items,
                    "changed": audit.changed,
                    "share": audit.share,
                    "upgrades": audit.upgrades,
                    "downgrades": audit.downgrades,
                    "ratio": if audit.ratio.is_finite() { Some(audit.ratio) } else { None },
                }),
            )
        })?;
    }
    Ok(out.finish()?)
}

fn read_specs(cfg: &RunConfig, name: ConceptName) -> Result<Vec<String>> {
    let path = cfg.out.join(concept_dir("signals", name)).join("specs.txt");
    io::require(&path, "signals")?;
    Ok(io::read_to_string(&path)?
        .lines()
        .filter(|l| !l.is_empty())
        .map(String::from)
        .collect())
}

fn read_signal(cfg: &RunConfig, name: ConceptName, spec: &str) -> Result<DailySeries> {
    let path = cfg.out.join(concept_dir("signals", name)).join(format!("{spec}.csv"));
    DailySeries::read_csv(spec, io::open_artifact(&path, "signals")?)
}

fn read_monthly(path: &Path) -> Result<MonthlySeries> {
    MonthlySeries::read_csv(io::open(path)?)
}

/// Runs `f` on a pool of `jobs` threads (0 = one per core).
pub fn with_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

/// Recursive MIDAS and AR(1) nowcasts for every target, signal spec and
/// cutoff.
pub fn cmd_nowcast(cfg: &RunConfig) -> Result<Manifest> {
    if cfg.targets.is_empty() {
        return Err(Error::Config("no [[targets]] configured".into()));
    }
    require_inputs("targets", cfg.targets.iter().map(|t| &t.path))?;
    let mut jobs = Vec::new();
    let mut series: HashMap<(ConceptName, String), DailySeries> = HashMap::new();
    let mut targets = HashMap::new();
    for t in &cfg.targets {
        targets.insert(t.name.clone(), read_monthly(&t.path)?);
        for spec in read_specs(cfg, t.concept)? {
            if !series.contains_key(&(t.concept, spec.clone())) {
                let s = read_signal(cfg, t.concept, &spec)?;
                series.insert((t.concept, spec.clone()), s);
            }
            for &cutoff in &cfg.sample.cutoffs {
                jobs.push((t, spec.clone(), cutoff));
            }
        }
    }
    let runs: Vec<_> = with_pool(cfg.jobs, || {
        jobs.par_iter()
            .map(|(t, spec, cutoff)| {
                let store = SeriesStore {
                    target: &targets[&t.name],
                    daily: &series[&(t.concept, spec.clone())],
                };
                let nc = NowcastConfig {
                    target: t.name.clone(),
                    spec: spec.clone(),
                    estimation_start: cfg.sample.estimation_start,
                    eval_start: cfg.sample.eval_start,
                    eval_end: cfg.sample.eval_end,
                    cutoff_days: *cutoff,
                    options: cfg.midas.clone(),
                };
                nowcast_recursive(&store, &nc)
            })
            .collect::<Result<Vec<_>>>()
    })??;
    let mut bench: BTreeMap<(String, u32), Vec<NowcastRecord>> = BTreeMap::new();
    let mut records = Vec::new();
    for ((t, _, cutoff), run) in jobs.iter().zip(runs) {
        bench.entry((t.name.clone(), *cutoff)).or_insert(run.benchmark);
        records.extend(run.midas);
    }
    let mut all: Vec<NowcastRecord> = bench.into_values().flatten().collect();
    all.extend(records);
    all.sort_by(|a, b| {
        (a.target.as_str(), a.cutoff, a.spec != BENCHMARK_SPEC, a.spec.as_str(), a.month).cmp(&(
            b.target.as_str(),
            b.cutoff,
            b.spec != BENCHMARK_SPEC,
            b.spec.as_str(),
            b.month,
        ))
    });
    let fallbacks = all.iter().filter(|r| r.fallback).count();
    if fallbacks > 0 {
        log::warn!("{fallbacks} nowcasts fell back to AR(1)");
    }
    let mut out = ArtifactWriter::new(&cfg.out, "nowcast");
    out.write_with("nowcast/nowcasts.csv", |w| write_nowcasts(w, &all))?;
    Ok(out.finish()?)
}

fn read_all_nowcasts(cfg: &RunConfig) -> Result<Vec<NowcastRecord>> {
    read_nowcasts(io::open_artifact(&cfg.out.join("nowcast/nowcasts.csv"), "nowcast")?)
}

type Group<'a> = BTreeMap<(String, u32), BTreeMap<String, Vec<&'a NowcastRecord>>>;

fn group(records: &[NowcastRecord]) -> Group<'_> {
    let mut g: Group = BTreeMap::new();
    for r in records {
        g.entry((r.target.clone(), r.cutoff))
            .or_default()
            .entry(r.spec.clone())
            .or_default()
            .push(r);
    }
    g
}

fn eval_options(cfg: &RunConfig) -> EvalOptions {
    EvalOptions {
        seed: split_seed(cfg.seed, "evaluate"),
        ..cfg.evaluate.clone()
    }
}

/// Scores every (target, cutoff, spec) nowcast path against the benchmark.
pub fn cmd_evaluate(cfg: &RunConfig) -> Result<(Vec<Evaluation>, Manifest)> {
    let records = read_all_nowcasts(cfg)?;
    let groups = group(&records);
    let opts = eval_options(cfg);
    let mut pairs = Vec::new();
    for ((target, cutoff), specs) in &groups {
        let bench = specs.get(BENCHMARK_SPEC).ok_or_else(|| {
            Error::Parse(format!("no {BENCHMARK_SPEC} nowcasts for {target} at cutoff {cutoff}"))
        })?;
        for (spec, recs) in specs {
            if spec != BENCHMARK_SPEC {
                pairs.push((recs, bench));
            }
        }
    }
    let evals: Vec<Evaluation> = with_pool(cfg.jobs, || {
        pairs
            .par_iter()
            .map(|(m, b)| {
                let m: Vec<NowcastRecord> = m.iter().map(|r| (*r).clone()).collect();
                let b: Vec<NowcastRecord> = b.iter().map(|r| (*r).clone()).collect();
                evaluate_pair(&m, &b, &opts).map(|d| d.evaluation)
            })
            .collect::<Result<Vec<_>>>()
    })??;
    let mut out = ArtifactWriter::new(&cfg.out, "evaluate");
    out.write_with("evaluate/evaluations.csv", |w| write_evaluations(w, &evals))?;
    Ok((evals, out.finish()?))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct SweepEntry {
    target: String,
    cutoff: u32,
    dimension: String,
    value: String,
    best_spec: String,
    ratio_rmsfe: f64,
}

/// Best RMSFE ratio per target and value of each grid dimension.
fn dimension_breakdown(evals: &[Evaluation]) -> Vec<SweepEntry> {
    let mut best: BTreeMap<(String, u32, &'static str, String), &Evaluation> = BTreeMap::new();
    for e in evals {
        let Ok(spec) = e.spec.parse::<SignalSpec>() else { continue };
        let mut dims = vec![("window", spec.ma_window.to_string())];
        if !spec.is_submissions_only() {
            dims.push(("threshold", spec.threshold.to_string()));
            dims.push(("weighting", u8::from(spec.vote_weighting).to_string()));
            dims.push((
                "comment_set",
                match spec.comment_set {
                    CommentSet::FirstLevel => "first_level",
                    CommentSet::KeywordAll => "keyword_all",
                    CommentSet::SubmissionsOnly => "submissions_only",
                }
                .to_string(),
            ));
        } else {
            dims.push(("comment_set", "submissions_only".into()));
        }
        for (dim, value) in dims {
            let slot = best.entry((e.target.clone(), e.cutoff, dim, value)).or_insert(e);
            if e.ratio_rmsfe < slot.ratio_rmsfe {
                *slot = e;
            }
        }
    }
    best.into_iter()
        .map(|((target, cutoff, dim, value), e)| SweepEntry {
            target,
            cutoff,
            dimension: dim.into(),
            value,
            best_spec: e.spec.clone(),
            ratio_rmsfe: e.ratio_rmsfe,
        })
        .collect()
}

fn monthly_mean(s: &DailySeries) -> MonthlySeries {
    let first = YearMonth::of(s.start);
    let last = YearMonth::of(s.end());
    let values = first
        .through(last)
        .map(|m| {
            let vals: Vec<f64> = s
                .dates()
                .zip(&s.values)
                .filter(|(d, _)| YearMonth::of(*d) == m)
                .map(|(_, v)| *v)
                .collect();
            vals.iter().sum::<f64>() / vals.len() as f64
        })
        .collect();
    MonthlySeries::new(first, values)
}

fn overlap(a: &MonthlySeries, b: &MonthlySeries) -> Option<(Vec<f64>, Vec<f64>)> {
    let from = a.first.max(b.first);
    let to = a.last().min(b.last());
    if to.diff(from) < 2 {
        return None;
    }
    let xs = from.through(to).map(|m| a.get(m).expect("in range")).collect();
    let ys = from.through(to).map(|m| b.get(m).expect("in range")).collect();
    Some((xs, ys))
}

/// Ranking table, cumulative-loss and fluctuation paths for each target's
/// best spec, grid-dimension breakdowns, correlations and audit tables.
pub fn cmd_report(cfg: &RunConfig) -> Result<Manifest> {
    let evals = read_evaluations(io::open_artifact(&cfg.out.join("evaluate/evaluations.csv"), "evaluate")?)?;
    let records = read_all_nowcasts(cfg)?;
    let groups = group(&records);
    let primary = cfg.sample.cutoffs[0];
    let primary_evals: Vec<Evaluation> = evals.iter().filter(|e| e.cutoff == primary).cloned().collect();
    let mut out = ArtifactWriter::new(&cfg.out, "report");
    out.write_with("report/table.csv", |w| write_table(w, &table_rows(&primary_evals)))?;
    out.write_with("report/ranking.csv", |w| write_evaluations(w, &rank_specs(&evals)))?;
    out.write_with("report/breakdown.csv", |w| write_csv(w, &dimension_breakdown(&evals)))?;

    let opts = eval_options(cfg);
    let best = best_by_target(&primary_evals);
    for e in &best {
        let specs = &groups[&(e.target.clone(), e.cutoff)];
        let clone = |v: &Vec<&NowcastRecord>| v.iter().map(|r| (*r).clone()).collect::<Vec<_>>();
        let detail = evaluate_pair(&clone(&specs[&e.spec]), &clone(&specs[BENCHMARK_SPEC]), &opts)?;
        let path = cum_loss_diff(&detail.e_model, &detail.e_bench)?;
        out.write_with(&format!("report/cum_loss_{}.csv", e.target), |w| {
            write_cum_loss(w, &detail.months, &path)
        })?;
        if detail.months.len() >= 20 {
            let fl = gr_fluctuation(&detail.squared_differential(), opts.mu, opts.alpha)?;
            out.write_with(&format!("report/fluctuation_{}.csv", e.target), |w| {
                write_fluctuation(w, &detail.months, &fl)
            })?;
        }
    }

    let mut named: Vec<(String, MonthlySeries)> = Vec::new();
    for e in &best {
        let t = cfg.targets.iter().find(|t| t.name == e.target);
        if let Some(t) = t {
            let s = read_signal(cfg, t.concept, &e.spec)?;
            named.push((format!("{}:{}", e.target, e.spec), monthly_mean(&s)));
        }
    }
    let mut competitors = Vec::new();
    for c in &cfg.competitors {
        competitors.push((c.name.clone(), read_monthly(&c.path)?));
    }
    if competitors.len() >= 2 {
        let from = competitors.iter().map(|c| c.1.first).max().expect("non-empty");
        let to = competitors.iter().map(|c| c.1.last()).min().expect("non-empty");
        if to.diff(from) >= 2 {
            let panel: Vec<Vec<f64>> = competitors
                .iter()
                .map(|(_, s)| from.through(to).map(|m| s.get(m).expect("in range")).collect())
                .collect();
            let pc = first_pc(&panel)?;
            competitors.push(("first_pc".into(), MonthlySeries::new(from, pc.scores)));
        }
    }
    named.extend(competitors);
    let mut corrs = Vec::new();
    for i in 0..named.len() {
        for j in i + 1..named.len() {
            if let Some((x, y)) = overlap(&named[i].1, &named[j].1) {
                if let Ok(r) = pearson_corr(&x, &y) {
                    corrs.push(Correlation {
                        a: named[i].0.clone(),
                        b: named[j].0.clone(),
                        correlation: (r * 1000.0).round() / 1000.0,
                    });
                }
            }
        }
    }
    out.write_with("report/correlations.csv", |w| write_correlations(w, &corrs))?;

    for &name in &cfg.corpus.concepts {
        let dir = cfg.out.join(concept_dir("signals", name));
        for file in ["audit_transitions.csv", "audit_monthly.csv"] {
            let p = dir.join(file);
            if p.exists() {
                let bytes = std::fs::read(&p).map_err(|e| Error::io(&p, e))?;
                out.write(&format!("report/{}_{file}", name.as_str()), &bytes)?;
            }
        }
    }
    Ok(out.finish()?)
}

/// Synthetic corpus, planted labels and target under `<out>/synth`.
pub fn cmd_synth(cfg: &RunConfig) -> Result<Manifest> {
    let mut sc = cfg.synth.corpus.clone();
    sc.seed = split_seed(cfg.seed, "synth");
    let corpus = gen_corpus(&sc)?;
    let b = match cfg.synth.loading {
        Some(b) => b,
        None => loading_for_share(&corpus.latent, cfg.synth.sigma_target, cfg.synth.variance_share)?,
    };
    let target = gen_target(&corpus.latent, b, cfg.synth.sigma_target, split_seed(cfg.seed, "synth/target"))?;
    let mut out = ArtifactWriter::new(&cfg.out, "synth");
    out.write_with("synth/submissions.ndjson", |w| corpus.write_submissions(w))?;
    out.write_with("synth/comments.ndjson", |w| corpus.write_comments(w))?;
    out.write_with("synth/truth.csv", |w| corpus.write_truth(w))?;
    out.write_with("synth/latent.csv", |w| corpus.latent.write_csv(w))?;
    out.write_with("synth/target.csv", |w| target.write_csv(w))?;
    out.write_with("synth/ledger.json", |w| {
        write_json(w, &serde_json::json!({ "loading": b, "counts": corpus.ledger }))
    })?;
    Ok(out.finish()?)
}

/// Macro-F1 of the configured classifier against hand labels, repeated per
/// temperature.
pub fn cmd_accuracy(cfg: &RunConfig) -> Result<(Vec<SweepRow>, Manifest)> {
    let truth_path = cfg
        .accuracy
        .truth
        .as_ref()
        .ok_or_else(|| Error::Config("accuracy.truth is not set".into()))?;
    require_inputs("accuracy", [truth_path])?;
    let truth = read_truth_file(io::open(truth_path)?)?;
    let name = cfg.accuracy.concept;
    let concept = Concept::default_for(name);
    let dir = cfg.out.join(concept_dir("ingest", name));
    let mut posts = read_store(&dir.join("submissions.ndjson"), PostKind::Submission, "ingest")?;
    posts.extend(read_store(&dir.join("comments.ndjson"), PostKind::Comment, "ingest")?);
    let by_id: HashMap<&str, &Post> = posts.iter().map(|p| (p.id.as_str(), p)).collect();
    let batch: Vec<&Post> = truth
        .iter()
        .map(|(id, _)| {
            by_id
                .get(id.as_str())
                .copied()
                .ok_or_else(|| Error::invalid(format!("labeled post {id} is not in the ingested {name} store")))
        })
        .collect::<Result<_>>()?;
    let kind = cfg.classifier.kind()?;
    let dictionary = match kind {
        ClassifierKind::Dictionary => Some(make_classifier(cfg)?),
        ClassifierKind::Llm => None,
    };
    let mut gateway = match kind {
        ClassifierKind::Llm => Some(make_gateway(cfg)?),
        ClassifierKind::Dictionary => None,
    };
    let rows = accuracy_sweep(&truth, &cfg.accuracy.temperatures, cfg.accuracy.repetitions, |t, rep| {
        let items = match (&dictionary, gateway.as_mut()) {
            (Some(d), _) => d.classify(&batch, &concept)?,
            (None, Some(g)) => {
                g.set_temperature(t)?;
                g.set_salt(format!("rep{rep}"));
                g.classify(&batch, &concept)?
            }
            (None, None) => unreachable!("one classifier is configured"),
        };
        Ok(items.into_iter().map(|i| (i.post_id, i.label)).collect())
    })?;
    let mut out = ArtifactWriter::new(&cfg.out, "accuracy");
    out.write_with("accuracy/sweep.csv", |w| write_csv(w, &rows))?;
    Ok((rows, out.finish()?))
}

/// Stages in pipeline order.
pub fn cmd_pipeline(cfg: &RunConfig) -> Result<()> {
    cmd_ingest(cfg)?;
    cmd_classify(cfg)?;
    cmd_signals(cfg)?;
    cmd_nowcast(cfg)?;
    cmd_evaluate(cfg)?;
    cmd_report(cfg)?;
    Ok(())
}
