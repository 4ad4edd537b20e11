use std::borrow::Cow;
use std::io::{BufRead, Write};

use serde::Deserialize;
use serde_json::json;

use super::{ConceptName, Post, PostKind};
use crate::error::Result;

#[derive(Debug, Clone, Copy)]
pub struct ParseOptions {
    /// Append `selftext` to the submission title when present.
    pub include_selftext: bool,
}

impl Default for ParseOptions {
    fn default() -> Self {
        Self {
            include_selftext: true,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct DumpStats {
    pub lines: u64,
    pub parsed: u64,
    /// Lines that failed schema validation.
    pub skipped: u64,
    /// Line numbers (1-based) of the first skipped lines.
    pub skipped_lines: Vec<u64>,
    /// Deleted, removed or empty-text items.
    pub dropped_empty: u64,
}

const MAX_RECORDED_SKIPS: usize = 1000;

impl DumpStats {
    fn skip(&mut self, line: u64) {
        self.skipped += 1;
        if self.skipped_lines.len() < MAX_RECORDED_SKIPS {
            self.skipped_lines.push(line);
        }
    }

    pub fn merge(&mut self, other: &DumpStats) {
        self.lines += other.lines;
        self.parsed += other.parsed;
        self.skipped += other.skipped;
        self.dropped_empty += other.dropped_empty;
        let room = MAX_RECORDED_SKIPS.saturating_sub(self.skipped_lines.len());
        self.skipped_lines
            .extend(other.skipped_lines.iter().take(room).copied());
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Epoch<'a> {
    Int(i64),
    Float(f64),
    #[serde(borrow)]
    Str(Cow<'a, str>),
}

impl Epoch<'_> {
    fn seconds(&self) -> Option<i64> {
        match self {
            Epoch::Int(v) => Some(*v),
            Epoch::Float(v) if v.is_finite() => Some(*v as i64),
            Epoch::Float(_) => None,
            Epoch::Str(s) => s
                .trim()
                .parse::<i64>()
                .ok()
                .or_else(|| s.trim().parse::<f64>().ok().map(|f| f as i64)),
        }
    }
}

#[derive(Deserialize)]
struct RawRecord<'a> {
    #[serde(borrow)]
    id: Option<Cow<'a, str>>,
    #[serde(borrow)]
    created_utc: Option<Epoch<'a>>,
    #[serde(borrow)]
    title: Option<Cow<'a, str>>,
    #[serde(borrow)]
    selftext: Option<Cow<'a, str>>,
    #[serde(borrow)]
    body: Option<Cow<'a, str>>,
    score: Option<i64>,
    #[serde(borrow)]
    link_id: Option<Cow<'a, str>>,
    #[serde(borrow)]
    parent_id: Option<Cow<'a, str>>,
}

fn strip_prefix(id: &str) -> &str {
    id.strip_prefix("t3_")
        .or_else(|| id.strip_prefix("t1_"))
        .unwrap_or(id)
}

fn is_empty_text(s: &str) -> bool {
    let t = s.trim();
    t.is_empty() || t == "[deleted]" || t == "[removed]"
}

enum LineOutcome {
    Post(Post),
    Invalid,
    Empty,
}

fn decode(line: &str, kind: PostKind, opts: ParseOptions) -> LineOutcome {
    let Ok(raw) = serde_json::from_str::<RawRecord>(line) else {
        return LineOutcome::Invalid;
    };
    let Some(id) = raw.id.filter(|s| !s.is_empty()) else {
        return LineOutcome::Invalid;
    };
    let Some(created_at) = raw.created_utc.as_ref().and_then(Epoch::seconds) else {
        return LineOutcome::Invalid;
    };
    let net_score = raw.score.unwrap_or(0);
    match kind {
        PostKind::Submission => {
            let Some(title) = raw.title else {
                return LineOutcome::Invalid;
            };
            let mut text = title.trim().to_string();
            if opts.include_selftext {
                if let Some(body) = raw.selftext.as_deref().filter(|b| !is_empty_text(b)) {
                    if text.is_empty() {
                        text = body.trim().to_string();
                    } else {
                        text.push(' ');
                        text.push_str(body.trim());
                    }
                }
            }
            if is_empty_text(&text) {
                return LineOutcome::Empty;
            }
            LineOutcome::Post(Post {
                id: id.into_owned(),
                kind,
                created_at,
                parent_id: None,
                root_id: None,
                text,
                net_score,
            })
        }
        PostKind::Comment => {
            let (Some(body), Some(link), Some(parent)) = (raw.body, raw.link_id, raw.parent_id)
            else {
                return LineOutcome::Invalid;
            };
            let (root, parent) = (strip_prefix(&link), strip_prefix(&parent));
            if root.is_empty() || parent.is_empty() {
                return LineOutcome::Invalid;
            }
            if is_empty_text(&body) {
                return LineOutcome::Empty;
            }
            LineOutcome::Post(Post {
                id: id.into_owned(),
                kind,
                created_at,
                parent_id: Some(parent.to_string()),
                root_id: Some(root.to_string()),
                text: body.into_owned(),
                net_score,
            })
        }
    }
}

/// Lazy NDJSON reader yielding one [`Post`] per valid line.
///
/// Malformed lines are counted in [`DumpStats`] and skipped; only I/O
/// failures surface as errors.
pub struct DumpReader<R> {
    reader: R,
    kind: PostKind,
    opts: ParseOptions,
    buf: String,
    stats: DumpStats,
    failed: bool,
}

impl<R: BufRead> DumpReader<R> {
    pub fn new(reader: R, kind: PostKind, opts: ParseOptions) -> Self {
        Self {
            reader,
            kind,
            opts,
            buf: String::new(),
            stats: DumpStats::default(),
            failed: false,
        }
    }

    pub fn stats(&self) -> &DumpStats {
        &self.stats
    }

    pub fn into_stats(self) -> DumpStats {
        self.stats
    }
}

impl<R: BufRead> Iterator for DumpReader<R> {
    type Item = Result<Post>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        loop {
            self.buf.clear();
            match self.reader.read_line(&mut self.buf) {
                Ok(0) => return None,
                Ok(_) => {}
                Err(e) => {
                    self.failed = true;
                    return Some(Err(e.into()));
                }
            }
            self.stats.lines += 1;
            let line = self.buf.trim();
            if line.is_empty() {
                self.stats.skip(self.stats.lines);
                continue;
            }
            match decode(line, self.kind, self.opts) {
                LineOutcome::Post(p) => {
                    self.stats.parsed += 1;
                    return Some(Ok(p));
                }
                LineOutcome::Invalid => self.stats.skip(self.stats.lines),
                LineOutcome::Empty => self.stats.dropped_empty += 1,
            }
        }
    }
}

pub fn parse_dump<R: BufRead>(reader: R, kind: PostKind) -> DumpReader<R> {
    DumpReader::new(reader, kind, ParseOptions::default())
}

/// Writes `post` as one line of the dump schema, tagged with `concept`.
pub fn write_dump_record<W: Write>(
    mut w: W,
    post: &Post,
    concept: Option<ConceptName>,
) -> Result<()> {
    let mut value = match post.kind {
        PostKind::Submission => json!({
            "id": post.id,
            "created_utc": post.created_at,
            "title": post.text,
            "score": post.net_score,
        }),
        PostKind::Comment => {
            let root = post.root_id.as_deref().unwrap_or_default();
            let parent = post.parent_id.as_deref().unwrap_or_default();
            let parent_prefix = if parent == root { "t3_" } else { "t1_" };
            json!({
                "id": post.id,
                "created_utc": post.created_at,
                "body": post.text,
                "score": post.net_score,
                "link_id": format!("t3_{root}"),
                "parent_id": format!("{parent_prefix}{parent}"),
            })
        }
    };
    if let Some(c) = concept {
        value["concept"] = json!(c.as_str());
    }
    serde_json::to_writer(&mut w, &value)?;
    w.write_all(b"\n")?;
    Ok(())
}
