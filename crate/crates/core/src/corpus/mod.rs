//! Raw dump ingestion: posts, comment trees and concept keyword filters.

mod keywords;
mod parse;
mod tree;

use std::fmt;
use std::str::FromStr;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

pub use keywords::{keyword_filter, matches_concept, tokenize};
pub use parse::{parse_dump, write_dump_record, DumpReader, DumpStats, ParseOptions};
pub use tree::{build_comment_sets, build_forest, CommentSets, CommentTree, Forest};

use crate::calendar::utc_date;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PostKind {
    Submission,
    Comment,
}

/// A submission or a comment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Post {
    pub id: String,
    pub kind: PostKind,
    /// Epoch seconds, UTC.
    pub created_at: i64,
    /// Submission or comment this one replies to; `None` for submissions.
    pub parent_id: Option<String>,
    /// Submission at the root of the tree; `None` for submissions.
    pub root_id: Option<String>,
    pub text: String,
    /// Upvotes minus downvotes.
    pub net_score: i64,
}

impl Post {
    pub fn date(&self) -> NaiveDate {
        utc_date(self.created_at)
    }

    pub fn is_submission(&self) -> bool {
        self.kind == PostKind::Submission
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConceptName {
    Inflation,
    Unemployment,
}

impl ConceptName {
    pub const ALL: [ConceptName; 2] = [ConceptName::Inflation, ConceptName::Unemployment];

    pub fn as_str(self) -> &'static str {
        match self {
            ConceptName::Inflation => "inflation",
            ConceptName::Unemployment => "unemployment",
        }
    }

    /// The phrase substituted into the classification prompt.
    pub fn prompt_phrase(self) -> &'static str {
        match self {
            ConceptName::Inflation => "inflation rate",
            ConceptName::Unemployment => "unemployment rate",
        }
    }
}

impl fmt::Display for ConceptName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ConceptName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inflation" | "inflation rate" => Ok(ConceptName::Inflation),
            "unemployment" | "unemployment rate" => Ok(ConceptName::Unemployment),
            other => Err(Error::invalid(format!("unknown concept {other:?}"))),
        }
    }
}

/// A macroeconomic concept and the keywords that select posts about it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Concept {
    pub name: ConceptName,
    keywords: Vec<String>,
}

impl Concept {
    pub fn new(name: ConceptName, keywords: impl IntoIterator<Item = impl Into<String>>) -> Result<Self> {
        let keywords: Vec<String> = keywords
            .into_iter()
            .map(|k| k.into().trim().to_lowercase())
            .filter(|k| !k.is_empty())
            .collect();
        if keywords.is_empty() {
            return Err(Error::invalid(format!("concept {name} has no keywords")));
        }
        Ok(Self { name, keywords })
    }

    pub fn inflation() -> Self {
        Self::new(
            ConceptName::Inflation,
            ["inflation", "deflation", "hyperinflation", "price"],
        )
        .expect("non-empty")
    }

    pub fn unemployment() -> Self {
        Self::new(
            ConceptName::Unemployment,
            ["unemployment", "employment", "unemployed", "job"],
        )
        .expect("non-empty")
    }

    pub fn default_for(name: ConceptName) -> Self {
        match name {
            ConceptName::Inflation => Self::inflation(),
            ConceptName::Unemployment => Self::unemployment(),
        }
    }

    pub fn keywords(&self) -> &[String] {
        &self.keywords
    }
}
