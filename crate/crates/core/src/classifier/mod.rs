//! Ternary signal classification and accuracy scoring.

mod accuracy;
mod dictionary;
mod f1;
mod prompt;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use accuracy::{accuracy_sweep, read_truth_file, SweepRow};
pub use dictionary::{dict_classify, Dictionary, DictionaryClassifier};
pub use f1::{f1_macro, ClassScore, ConfusionCounts, F1Report};
pub use prompt::{build_prompt, parse_llm_response};

use crate::corpus::{Concept, Post};
use crate::error::{Error, Result};

/// Direction a text implies for a concept. Numeric values are fixed:
/// UP = +1, NEUTRAL = 0, DOWN = -1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum SignalLabel {
    Down,
    Neutral,
    Up,
}

impl SignalLabel {
    pub const ALL: [SignalLabel; 3] = [SignalLabel::Up, SignalLabel::Neutral, SignalLabel::Down];

    pub fn value(self) -> i8 {
        match self {
            SignalLabel::Up => 1,
            SignalLabel::Neutral => 0,
            SignalLabel::Down => -1,
        }
    }

    pub fn from_value(v: i64) -> Result<Self> {
        match v {
            1 => Ok(SignalLabel::Up),
            0 => Ok(SignalLabel::Neutral),
            -1 => Ok(SignalLabel::Down),
            _ => Err(Error::invalid(format!("label value {v} not in {{-1,0,1}}"))),
        }
    }

    pub fn from_sign(x: f64) -> Self {
        if x > 0.0 {
            SignalLabel::Up
        } else if x < 0.0 {
            SignalLabel::Down
        } else {
            SignalLabel::Neutral
        }
    }

    pub fn negate(self) -> Self {
        match self {
            SignalLabel::Up => SignalLabel::Down,
            SignalLabel::Down => SignalLabel::Up,
            SignalLabel::Neutral => SignalLabel::Neutral,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SignalLabel::Up => "UP",
            SignalLabel::Neutral => "NEUTRAL",
            SignalLabel::Down => "DOWN",
        }
    }

    /// Row/column index in a confusion matrix: UP, NEUTRAL, DOWN.
    pub(crate) fn index(self) -> usize {
        match self {
            SignalLabel::Up => 0,
            SignalLabel::Neutral => 1,
            SignalLabel::Down => 2,
        }
    }
}

impl fmt::Display for SignalLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SignalLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "UP" | "1" | "+1" => Ok(SignalLabel::Up),
            "NEUTRAL" | "0" => Ok(SignalLabel::Neutral),
            "DOWN" | "-1" => Ok(SignalLabel::Down),
            other => Err(Error::Parse(format!("unknown label {other:?}"))),
        }
    }
}

/// A label attached to a post by a named classifier.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledItem {
    pub post_id: String,
    pub label: SignalLabel,
    pub classifier_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub raw_response: Option<String>,
    /// Set when the label is a fallback after exhausted retries.
    #[serde(default)]
    pub fallback: bool,
}

/// Anything that can label a batch of posts for a concept.
pub trait Classifier: Send + Sync {
    fn id(&self) -> &str;

    /// Labels `posts` in input order.
    fn classify(&self, posts: &[&Post], concept: &Concept) -> Result<Vec<LabeledItem>>;
}
